#pragma once

#include "dexoff/offset3d.hpp"

namespace dexoff {

/// Erosion then dilation, returned on the input grid.
inline DexelGrid open_grid(const DexelGrid& in, double r, const OffsetOptions& opt = {}) {
    const DexelGrid eroded = erode_grid(in, r, opt);
    return dilate_into(eroded, r, in.geometry(), opt);
}

/// Dilation then erosion. The erosion runs on the grown grid so nothing the
/// dilation added is cut off by the input border; the result is cropped back.
inline DexelGrid close_grid(const DexelGrid& in, double r, const OffsetOptions& opt = {}) {
    const DexelGrid grown = dilate_grid(in, r, opt);
    return resample_to(erode_grid(grown, r, opt), in.geometry());
}

/// dilate(r_out) minus erode(r_in), on the dilation grid. r_in = 0 gives the
/// outer offset band.
inline DexelGrid shell_grid(const DexelGrid& in, double r_out, double r_in, const OffsetOptions& opt = {}) {
    if (!(r_out >= 0.0) || !(r_in >= 0.0)) throw InvalidInput("shell: radii must be >= 0");
    const DexelGrid outer = dilate_grid(in, r_out, opt);
    const DexelGrid inner = resample_to(erode_grid(in, r_in, opt), outer.geometry());
    return grid_boolean(outer, inner, BooleanOp::Difference);
}

}  // namespace dexoff
