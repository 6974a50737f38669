#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dexoff {

/// Bad argument or malformed data handed to an operation.
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Two grids do not share nx, ny, origin, spacing and z domain.
struct IncompatibleGrids : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Parse failure while reading a mesh or dexel file.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A ray crossed the mesh boundary an odd number of times.
struct NonWatertight : std::runtime_error {
    NonWatertight(std::size_t i, std::size_t j)
        : std::runtime_error("odd crossing count on column (" + std::to_string(i) + ", " +
                             std::to_string(j) + "): mesh is not watertight"),
          column_i(i),
          column_j(j) {}
    std::size_t column_i;
    std::size_t column_j;
};

}  // namespace dexoff
