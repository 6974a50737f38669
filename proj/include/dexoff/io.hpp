#pragma once

// .dxl  : little-endian binary. "DXL1", u32 nx, u32 ny, f64 origin_x, f64 origin_y,
//         f64 spacing, f64 z_min, f64 z_max, then nx*ny records (j outer, i inner),
//         each a u32 count followed by count (f64 z_in, f64 z_out) pairs.
// .dxl.txt: the same content as text, header line then one column per line.

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include "dexoff/grid.hpp"

namespace dexoff {

namespace detail {

inline void put_u32(std::string& buf, std::uint32_t v) {
    for (int k = 0; k < 4; ++k) buf.push_back(char((v >> (8 * k)) & 0xffu));
}

inline void put_f64(std::string& buf, double d) {
    const auto bits = std::bit_cast<std::uint64_t>(d);
    for (int k = 0; k < 8; ++k) buf.push_back(char((bits >> (8 * k)) & 0xffu));
}

class ByteReader {
  public:
    explicit ByteReader(std::string_view data) : data_(data) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int k = 0; k < 4; ++k) v |= std::uint32_t(std::uint8_t(data_[pos_ + k])) << (8 * k);
        pos_ += 4;
        return v;
    }

    double f64() {
        need(8);
        std::uint64_t v = 0;
        for (int k = 0; k < 8; ++k) v |= std::uint64_t(std::uint8_t(data_[pos_ + k])) << (8 * k);
        pos_ += 8;
        return std::bit_cast<double>(v);
    }

    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return data_.size() - pos_; }

  private:
    void need(std::size_t n) const {
        if (data_.size() - pos_ < n)
            throw FormatError("dxl: truncated file at byte offset " + std::to_string(pos_));
    }

    std::string_view data_;
    std::size_t pos_ = 0;
};

inline std::string format_double(double d) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), d);
    return std::string(buf, res.ptr);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path);
    out.write(data.data(), std::streamsize(data.size()));
    if (!out) throw FormatError("write failed for " + path);
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

inline void check_loaded(const DexelGrid& g) {
    try {
        g.validate();
    } catch (const InvalidInput& e) {
        throw FormatError(std::string("dxl: ") + e.what());
    }
}

}  // namespace detail

inline std::string encode_dxl(const DexelGrid& g) {
    std::string buf;
    buf.reserve(52 + g.columns().size() * 4 + g.interval_count() * 16);
    buf.append("DXL1", 4);
    const GridGeometry& geo = g.geometry();
    detail::put_u32(buf, geo.nx);
    detail::put_u32(buf, geo.ny);
    detail::put_f64(buf, geo.origin_x);
    detail::put_f64(buf, geo.origin_y);
    detail::put_f64(buf, geo.spacing);
    detail::put_f64(buf, geo.z_min);
    detail::put_f64(buf, geo.z_max);
    for (const DexelColumn& c : g.columns()) {
        detail::put_u32(buf, std::uint32_t(c.size()));
        for (const Interval& iv : c) {
            detail::put_f64(buf, iv.z_in);
            detail::put_f64(buf, iv.z_out);
        }
    }
    return buf;
}

inline DexelGrid decode_dxl(std::string_view data) {
    if (data.size() < 4 || data.substr(0, 4) != "DXL1") throw FormatError("dxl: bad magic");
    detail::ByteReader rd(data.substr(4));
    GridGeometry geo;
    geo.nx = rd.u32();
    geo.ny = rd.u32();
    geo.origin_x = rd.f64();
    geo.origin_y = rd.f64();
    geo.spacing = rd.f64();
    geo.z_min = rd.f64();
    geo.z_max = rd.f64();
    try {
        geo.validate();
    } catch (const InvalidInput& e) {
        throw FormatError(std::string("dxl: ") + e.what());
    }
    // Every record takes at least 4 bytes; reject absurd headers before allocating.
    if (std::uint64_t(geo.nx) * geo.ny * 4 > rd.remaining())
        throw FormatError("dxl: truncated file, header announces more columns than present");
    DexelGrid g(geo);
    for (DexelColumn& c : g.columns()) {
        const std::uint32_t count = rd.u32();
        if (std::uint64_t(count) * 16 > rd.remaining())
            throw FormatError("dxl: truncated column record at byte offset " +
                              std::to_string(rd.offset() + 4));
        c.resize(count);
        for (Interval& iv : c) {
            iv.z_in = rd.f64();
            iv.z_out = rd.f64();
        }
    }
    if (rd.remaining() != 0) throw FormatError("dxl: trailing bytes after last column");
    detail::check_loaded(g);
    return g;
}

inline std::string encode_dxl_text(const DexelGrid& g) {
    const GridGeometry& geo = g.geometry();
    std::string out = "DXL1 " + std::to_string(geo.nx) + " " + std::to_string(geo.ny);
    for (double d : {geo.origin_x, geo.origin_y, geo.spacing, geo.z_min, geo.z_max})
        out += " " + detail::format_double(d);
    out += "\n";
    for (const DexelColumn& c : g.columns()) {
        out += std::to_string(c.size());
        for (const Interval& iv : c)
            out += " " + detail::format_double(iv.z_in) + " " + detail::format_double(iv.z_out);
        out += "\n";
    }
    return out;
}

inline DexelGrid decode_dxl_text(const std::string& text) {
    std::istringstream in(text);
    std::string magic;
    GridGeometry geo;
    std::string line;
    if (!std::getline(in, line)) throw FormatError("dxl.txt: empty file");
    {
        std::istringstream hs(line);
        if (!(hs >> magic >> geo.nx >> geo.ny >> geo.origin_x >> geo.origin_y >> geo.spacing >>
              geo.z_min >> geo.z_max) ||
            magic != "DXL1")
            throw FormatError("dxl.txt: bad header on line 1");
    }
    try {
        geo.validate();
    } catch (const InvalidInput& e) {
        throw FormatError(std::string("dxl.txt: ") + e.what());
    }
    DexelGrid g(geo);
    std::size_t lineno = 1;
    for (DexelColumn& c : g.columns()) {
        ++lineno;
        if (!std::getline(in, line))
            throw FormatError("dxl.txt: missing column record on line " + std::to_string(lineno));
        std::istringstream ls(line);
        std::size_t count = 0;
        if (!(ls >> count)) throw FormatError("dxl.txt: bad count on line " + std::to_string(lineno));
        c.resize(count);
        for (Interval& iv : c)
            if (!(ls >> iv.z_in >> iv.z_out))
                throw FormatError("dxl.txt: bad interval on line " + std::to_string(lineno));
    }
    detail::check_loaded(g);
    return g;
}

/// Loads .dxl or .dxl.txt, chosen by extension.
inline DexelGrid load_dxl(const std::string& path) {
    const std::string data = detail::read_file(path);
    if (detail::ends_with(path, ".txt")) return decode_dxl_text(data);
    return decode_dxl(data);
}

inline void save_dxl(const DexelGrid& g, const std::string& path) {
    detail::write_file(path, detail::ends_with(path, ".txt") ? encode_dxl_text(g) : encode_dxl(g));
}

enum class ExportMode { Points, Boxes };

/// OBJ for inspection: interval endpoints as points, or one cuboid per interval.
inline std::string export_obj(const DexelGrid& g, ExportMode mode) {
    const GridGeometry& geo = g.geometry();
    std::ostringstream out;
    out.precision(17);
    std::size_t base = 1;
    const double half = 0.5 * geo.spacing;
    for (std::uint32_t j = 0; j < g.ny(); ++j) {
        for (std::uint32_t i = 0; i < g.nx(); ++i) {
            const double x = geo.column_x(i), y = geo.column_y(j);
            for (const Interval& iv : g.at(i, j)) {
                if (mode == ExportMode::Points) {
                    out << "v " << x << ' ' << y << ' ' << iv.z_in << '\n';
                    out << "v " << x << ' ' << y << ' ' << iv.z_out << '\n';
                    continue;
                }
                for (int c = 0; c < 8; ++c) {
                    out << "v " << (c & 1 ? x + half : x - half) << ' '
                        << (c & 2 ? y + half : y - half) << ' ' << (c & 4 ? iv.z_out : iv.z_in)
                        << '\n';
                }
                // Corner k has bits (x, y, z); faces wound outward.
                static constexpr int faces[12][3] = {{0, 2, 3}, {0, 3, 1}, {4, 5, 7}, {4, 7, 6},
                                                     {0, 1, 5}, {0, 5, 4}, {2, 6, 7}, {2, 7, 3},
                                                     {0, 4, 6}, {0, 6, 2}, {1, 3, 7}, {1, 7, 5}};
                for (const auto& f : faces)
                    out << "f " << base + f[0] << ' ' << base + f[1] << ' ' << base + f[2] << '\n';
                base += 8;
            }
        }
    }
    return out.str();
}

}  // namespace dexoff
