#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dexoff/error.hpp"
#include "dexoff/io.hpp"

namespace dexoff {

using Vec3 = std::array<double, 3>;

struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> faces;
    /// Faces dropped at load time because they had zero area.
    std::size_t dropped_faces = 0;
};

namespace detail {

inline Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm2(const Vec3& a) { return a[0] * a[0] + a[1] * a[1] + a[2] * a[2]; }

inline bool degenerate_face(const TriangleMesh& m, const std::array<std::uint32_t, 3>& f) {
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) return true;
    const Vec3& a = m.vertices[f[0]];
    const Vec3 e1 = sub(m.vertices[f[1]], a), e2 = sub(m.vertices[f[2]], a);
    const double scale = std::max({norm2(e1), norm2(e2), norm2(sub(e2, e1))});
    return norm2(cross(e1, e2)) <= 1e-28 * scale * scale;
}

/// Drops zero-area faces, counting them, and rejects empty meshes.
inline TriangleMesh finish_mesh(TriangleMesh m) {
    std::vector<std::array<std::uint32_t, 3>> kept;
    kept.reserve(m.faces.size());
    for (const auto& f : m.faces) {
        if (degenerate_face(m, f))
            ++m.dropped_faces;
        else
            kept.push_back(f);
    }
    m.faces = std::move(kept);
    if (m.faces.empty()) throw InvalidInput("mesh has no non-degenerate faces");
    return m;
}

inline TriangleMesh parse_obj(const std::string& text) {
    TriangleMesh m;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::vector<std::int64_t>> raw_faces;
    std::vector<std::size_t> face_lines;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            Vec3 p;
            if (!(ls >> p[0] >> p[1] >> p[2]))
                throw FormatError("obj: malformed vertex on line " + std::to_string(lineno));
            for (double c : p)
                if (!std::isfinite(c))
                    throw FormatError("obj: non-finite vertex on line " + std::to_string(lineno));
            m.vertices.push_back(p);
        } else if (tag == "f") {
            std::vector<std::int64_t> idx;
            std::string tok;
            while (ls >> tok) {
                const std::string head = tok.substr(0, tok.find('/'));
                std::int64_t v = 0;
                try {
                    std::size_t used = 0;
                    v = std::stoll(head, &used);
                    if (used != head.size()) throw std::invalid_argument(head);
                } catch (const std::exception&) {
                    throw FormatError("obj: malformed face index on line " + std::to_string(lineno));
                }
                idx.push_back(v);
            }
            if (idx.size() < 3)
                throw FormatError("obj: face with fewer than 3 vertices on line " +
                                  std::to_string(lineno));
            raw_faces.push_back(std::move(idx));
            face_lines.push_back(lineno);
        }
        // vt, vn, g, o, s, usemtl and friends are ignored.
    }
    const auto nv = std::int64_t(m.vertices.size());
    for (std::size_t k = 0; k < raw_faces.size(); ++k) {
        std::vector<std::uint32_t> idx;
        for (std::int64_t v : raw_faces[k]) {
            const std::int64_t r = v > 0 ? v - 1 : nv + v;
            if (v == 0 || r < 0 || r >= nv)
                throw FormatError("obj: face index out of range on line " +
                                  std::to_string(face_lines[k]));
            idx.push_back(std::uint32_t(r));
        }
        for (std::size_t t = 1; t + 1 < idx.size(); ++t) m.faces.push_back({idx[0], idx[t], idx[t + 1]});
    }
    return m;
}

/// Shares vertices with bit-identical coordinates.
class VertexWelder {
  public:
    explicit VertexWelder(TriangleMesh& m) : mesh_(m) {}
    std::uint32_t add(const Vec3& p) {
        auto [it, inserted] = index_.try_emplace(p, std::uint32_t(mesh_.vertices.size()));
        if (inserted) mesh_.vertices.push_back(p);
        return it->second;
    }

  private:
    TriangleMesh& mesh_;
    std::map<Vec3, std::uint32_t> index_;
};

inline TriangleMesh parse_stl_binary(std::string_view data) {
    ByteReader rd(data.substr(80));
    const std::uint32_t count = rd.u32();
    if (std::uint64_t(count) * 50 != rd.remaining())
        throw FormatError("stl: binary size mismatch, expected " + std::to_string(84 + 50ull * count) +
                          " bytes, got " + std::to_string(data.size()));
    TriangleMesh m;
    VertexWelder weld(m);
    auto f32 = [&](std::size_t off) {
        std::uint32_t bits = 0;
        for (int k = 0; k < 4; ++k) bits |= std::uint32_t(std::uint8_t(data[off + k])) << (8 * k);
        return double(std::bit_cast<float>(bits));
    };
    for (std::uint32_t t = 0; t < count; ++t) {
        const std::size_t base = 84 + std::size_t(t) * 50 + 12;  // skip the normal
        std::array<std::uint32_t, 3> f{};
        for (int v = 0; v < 3; ++v) {
            const std::size_t o = base + std::size_t(v) * 12;
            f[v] = weld.add({f32(o), f32(o + 4), f32(o + 8)});
        }
        m.faces.push_back(f);
    }
    return m;
}

inline TriangleMesh parse_stl_ascii(const std::string& text) {
    TriangleMesh m;
    VertexWelder weld(m);
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::uint32_t> loop;
    bool in_loop = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "outer") {
            loop.clear();
            in_loop = true;
        } else if (tag == "vertex") {
            Vec3 p;
            if (!in_loop || !(ls >> p[0] >> p[1] >> p[2]))
                throw FormatError("stl: malformed vertex on line " + std::to_string(lineno));
            loop.push_back(weld.add(p));
        } else if (tag == "endloop") {
            if (loop.size() != 3)
                throw FormatError("stl: facet without exactly 3 vertices ending on line " +
                                  std::to_string(lineno));
            m.faces.push_back({loop[0], loop[1], loop[2]});
            in_loop = false;
        }
    }
    if (in_loop) throw FormatError("stl: truncated file, unterminated facet at line " + std::to_string(lineno));
    if (text.find("endsolid") == std::string::npos)
        throw FormatError("stl: truncated file, missing endsolid");
    return m;
}

}  // namespace detail

/// Parses OBJ (v/f records) or STL (binary or ascii) content. `extension` is
/// "obj" or "stl".
inline TriangleMesh parse_mesh(const std::string& data, std::string_view extension) {
    if (extension == "obj") return detail::finish_mesh(detail::parse_obj(data));
    if (extension == "stl") {
        if (data.size() >= 84) {
            std::uint32_t count = 0;
            for (int k = 0; k < 4; ++k) count |= std::uint32_t(std::uint8_t(data[80 + k])) << (8 * k);
            if (84 + 50ull * count == data.size())
                return detail::finish_mesh(detail::parse_stl_binary(data));
        }
        if (data.rfind("solid", 0) == 0) return detail::finish_mesh(detail::parse_stl_ascii(data));
        if (data.size() < 84) throw FormatError("stl: truncated file, shorter than binary header");
        return detail::finish_mesh(detail::parse_stl_binary(data));
    }
    throw InvalidInput("unsupported mesh extension: " + std::string(extension));
}

inline TriangleMesh load_mesh(const std::string& path) {
    const auto dot = path.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    for (char& c : ext) c = char(std::tolower(static_cast<unsigned char>(c)));
    if (ext != "obj" && ext != "stl") throw InvalidInput("unsupported mesh extension: " + path);
    return parse_mesh(detail::read_file(path), ext);
}

/// Enclosed volume by the divergence theorem (signed tetrahedra against the origin).
inline double mesh_volume(const TriangleMesh& m) {
    double v = 0.0;
    for (const auto& f : m.faces) {
        const Vec3 &a = m.vertices[f[0]], &b = m.vertices[f[1]], &c = m.vertices[f[2]];
        v += a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
             a[2] * (b[0] * c[1] - b[1] * c[0]);
    }
    return v / 6.0;
}

inline std::string to_obj(const TriangleMesh& m) {
    std::ostringstream out;
    out.precision(17);
    for (const Vec3& p : m.vertices) out << "v " << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
    for (const auto& f : m.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
    return out.str();
}

/// Little-endian binary STL, 32-bit float coordinates.
inline std::string to_stl_binary(const TriangleMesh& m) {
    std::string buf(80, '\0');
    detail::put_u32(buf, std::uint32_t(m.faces.size()));
    auto put_f32 = [&](double d) {
        const auto bits = std::bit_cast<std::uint32_t>(float(d));
        for (int k = 0; k < 4; ++k) buf.push_back(char((bits >> (8 * k)) & 0xffu));
    };
    for (const auto& f : m.faces) {
        for (int k = 0; k < 3; ++k) put_f32(0.0);
        for (auto v : f)
            for (double c : m.vertices[v]) put_f32(c);
        buf.push_back('\0');
        buf.push_back('\0');
    }
    return buf;
}

/// Axis-aligned box with outward-facing triangles.
inline TriangleMesh make_box_mesh(const Vec3& lo, const Vec3& hi) {
    TriangleMesh m;
    for (int c = 0; c < 8; ++c)
        m.vertices.push_back({c & 1 ? hi[0] : lo[0], c & 2 ? hi[1] : lo[1], c & 4 ? hi[2] : lo[2]});
    static constexpr std::uint32_t faces[12][3] = {{0, 2, 3}, {0, 3, 1}, {4, 5, 7}, {4, 7, 6},
                                                   {0, 1, 5}, {0, 5, 4}, {2, 6, 7}, {2, 7, 3},
                                                   {0, 4, 6}, {0, 6, 2}, {1, 3, 7}, {1, 7, 5}};
    for (const auto& f : faces) m.faces.push_back({f[0], f[1], f[2]});
    return m;
}

/// Subdivided icosahedron projected onto a sphere.
inline TriangleMesh make_icosphere(const Vec3& center, double radius, int subdivisions) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                           {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    std::vector<std::array<std::uint32_t, 3>> f = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
        {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    auto unit = [](Vec3 p) {
        const double n = std::sqrt(detail::norm2(p));
        return Vec3{p[0] / n, p[1] / n, p[2] / n};
    };
    for (auto& p : v) p = unit(p);
    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> mid;
        auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
            const auto key = std::minmax(a, b);
            auto it = mid.find(key);
            if (it != mid.end()) return it->second;
            v.push_back(unit({(v[a][0] + v[b][0]) / 2, (v[a][1] + v[b][1]) / 2, (v[a][2] + v[b][2]) / 2}));
            const auto id = std::uint32_t(v.size() - 1);
            mid.emplace(key, id);
            return id;
        };
        std::vector<std::array<std::uint32_t, 3>> next;
        for (const auto& tri : f) {
            const auto a = midpoint(tri[0], tri[1]), b = midpoint(tri[1], tri[2]), c = midpoint(tri[2], tri[0]);
            next.push_back({tri[0], a, c});
            next.push_back({tri[1], b, a});
            next.push_back({tri[2], c, b});
            next.push_back({a, b, c});
        }
        f = std::move(next);
    }
    TriangleMesh m;
    for (const auto& p : v)
        m.vertices.push_back({center[0] + radius * p[0], center[1] + radius * p[1], center[2] + radius * p[2]});
    m.faces = std::move(f);
    return m;
}

}  // namespace dexoff
