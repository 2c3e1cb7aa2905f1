// Readers for STL (binary and ASCII), OBJ (v/f records) and PLY (ascii or
// binary little-endian), plus the PLY writer used for coverage exports.
#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "coverplan/errors.hpp"
#include "coverplan/mesh.hpp"

namespace coverplan {

namespace {

[[noreturn]] void format_error(const std::string& what, std::size_t where, bool is_line) {
    throw MeshFormatError(what + (is_line ? " at line " : " at byte offset ") +
                          std::to_string(where));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInputError("cannot open mesh file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// STL facets repeat vertices; weld exact duplicates so watertight solids stay
// watertight through a round trip.
class VertexWelder {
public:
    int add(const Vec3& v) {
        const auto key = std::array<double, 3>{v.x, v.y, v.z};
        auto [it, inserted] = index_.try_emplace(key, static_cast<int>(vertices_.size()));
        if (inserted) vertices_.push_back(v);
        return it->second;
    }
    std::vector<Vec3> take() { return std::move(vertices_); }

private:
    std::map<std::array<double, 3>, int> index_;
    std::vector<Vec3> vertices_;
};

TriangleMesh load_stl_binary(const std::string& data) {
    constexpr std::size_t kHeader = 80;
    if (data.size() < kHeader + 4) format_error("binary STL truncated before facet count", data.size(), false);
    std::uint32_t count = 0;
    std::memcpy(&count, data.data() + kHeader, 4);
    const std::size_t expected = kHeader + 4 + static_cast<std::size_t>(count) * 50;
    if (data.size() < expected)
        format_error("binary STL truncated (" + std::to_string(count) + " facets declared)",
                     data.size(), false);

    VertexWelder welder;
    std::vector<TriangleMesh::Triangle> triangles;
    triangles.reserve(count);
    const char* facet = data.data() + kHeader + 4;
    for (std::uint32_t i = 0; i < count; ++i, facet += 50) {
        float coords[12];  // normal + 3 vertices
        std::memcpy(coords, facet, sizeof(coords));
        TriangleMesh::Triangle tri;
        for (int k = 0; k < 3; ++k) {
            const Vec3 v{coords[3 + 3 * k], coords[4 + 3 * k], coords[5 + 3 * k]};
            tri[k] = welder.add(v);
        }
        triangles.push_back(tri);
    }
    if (triangles.empty()) throw InvalidInputError("binary STL contains no facets");
    return TriangleMesh::build(welder.take(), std::move(triangles));
}

TriangleMesh load_stl_ascii(const std::string& data) {
    std::istringstream in(data);
    std::string tok;
    std::size_t line = 1;

    VertexWelder welder;
    std::vector<TriangleMesh::Triangle> triangles;
    std::vector<int> pending;

    std::string current;
    std::istringstream line_in;
    auto next_token = [&](std::string& out) -> bool {
        while (!(line_in >> out)) {
            if (!std::getline(in, current)) return false;
            ++line;
            line_in.clear();
            line_in.str(current);
        }
        return true;
    };

    // Prime with line 1.
    if (!std::getline(in, current)) format_error("empty STL file", 1, true);
    line_in.str(current);

    bool saw_solid = false;
    while (next_token(tok)) {
        if (tok == "solid") {
            saw_solid = true;
        } else if (tok == "vertex") {
            Vec3 v;
            for (int k = 0; k < 3; ++k) {
                std::string num;
                if (!next_token(num)) format_error("vertex missing coordinate", line, true);
                try {
                    v[k] = std::stod(num);
                } catch (const std::exception&) {
                    format_error("bad vertex coordinate '" + num + "'", line, true);
                }
            }
            pending.push_back(welder.add(v));
        } else if (tok == "endfacet") {
            if (pending.size() != 3)
                format_error("facet has " + std::to_string(pending.size()) + " vertices", line, true);
            triangles.push_back({pending[0], pending[1], pending[2]});
            pending.clear();
        }
    }
    if (!saw_solid) format_error("not an ASCII STL (no 'solid' keyword)", 1, true);
    if (triangles.empty()) throw InvalidInputError("ASCII STL contains no facets");
    return TriangleMesh::build(welder.take(), std::move(triangles));
}

TriangleMesh load_obj(const std::string& data) {
    std::istringstream in(data);
    std::string record;
    std::size_t line = 0;

    std::vector<Vec3> vertices;
    std::vector<TriangleMesh::Triangle> triangles;

    while (std::getline(in, record)) {
        ++line;
        std::istringstream ls(record);
        std::string head;
        if (!(ls >> head) || head[0] == '#') continue;
        if (head == "v") {
            Vec3 v;
            if (!(ls >> v.x >> v.y >> v.z)) format_error("bad 'v' record", line, true);
            vertices.push_back(v);
        } else if (head == "f") {
            std::vector<int> ids;
            std::string ref;
            while (ls >> ref) {
                // "i", "i/t", "i/t/n", "i//n" all start with the vertex index.
                const auto slash = ref.find('/');
                const std::string idx = slash == std::string::npos ? ref : ref.substr(0, slash);
                int vi = 0;
                try {
                    vi = std::stoi(idx);
                } catch (const std::exception&) {
                    format_error("bad face index '" + ref + "'", line, true);
                }
                if (vi < 0) vi = static_cast<int>(vertices.size()) + vi + 1;  // relative
                if (vi < 1 || vi > static_cast<int>(vertices.size()))
                    format_error("face index " + idx + " out of range", line, true);
                ids.push_back(vi - 1);
            }
            if (ids.size() != 3)
                format_error("face with " + std::to_string(ids.size()) +
                             " vertices (triangles only)", line, true);
            triangles.push_back({ids[0], ids[1], ids[2]});
        }
    }
    if (vertices.empty() || triangles.empty())
        throw InvalidInputError("OBJ contains no triangles");
    return TriangleMesh::build(std::move(vertices), std::move(triangles));
}

struct PlyProperty {
    std::string name;
    std::string type;       // scalar type, or list element type
    std::string count_type; // non-empty for list properties
};

struct PlyElement {
    std::string name;
    std::size_t count{0};
    std::vector<PlyProperty> properties;
};

std::size_t ply_type_size(const std::string& t, std::size_t line) {
    if (t == "char" || t == "uchar" || t == "int8" || t == "uint8") return 1;
    if (t == "short" || t == "ushort" || t == "int16" || t == "uint16") return 2;
    if (t == "int" || t == "uint" || t == "int32" || t == "uint32" || t == "float" || t == "float32") return 4;
    if (t == "double" || t == "float64") return 8;
    format_error("unknown PLY type '" + t + "'", line, true);
}

double ply_read_binary(const char*& p, const std::string& type) {
    auto read_as = [&p]<typename T>() {
        T v;
        std::memcpy(&v, p, sizeof(T));
        p += sizeof(T);
        return static_cast<double>(v);
    };
    const std::size_t sz = ply_type_size(type, 0);
    if (type == "float" || type == "float32") return read_as.operator()<float>();
    if (type == "double" || type == "float64") return read_as.operator()<double>();
    if (type == "char" || type == "int8") return read_as.operator()<std::int8_t>();
    if (type == "uchar" || type == "uint8") return read_as.operator()<std::uint8_t>();
    if (type == "short" || type == "int16") return read_as.operator()<std::int16_t>();
    if (type == "ushort" || type == "uint16") return read_as.operator()<std::uint16_t>();
    if (type == "int" || type == "int32") return read_as.operator()<std::int32_t>();
    (void)sz;
    return read_as.operator()<std::uint32_t>();
}

TriangleMesh load_ply(const std::string& data) {
    std::size_t pos = 0;
    std::size_t line = 0;
    auto next_line = [&]() -> std::string {
        const auto nl = data.find('\n', pos);
        if (nl == std::string::npos) format_error("PLY header truncated", line + 1, true);
        std::string out = data.substr(pos, nl - pos);
        if (!out.empty() && out.back() == '\r') out.pop_back();
        pos = nl + 1;
        ++line;
        return out;
    };

    if (next_line() != "ply") format_error("missing 'ply' magic", 1, true);
    bool binary = false;
    std::vector<PlyElement> elements;
    for (;;) {
        const std::string l = next_line();
        std::istringstream ls(l);
        std::string head;
        ls >> head;
        if (head == "comment" || head == "obj_info") continue;
        if (head == "format") {
            std::string fmt;
            ls >> fmt;
            if (fmt == "binary_little_endian") binary = true;
            else if (fmt == "ascii") binary = false;
            else format_error("unsupported PLY format '" + fmt + "'", line, true);
        } else if (head == "element") {
            PlyElement el;
            ls >> el.name >> el.count;
            elements.push_back(el);
        } else if (head == "property") {
            if (elements.empty()) format_error("property before element", line, true);
            PlyProperty prop;
            std::string t;
            ls >> t;
            if (t == "list") {
                ls >> prop.count_type >> prop.type >> prop.name;
            } else {
                prop.type = t;
                ls >> prop.name;
            }
            elements.back().properties.push_back(prop);
        } else if (head == "end_header") {
            break;
        } else {
            format_error("unexpected header line '" + l + "'", line, true);
        }
    }

    std::vector<Vec3> vertices;
    std::vector<TriangleMesh::Triangle> triangles;

    const char* bin = data.data() + pos;
    const char* bin_end = data.data() + data.size();
    std::istringstream ascii(binary ? std::string{} : data.substr(pos));

    for (const auto& el : elements) {
        for (std::size_t i = 0; i < el.count; ++i) {
            double x = 0, y = 0, z = 0;
            std::vector<long long> list_values;
            for (const auto& prop : el.properties) {
                if (!prop.count_type.empty()) {
                    long long n = 0;
                    if (binary) {
                        if (bin + ply_type_size(prop.count_type, line) > bin_end)
                            format_error("PLY data truncated", static_cast<std::size_t>(bin - data.data()), false);
                        n = static_cast<long long>(ply_read_binary(bin, prop.count_type));
                    } else if (!(ascii >> n)) {
                        format_error("PLY ascii data truncated", line, true);
                    }
                    list_values.clear();
                    for (long long k = 0; k < n; ++k) {
                        double v = 0;
                        if (binary) {
                            if (bin + ply_type_size(prop.type, line) > bin_end)
                                format_error("PLY data truncated", static_cast<std::size_t>(bin - data.data()), false);
                            v = ply_read_binary(bin, prop.type);
                        } else if (!(ascii >> v)) {
                            format_error("PLY ascii data truncated", line, true);
                        }
                        if (prop.name == "vertex_indices" || prop.name == "vertex_index")
                            list_values.push_back(static_cast<long long>(v));
                    }
                } else {
                    double v = 0;
                    if (binary) {
                        if (bin + ply_type_size(prop.type, line) > bin_end)
                            format_error("PLY data truncated", static_cast<std::size_t>(bin - data.data()), false);
                        v = ply_read_binary(bin, prop.type);
                    } else if (!(ascii >> v)) {
                        format_error("PLY ascii data truncated", line, true);
                    }
                    if (prop.name == "x") x = v;
                    else if (prop.name == "y") y = v;
                    else if (prop.name == "z") z = v;
                }
            }
            if (el.name == "vertex") {
                vertices.push_back({x, y, z});
            } else if (el.name == "face") {
                if (list_values.size() != 3)
                    format_error("face with " + std::to_string(list_values.size()) +
                                 " vertices (triangles only)", line, true);
                triangles.push_back({static_cast<int>(list_values[0]),
                                     static_cast<int>(list_values[1]),
                                     static_cast<int>(list_values[2])});
            }
        }
    }
    if (vertices.empty() || triangles.empty()) throw InvalidInputError("PLY contains no triangles");
    return TriangleMesh::build(std::move(vertices), std::move(triangles));
}

}  // namespace

MeshFormat detect_mesh_format(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".obj") return MeshFormat::Obj;
    if (ext == ".ply") return MeshFormat::Ply;
    if (ext == ".stl") {
        // An ASCII STL starts with "solid" and contains "facet" early on.
        std::ifstream in(path, std::ios::binary);
        char head[512] = {};
        in.read(head, sizeof(head) - 1);
        const std::string s(head, static_cast<std::size_t>(in.gcount()));
        if (s.rfind("solid", 0) == 0 && s.find("facet") != std::string::npos)
            return MeshFormat::StlAscii;
        return MeshFormat::StlBinary;
    }
    throw InvalidInputError("cannot infer mesh format from extension '" + ext + "'");
}

TriangleMesh load_mesh(const std::filesystem::path& path, MeshFormat format) {
    const std::string data = read_file(path);
    switch (format) {
        case MeshFormat::StlBinary: return load_stl_binary(data);
        case MeshFormat::StlAscii: return load_stl_ascii(data);
        case MeshFormat::Obj: return load_obj(data);
        case MeshFormat::Ply: return load_ply(data);
    }
    throw InvalidInputError("unknown mesh format");
}

void save_ply(const std::filesystem::path& path, const TriangleMesh& mesh,
              const std::vector<std::array<std::uint8_t, 3>>& face_colors) {
    if (!face_colors.empty() && face_colors.size() != mesh.triangle_count())
        throw InvalidInputError("face color count does not match triangle count");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInputError("cannot open for writing: " + path.string());

    out << "ply\nformat binary_little_endian 1.0\n";
    out << "element vertex " << mesh.vertices().size() << "\n";
    out << "property double x\nproperty double y\nproperty double z\n";
    out << "element face " << mesh.triangle_count() << "\n";
    out << "property list uchar int vertex_indices\n";
    if (!face_colors.empty())
        out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    out << "end_header\n";

    for (const Vec3& v : mesh.vertices()) {
        double xyz[3] = {v.x, v.y, v.z};
        out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
    }
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        const std::uint8_t n = 3;
        out.write(reinterpret_cast<const char*>(&n), 1);
        const auto& tri = mesh.triangles()[t];
        const std::int32_t ids[3] = {tri[0], tri[1], tri[2]};
        out.write(reinterpret_cast<const char*>(ids), sizeof(ids));
        if (!face_colors.empty())
            out.write(reinterpret_cast<const char*>(face_colors[t].data()), 3);
    }
    if (!out) throw InvalidInputError("write failed: " + path.string());
}

}  // namespace coverplan
