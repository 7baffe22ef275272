#include "ergoscope/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace ergoscope {

namespace {

[[noreturn]] void malformed(const std::string& what) {
    throw InvalidInput("malformed file: " + what);
}

bool next_content_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        return true;
    }
    return false;
}

double parse_double(const std::string& token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        malformed("bad number '" + token + "'");
    }
    if (used != token.size()) malformed("bad number '" + token + "'");
    return v;
}

}  // namespace

std::string Provenance::line() const {
    return std::string("ergoscope ") + kVersion + " config_hash=" + config_hash +
           " seed=" + std::to_string(seed);
}

std::string format_number(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

void write_scatter_csv(std::ostream& out, const ScatterField& field, const Provenance& prov) {
    out << "# " << prov.line() << '\n';
    out << "# dex_max=" << format_number(field.dex_max, 17) << '\n';
    out << "x,y,z,dex_raw,dex_norm\n";
    for (const DexSample& s : field.samples) {
        out << format_number(s.position.x()) << ',' << format_number(s.position.y()) << ','
            << format_number(s.position.z()) << ',' << format_number(s.dex_raw) << ','
            << format_number(s.dex_norm) << '\n';
    }
}

ScatterField read_scatter_csv(std::istream& in) {
    std::string line;
    if (!next_content_line(in, line)) malformed("scatter CSV is empty");
    if (line != "x,y,z,dex_raw,dex_norm") malformed("unexpected scatter CSV header '" + line + "'");
    ScatterField field;
    while (next_content_line(in, line)) {
        std::stringstream row(line);
        std::string cell;
        double v[5];
        for (double& x : v) {
            if (!std::getline(row, cell, ',')) malformed("scatter row has fewer than 5 columns");
            x = parse_double(cell);
        }
        DexSample s;
        s.position = Vec3(v[0], v[1], v[2]);
        s.dex_raw = v[3];
        s.dex_norm = v[4];
        field.dex_max = std::max(field.dex_max, s.dex_raw);
        field.samples.push_back(s);
    }
    update_bounds(field);
    return field;
}

void write_grid(std::ostream& out, const VoxelGrid& grid, const Provenance& prov) {
    out << "ergoscope-grid 1\n# " << prov.line() << '\n';
    out << "origin " << format_number(grid.origin().x(), 17) << ' '
        << format_number(grid.origin().y(), 17) << ' ' << format_number(grid.origin().z(), 17) << '\n';
    out << "resolution " << format_number(grid.resolution(), 17) << '\n';
    out << "dims " << grid.dims()[0] << ' ' << grid.dims()[1] << ' ' << grid.dims()[2] << '\n';
    out << "values\n";
    for (double v : grid.values()) out << format_number(v, 17) << '\n';
}

VoxelGrid read_grid(std::istream& in) {
    std::string line;
    if (!next_content_line(in, line) || line != "ergoscope-grid 1") malformed("missing grid magic line");
    auto keyed = [&](const std::string& key) {
        if (!next_content_line(in, line)) malformed("grid header ends early");
        std::istringstream ss(line);
        std::string k;
        ss >> k;
        if (k != key) malformed("expected '" + key + "' in grid header");
        std::vector<std::string> tokens;
        for (std::string t; ss >> t;) tokens.push_back(t);
        return tokens;
    };
    const auto o = keyed("origin");
    const auto r = keyed("resolution");
    const auto d = keyed("dims");
    keyed("values");
    if (o.size() != 3 || r.size() != 1 || d.size() != 3) malformed("grid header has wrong arity");
    Index3 dims{};
    for (int a = 0; a < 3; ++a) {
        dims[a] = static_cast<long>(parse_double(d[a]));
        if (dims[a] < 0 || double(dims[a]) != parse_double(d[a])) malformed("bad grid dims");
    }
    VoxelGrid grid(Vec3(parse_double(o[0]), parse_double(o[1]), parse_double(o[2])),
                   parse_double(r[0]), dims);
    for (double& v : grid.values()) {
        if (!next_content_line(in, line)) malformed("grid has fewer values than dims promise");
        v = parse_double(line);
    }
    if (next_content_line(in, line)) malformed("grid has more values than dims promise");
    return grid;
}

void write_ply(std::ostream& out, const TriangleMesh& mesh, const Provenance& prov) {
    out << "ply\nformat ascii 1.0\ncomment " << prov.line() << '\n';
    out << "element vertex " << mesh.vertices.size() << '\n';
    out << "property float x\nproperty float y\nproperty float z\n";
    out << "element face " << mesh.triangles.size() << '\n';
    out << "property list uchar int vertex_indices\nend_header\n";
    for (const Vec3& v : mesh.vertices) {
        out << format_number(v.x()) << ' ' << format_number(v.y()) << ' ' << format_number(v.z()) << '\n';
    }
    for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

TriangleMesh read_ply(std::istream& in) {
    std::string line;
    std::size_t n_vertices = 0, n_faces = 0;
    if (!std::getline(in, line) || line != "ply") malformed("missing 'ply' magic");
    while (std::getline(in, line) && line != "end_header") {
        std::istringstream ss(line);
        std::string kw, what;
        ss >> kw;
        if (kw == "format" ) {
            ss >> what;
            if (what != "ascii") malformed("only ASCII PLY is supported");
        } else if (kw == "element") {
            std::size_t n = 0;
            ss >> what >> n;
            if (what == "vertex") n_vertices = n;
            else if (what == "face") n_faces = n;
        }
    }
    TriangleMesh mesh;
    mesh.vertices.reserve(n_vertices);
    for (std::size_t n = 0; n < n_vertices; ++n) {
        if (!std::getline(in, line)) malformed("PLY vertex list ends early");
        std::istringstream ss(line);
        std::string x, y, z;
        ss >> x >> y >> z;
        mesh.vertices.emplace_back(parse_double(x), parse_double(y), parse_double(z));
    }
    for (std::size_t n = 0; n < n_faces; ++n) {
        if (!std::getline(in, line)) malformed("PLY face list ends early");
        std::istringstream ss(line);
        int count = 0;
        std::array<std::uint32_t, 3> t{};
        ss >> count >> t[0] >> t[1] >> t[2];
        if (!ss || count != 3) malformed("PLY faces must be triangles");
        for (auto idx : t)
            if (idx >= n_vertices) malformed("PLY face index out of range");
        mesh.triangles.push_back(t);
    }
    return mesh;
}

void write_obj(std::ostream& out, const TriangleMesh& mesh, const Provenance& prov) {
    out << "# " << prov.line() << '\n';
    for (const Vec3& v : mesh.vertices) {
        out << "v " << format_number(v.x()) << ' ' << format_number(v.y()) << ' ' << format_number(v.z())
            << '\n';
    }
    for (const auto& t : mesh.triangles) {
        out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    }
}

}  // namespace ergoscope
