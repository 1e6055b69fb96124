#include "chsplit/vtk.hpp"

#include "chsplit/diagnostics.hpp"
#include "chsplit/errors.hpp"

#include <cmath>
#include <fstream>

namespace chsplit {

namespace {

// Vertex-ordered values on the output mesh.
std::vector<double> vertex_values(const Field& field, const Mesh& out_mesh)
{
    const FeSpace& space = field.space();
    const int n = out_mesh.n();
    std::vector<double> values(out_mesh.num_vertices(), 0.0);
    std::vector<char> seen(values.size(), 0);
    for (int d = 0; d < space.num_dofs(); ++d) {
        const Point& p = space.dof_node(d);
        const int i = static_cast<int>(std::lround(p.x * n));
        const int j = static_cast<int>(std::lround(p.y * n));
        const int v = out_mesh.vertex_at(i, j);
        values[v] = field.coeffs()[d];
        seen[v] = 1;
    }
    for (char s : seen) {
        if (!s) {
            throw InvalidArgument("write_snapshot: output mesh does not match the field's nodes");
        }
    }
    return values;
}

} // namespace

void write_snapshot(const Field& field, const std::filesystem::path& path, const std::string& name,
                    const std::string& title)
{
    const FeSpace& space = field.space();
    std::shared_ptr<const Mesh> out_mesh = space.mesh_ptr();
    if (space.degree() == 2) {
        out_mesh = refine(out_mesh);
    } else if (space.degree() != 1) {
        throw InvalidArgument("write_snapshot: only P1 and P2 fields are supported");
    }
    const std::vector<double> values = vertex_values(field, *out_mesh);

    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << "# vtk DataFile Version 3.0\n" << title << '\n' << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << out_mesh->num_vertices() << " double\n";
    for (const Point& p : out_mesh->vertices()) {
        out << format_real(p.x) << ' ' << format_real(p.y) << " 0\n";
    }
    out << "CELLS " << out_mesh->num_triangles() << ' ' << 4 * out_mesh->num_triangles() << '\n';
    for (const auto& tri : out_mesh->triangles()) {
        out << "3 " << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
    }
    out << "CELL_TYPES " << out_mesh->num_triangles() << '\n';
    for (int t = 0; t < out_mesh->num_triangles(); ++t) {
        out << "5\n";
    }
    out << "POINT_DATA " << values.size() << '\n' << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : values) {
        out << format_real(v) << '\n';
    }
    out.flush();
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

Snapshot read_snapshot(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    auto fail = [&](const std::string& what) { return IoError(path.string() + ": " + what); };
    std::string line;
    for (int k = 0; k < 4; ++k) {
        if (!std::getline(in, line)) {
            throw fail("truncated header");
        }
    }
    Snapshot snap;
    std::string word, type;
    std::size_t count = 0;
    if (!(in >> word >> count >> type) || word != "POINTS") {
        throw fail("expected POINTS");
    }
    snap.points.resize(count);
    for (auto& p : snap.points) {
        double z;
        if (!(in >> p.x >> p.y >> z)) {
            throw fail("bad point");
        }
    }
    std::size_t size = 0;
    if (!(in >> word >> count >> size) || word != "CELLS") {
        throw fail("expected CELLS");
    }
    snap.cells.resize(count);
    for (auto& c : snap.cells) {
        int k;
        if (!(in >> k >> c[0] >> c[1] >> c[2]) || k != 3) {
            throw fail("bad cell");
        }
    }
    if (!(in >> word >> count) || word != "CELL_TYPES") {
        throw fail("expected CELL_TYPES");
    }
    for (std::size_t k = 0; k < count; ++k) {
        int ct;
        in >> ct;
    }
    if (!(in >> word >> count) || word != "POINT_DATA") {
        throw fail("expected POINT_DATA");
    }
    std::getline(in, line);
    std::getline(in, line);
    std::getline(in, line);
    snap.values.resize(count);
    for (auto& v : snap.values) {
        if (!(in >> v)) {
            throw fail("bad value");
        }
    }
    return snap;
}

} // namespace chsplit
