#include "chsplit/mesh.hpp"

#include "chsplit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace chsplit {

double Mesh::h() const noexcept { return std::sqrt(2.0) / n_; }

std::array<int, 2> Mesh::grid_coords(int vertex) const noexcept
{
    return {vertex % (n_ + 1), vertex / (n_ + 1)};
}

double Mesh::area(int t) const
{
    const auto& tri = triangles_[t];
    const Point& a = vertices_[tri[0]];
    const Point& b = vertices_[tri[1]];
    const Point& c = vertices_[tri[2]];
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

int Mesh::boundary_edge_count(int t) const
{
    int count = 0;
    for (int e : triangle_edges_[t]) {
        count += is_boundary_edge(e) ? 1 : 0;
    }
    return count;
}

std::optional<Location> Mesh::locate(const Point& p) const
{
    constexpr double slack = 1e-12;
    if (p.x < -slack || p.x > 1.0 + slack || p.y < -slack || p.y > 1.0 + slack) {
        return std::nullopt;
    }
    const int ci = std::clamp(static_cast<int>(std::floor(p.x * n_)), 0, n_ - 1);
    const int cj = std::clamp(static_cast<int>(std::floor(p.y * n_)), 0, n_ - 1);

    Location best;
    double best_min = -1e300;
    for (int t : cell_triangles_[cj * n_ + ci]) {
        const auto& tri = triangles_[t];
        const Point& a = vertices_[tri[0]];
        const Point& b = vertices_[tri[1]];
        const Point& c = vertices_[tri[2]];
        const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
        const double l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
        const double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
        const double l0 = 1.0 - l1 - l2;
        const double lmin = std::min({l0, l1, l2});
        if (lmin > best_min) {
            best_min = lmin;
            best.triangle = t;
            best.barycentric = {l0, l1, l2};
        }
    }
    if (best_min < -1e-10) {
        return std::nullopt;
    }
    return best;
}

void Mesh::finalize()
{
    const int nv = (n_ + 1) * (n_ + 1);
    vertices_.resize(nv);
    for (int j = 0; j <= n_; ++j) {
        for (int i = 0; i <= n_; ++i) {
            vertices_[vertex_at(i, j)] = {static_cast<double>(i) / n_, static_cast<double>(j) / n_};
        }
    }

    // Edges sorted by (min vertex, max vertex).
    std::map<std::pair<int, int>, std::array<int, 2>> edge_map;
    for (int t = 0; t < num_triangles(); ++t) {
        for (int k = 0; k < 3; ++k) {
            const int a = triangles_[t][k];
            const int b = triangles_[t][(k + 1) % 3];
            auto key = std::minmax(a, b);
            auto [it, inserted] = edge_map.try_emplace({key.first, key.second}, std::array<int, 2>{t, -1});
            if (!inserted) {
                it->second[1] = t;
            }
        }
    }
    edges_.clear();
    edges_.reserve(edge_map.size());
    std::map<std::pair<int, int>, int> edge_index;
    for (const auto& [key, tris] : edge_map) {
        edge_index[key] = static_cast<int>(edges_.size());
        edges_.push_back({{key.first, key.second}, tris});
    }
    triangle_edges_.resize(triangles_.size());
    for (int t = 0; t < num_triangles(); ++t) {
        for (int k = 0; k < 3; ++k) {
            auto key = std::minmax(triangles_[t][k], triangles_[t][(k + 1) % 3]);
            triangle_edges_[t][k] = edge_index.at({key.first, key.second});
        }
    }

    cell_triangles_.assign(static_cast<std::size_t>(n_) * n_, {-1, -1});
    for (int t = 0; t < num_triangles(); ++t) {
        const auto& tri = triangles_[t];
        int si = 0;
        int sj = 0;
        for (int v : tri) {
            const auto ij = grid_coords(v);
            si += ij[0];
            sj += ij[1];
        }
        // Centroid lies in cell (floor(si/3), floor(sj/3)).
        auto& slot = cell_triangles_[(sj / 3) * n_ + si / 3];
        if (slot[0] < 0) {
            slot[0] = t;
        } else {
            slot[1] = t;
        }
    }
}

std::shared_ptr<const Mesh> build_uniform(int n)
{
    if (n < 2 || n % 2 != 0) {
        throw InvalidArgument("build_uniform: cells per side must be even and >= 2, got " + std::to_string(n));
    }
    std::shared_ptr<Mesh> mesh(new Mesh());
    mesh->n_ = n;
    mesh->level_ = 0;
    mesh->triangles_.reserve(2 * static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = mesh->vertex_at(i, j);
            const int v10 = mesh->vertex_at(i + 1, j);
            const int v01 = mesh->vertex_at(i, j + 1);
            const int v11 = mesh->vertex_at(i + 1, j + 1);
            if ((i + j) % 2 == 0) {
                mesh->triangles_.push_back({v00, v10, v11});
                mesh->triangles_.push_back({v00, v11, v01});
            } else {
                mesh->triangles_.push_back({v00, v10, v01});
                mesh->triangles_.push_back({v10, v11, v01});
            }
        }
    }
    mesh->finalize();
    return mesh;
}

std::shared_ptr<const Mesh> refine(const std::shared_ptr<const Mesh>& coarse)
{
    if (!coarse) {
        throw InvalidArgument("refine: null mesh");
    }
    std::shared_ptr<Mesh> mesh(new Mesh());
    mesh->n_ = 2 * coarse->n();
    mesh->level_ = coarse->level() + 1;
    mesh->parent_ = coarse;
    mesh->triangles_.reserve(4 * coarse->triangles_.size());
    mesh->parent_triangle_.reserve(4 * coarse->triangles_.size());

    auto fine_vertex = [&](int ca, int cb) {
        const auto a = coarse->grid_coords(ca);
        const auto b = coarse->grid_coords(cb);
        return mesh->vertex_at(a[0] + b[0], a[1] + b[1]);
    };
    for (int t = 0; t < coarse->num_triangles(); ++t) {
        const auto& tri = coarse->triangles_[t];
        const int a = fine_vertex(tri[0], tri[0]);
        const int b = fine_vertex(tri[1], tri[1]);
        const int c = fine_vertex(tri[2], tri[2]);
        const int ab = fine_vertex(tri[0], tri[1]);
        const int bc = fine_vertex(tri[1], tri[2]);
        const int ca = fine_vertex(tri[2], tri[0]);
        mesh->triangles_.push_back({a, ab, ca});
        mesh->triangles_.push_back({ab, b, bc});
        mesh->triangles_.push_back({ca, bc, c});
        mesh->triangles_.push_back({ab, bc, ca});
        for (int k = 0; k < 4; ++k) {
            mesh->parent_triangle_.push_back(t);
        }
    }
    mesh->finalize();
    return mesh;
}

namespace {

std::array<double, 3> sorted_edge_lengths(const Mesh& mesh, int t)
{
    const auto& tri = mesh.triangles()[t];
    const auto v = mesh.vertices();
    std::array<double, 3> len{};
    for (int k = 0; k < 3; ++k) {
        const Point& a = v[tri[k]];
        const Point& b = v[tri[(k + 1) % 3]];
        len[k] = std::hypot(b.x - a.x, b.y - a.y);
    }
    std::sort(len.begin(), len.end());
    return len;
}

[[noreturn]] void fail(const std::string& what) { throw std::logic_error("mesh invariant violated: " + what); }

} // namespace

void validate(const Mesh& mesh)
{
    const double leg = 1.0 / mesh.n();
    const double tol = 1e-12;
    double total = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const double a = mesh.area(t);
        if (a <= 0.0) {
            fail("triangle " + std::to_string(t) + " is not counterclockwise");
        }
        total += a;
        const auto len = sorted_edge_lengths(mesh, t);
        if (std::abs(len[0] - leg) > tol || std::abs(len[1] - leg) > tol
            || std::abs(len[2] - std::sqrt(2.0) * leg) > tol) {
            fail("triangle " + std::to_string(t) + " is not right isosceles with legs 1/n");
        }
        if (mesh.boundary_edge_count(t) > 1) {
            fail("triangle " + std::to_string(t) + " has more than one boundary edge");
        }
    }
    if (std::abs(total - 1.0) > 1e-14 * mesh.num_triangles()) {
        fail("triangle areas do not sum to 1");
    }
    for (const Edge& e : mesh.edges()) {
        if (e.triangles[1] < 0) {
            const Point& a = mesh.vertices()[e.vertices[0]];
            const Point& b = mesh.vertices()[e.vertices[1]];
            const bool on_side = (a.x == 0.0 && b.x == 0.0) || (a.x == 1.0 && b.x == 1.0)
                || (a.y == 0.0 && b.y == 0.0) || (a.y == 1.0 && b.y == 1.0);
            if (!on_side) {
                fail("edge with a single triangle lies inside the domain");
            }
        }
    }

    const auto& parent = mesh.parent();
    if (!parent) {
        return;
    }
    if (parent->n() * 2 != mesh.n() || mesh.num_triangles() != 4 * parent->num_triangles()) {
        fail("refined mesh does not quadruple its parent");
    }
    std::vector<double> child_area(parent->num_triangles(), 0.0);
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const int pt = mesh.parent_triangle(t);
        child_area[pt] += mesh.area(t);
        // Every child vertex lies in the closed parent triangle.
        const auto& tri = mesh.triangles()[t];
        Point centroid{};
        for (int v : tri) {
            centroid.x += mesh.vertices()[v].x / 3.0;
            centroid.y += mesh.vertices()[v].y / 3.0;
        }
        const auto loc = parent->locate(centroid);
        if (!loc || loc->triangle != pt) {
            fail("child triangle " + std::to_string(t) + " is not inside its parent");
        }
    }
    for (int pt = 0; pt < parent->num_triangles(); ++pt) {
        if (std::abs(child_area[pt] - parent->area(pt)) > 1e-15) {
            fail("children of triangle " + std::to_string(pt) + " do not partition it");
        }
    }
}

} // namespace chsplit
