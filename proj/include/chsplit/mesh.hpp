#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace chsplit {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Undirected mesh edge. `triangles[1] == -1` marks a boundary edge.
struct Edge {
    std::array<int, 2> vertices;
    std::array<int, 2> triangles;
};

/// Point location result: containing triangle and its barycentric coordinates.
struct Location {
    int triangle = -1;
    std::array<double, 3> barycentric{};
};

/// Structured triangulation of the unit square by right isosceles triangles.
///
/// All vertices sit on the uniform (n+1)x(n+1) grid and are numbered
/// lexicographically, j*(n+1)+i. Triangles are counterclockwise. A refined mesh
/// keeps a link to its parent and records which parent triangle each child
/// came from, so finite element spaces on successive levels are nested.
class Mesh {
public:
    int level() const noexcept { return level_; }
    /// Cells per side.
    int n() const noexcept { return n_; }
    /// Triangle diameter sqrt(2)/n.
    double h() const noexcept;

    std::span<const Point> vertices() const noexcept { return vertices_; }
    std::span<const std::array<int, 3>> triangles() const noexcept { return triangles_; }
    std::span<const Edge> edges() const noexcept { return edges_; }
    /// Local edge k of triangle t joins vertices k and (k+1)%3.
    const std::array<int, 3>& triangle_edges(int t) const { return triangle_edges_[t]; }

    int num_vertices() const noexcept { return static_cast<int>(vertices_.size()); }
    int num_triangles() const noexcept { return static_cast<int>(triangles_.size()); }
    int num_edges() const noexcept { return static_cast<int>(edges_.size()); }

    /// Grid coordinates (i, j) of a vertex.
    std::array<int, 2> grid_coords(int vertex) const noexcept;
    int vertex_at(int i, int j) const noexcept { return j * (n_ + 1) + i; }

    double area(int t) const;
    bool is_boundary_edge(int e) const { return edges_[e].triangles[1] < 0; }
    /// Number of edges of triangle t lying on the boundary of the square.
    int boundary_edge_count(int t) const;

    const std::shared_ptr<const Mesh>& parent() const noexcept { return parent_; }
    /// Index of the parent triangle containing t, or -1 on a level-0 mesh.
    int parent_triangle(int t) const { return parent_triangle_.empty() ? -1 : parent_triangle_[t]; }

    /// Triangle containing p (boundary points resolve to one of the candidates).
    std::optional<Location> locate(const Point& p) const;

private:
    friend std::shared_ptr<const Mesh> build_uniform(int n);
    friend std::shared_ptr<const Mesh> refine(const std::shared_ptr<const Mesh>& mesh);

    Mesh() = default;
    void finalize();

    int level_ = 0;
    int n_ = 0;
    std::vector<Point> vertices_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<Edge> edges_;
    std::vector<std::array<int, 3>> triangle_edges_;
    std::vector<int> parent_triangle_;
    std::vector<std::array<int, 2>> cell_triangles_;
    std::shared_ptr<const Mesh> parent_;
};

/// Uniform n x n grid of squares, each split into two triangles. The diagonal of
/// cell (i, j) runs (x_i, y_j)-(x_{i+1}, y_{j+1}) when i+j is even and the other
/// way when odd; for even n every corner of the square carries a diagonal, so no
/// triangle has two boundary edges.
std::shared_ptr<const Mesh> build_uniform(int n);

/// Red refinement: each triangle is split into four congruent children through
/// its edge midpoints. Child 4t+k descends from parent triangle t.
std::shared_ptr<const Mesh> refine(const std::shared_ptr<const Mesh>& mesh);

/// Checks the structural invariants (areas, congruence, boundary rule, nesting).
/// Throws std::logic_error describing the first violation.
void validate(const Mesh& mesh);

} // namespace chsplit
