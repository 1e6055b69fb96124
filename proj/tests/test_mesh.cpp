#include "chsplit/errors.hpp"
#include "chsplit/mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace chsplit;

namespace {

double signed_area(const Mesh& m, int t)
{
    const auto& tri = m.triangles()[t];
    const Point a = m.vertices()[tri[0]], b = m.vertices()[tri[1]], c = m.vertices()[tri[2]];
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

} // namespace

TEST(Mesh, UniformCounts)
{
    for (int n : {2, 4, 6, 16}) {
        auto m = build_uniform(n);
        EXPECT_EQ(m->num_triangles(), 2 * n * n);
        EXPECT_EQ(m->num_vertices(), (n + 1) * (n + 1));
        EXPECT_DOUBLE_EQ(m->h(), std::sqrt(2.0) / n);
        EXPECT_EQ(m->level(), 0);
        // Euler characteristic of a disk.
        EXPECT_EQ(m->num_vertices() - m->num_edges() + m->num_triangles(), 1);
        EXPECT_NO_THROW(validate(*m));
    }
}

TEST(Mesh, RejectsOddOrTinySizes)
{
    EXPECT_THROW(build_uniform(3), InvalidArgument);
    EXPECT_THROW(build_uniform(0), InvalidArgument);
    EXPECT_THROW(build_uniform(-2), InvalidArgument);
}

TEST(Mesh, TrianglesAreCounterclockwiseRightIsosceles)
{
    auto m = build_uniform(8);
    const double leg = 1.0 / 8;
    double total = 0.0;
    for (int t = 0; t < m->num_triangles(); ++t) {
        const double a = signed_area(*m, t);
        EXPECT_NEAR(a, 0.5 * leg * leg, 1e-15);
        total += a;
        const auto& tri = m->triangles()[t];
        std::vector<double> len;
        for (int k = 0; k < 3; ++k) {
            const Point p = m->vertices()[tri[k]], q = m->vertices()[tri[(k + 1) % 3]];
            len.push_back(std::hypot(p.x - q.x, p.y - q.y));
        }
        std::sort(len.begin(), len.end());
        EXPECT_NEAR(len[0], leg, 1e-15);
        EXPECT_NEAR(len[1], leg, 1e-15);
        EXPECT_NEAR(len[2], m->h(), 1e-15);
    }
    EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(Mesh, NoTriangleHasTwoBoundaryEdges)
{
    for (int n : {2, 4, 10}) {
        auto m = build_uniform(n);
        int boundary = 0;
        for (int e = 0; e < m->num_edges(); ++e) {
            boundary += m->is_boundary_edge(e);
        }
        EXPECT_EQ(boundary, 4 * n);
        for (int t = 0; t < m->num_triangles(); ++t) {
            EXPECT_LE(m->boundary_edge_count(t), 1) << "n=" << n << " t=" << t;
        }
    }
}

TEST(Mesh, RefinementNestsAndPreservesInvariants)
{
    auto coarse = build_uniform(4);
    auto fine = refine(coarse);
    auto finer = refine(fine);
    EXPECT_EQ(fine->n(), 8);
    EXPECT_EQ(fine->level(), 1);
    EXPECT_EQ(finer->level(), 2);
    EXPECT_EQ(fine->num_triangles(), 4 * coarse->num_triangles());
    EXPECT_EQ(fine->parent().get(), coarse.get());
    for (int t = 0; t < fine->num_triangles(); ++t) {
        EXPECT_EQ(fine->parent_triangle(t), t / 4);
    }
    EXPECT_EQ(coarse->parent_triangle(0), -1);
    EXPECT_NO_THROW(validate(*fine));
    EXPECT_NO_THROW(validate(*finer));
    // Coarse vertices keep their position on the finer grid.
    for (int v = 0; v < coarse->num_vertices(); ++v) {
        const auto ij = coarse->grid_coords(v);
        const Point p = fine->vertices()[fine->vertex_at(2 * ij[0], 2 * ij[1])];
        EXPECT_EQ(p.x, coarse->vertices()[v].x);
        EXPECT_EQ(p.y, coarse->vertices()[v].y);
    }
    for (int t = 0; t < finer->num_triangles(); ++t) {
        EXPECT_LE(finer->boundary_edge_count(t), 1);
    }
}

TEST(Mesh, LocateReturnsConsistentBarycentrics)
{
    auto m = refine(build_uniform(6));
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const Point p{u(gen), u(gen)};
        auto loc = m->locate(p);
        ASSERT_TRUE(loc);
        const auto& tri = m->triangles()[loc->triangle];
        double x = 0, y = 0, s = 0;
        for (int i = 0; i < 3; ++i) {
            EXPECT_GE(loc->barycentric[i], -1e-12);
            x += loc->barycentric[i] * m->vertices()[tri[i]].x;
            y += loc->barycentric[i] * m->vertices()[tri[i]].y;
            s += loc->barycentric[i];
        }
        EXPECT_NEAR(s, 1.0, 1e-14);
        EXPECT_NEAR(x, p.x, 1e-14);
        EXPECT_NEAR(y, p.y, 1e-14);
    }
    EXPECT_FALSE(m->locate({1.5, 0.5}));
    EXPECT_TRUE(m->locate({1.0, 1.0}));
}

TEST(Mesh, EdgeAdjacency)
{
    auto m = build_uniform(4);
    for (int e = 0; e < m->num_edges(); ++e) {
        const Edge& edge = m->edges()[e];
        for (int side = 0; side < 2; ++side) {
            const int t = edge.triangles[side];
            if (t < 0) {
                continue;
            }
            const auto& te = m->triangle_edges(t);
            EXPECT_TRUE(std::find(te.begin(), te.end(), e) != te.end());
        }
    }
}
