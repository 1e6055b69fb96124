#include "chsplit/initial_condition.hpp"

#include "chsplit/expression.hpp"

#include <cmath>
#include <numbers>

namespace chsplit {

InitialCondition paper_initial_condition()
{
    using std::numbers::pi;
    InitialCondition ic;
    ic.name = "paper_ic";
    // phi = A(x) B(y) / 2 - 1 with A = 1 - cos 4 pi x, B = 1 - cos 2 pi y.
    ic.value = [](const Point& p) {
        return 0.5 * (1.0 - std::cos(4.0 * pi * p.x)) * (1.0 - std::cos(2.0 * pi * p.y)) - 1.0;
    };
    ic.gradient = [](const Point& p) {
        const double a = 1.0 - std::cos(4.0 * pi * p.x);
        const double b = 1.0 - std::cos(2.0 * pi * p.y);
        const double da = 4.0 * pi * std::sin(4.0 * pi * p.x);
        const double db = 2.0 * pi * std::sin(2.0 * pi * p.y);
        return std::array<double, 2>{0.5 * da * b, 0.5 * a * db};
    };
    ic.laplacian = [](const Point& p) {
        const double a = 1.0 - std::cos(4.0 * pi * p.x);
        const double b = 1.0 - std::cos(2.0 * pi * p.y);
        const double d2a = 16.0 * pi * pi * std::cos(4.0 * pi * p.x);
        const double d2b = 4.0 * pi * pi * std::cos(2.0 * pi * p.y);
        return 0.5 * (d2a * b + a * d2b);
    };
    ic.laplacian_gradient = [](const Point& p) {
        const double a = 1.0 - std::cos(4.0 * pi * p.x);
        const double b = 1.0 - std::cos(2.0 * pi * p.y);
        const double da = 4.0 * pi * std::sin(4.0 * pi * p.x);
        const double db = 2.0 * pi * std::sin(2.0 * pi * p.y);
        const double d2a = 16.0 * pi * pi * std::cos(4.0 * pi * p.x);
        const double d2b = 4.0 * pi * pi * std::cos(2.0 * pi * p.y);
        const double d3a = -64.0 * pi * pi * pi * std::sin(4.0 * pi * p.x);
        const double d3b = -8.0 * pi * pi * pi * std::sin(2.0 * pi * p.y);
        return std::array<double, 2>{0.5 * (d3a * b + da * d2b), 0.5 * (d2a * db + a * d3b)};
    };
    ic.mean = -0.5;
    return ic;
}

InitialCondition constant_initial_condition(double c)
{
    InitialCondition ic;
    ic.name = "constant";
    ic.value = [c](const Point&) { return c; };
    ic.gradient = [](const Point&) { return std::array<double, 2>{0.0, 0.0}; };
    ic.laplacian = [](const Point&) { return 0.0; };
    ic.laplacian_gradient = [](const Point&) { return std::array<double, 2>{0.0, 0.0}; };
    ic.mean = c;
    return ic;
}

InitialCondition expression_initial_condition(const std::string& source)
{
    const auto expr = std::make_shared<const Expression>(source);
    InitialCondition ic;
    ic.name = "expression";
    ic.value = [expr](const Point& p) { return (*expr)(p.x, p.y); };
    ic.gradient = [expr](const Point& p) {
        const Jet3 j = expr->jet(p.x, p.y);
        return std::array<double, 2>{j.derivative(1, 0), j.derivative(0, 1)};
    };
    ic.laplacian = [expr](const Point& p) {
        const Jet3 j = expr->jet(p.x, p.y);
        return j.derivative(2, 0) + j.derivative(0, 2);
    };
    ic.laplacian_gradient = [expr](const Point& p) {
        const Jet3 j = expr->jet(p.x, p.y);
        return std::array<double, 2>{j.derivative(3, 0) + j.derivative(1, 2), j.derivative(2, 1) + j.derivative(0, 3)};
    };
    return ic;
}

double fine_quadrature_integral(const Mesh& mesh, const PointFunction& f)
{
    const QuadratureRule rule = triangle_rule(8);
    const auto v = mesh.vertices();
    double total = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles()[t];
        const Point& a = v[tri[0]];
        const Point& b = v[tri[1]];
        const Point& c = v[tri[2]];
        // Split into 16 congruent subtriangles (two red refinements) in barycentric space.
        constexpr int s = 4;
        const double sub_area = mesh.area(t) / (s * s);
        double cell = 0.0;
        for (int i = 0; i < s; ++i) {
            for (int j = 0; i + j < s; ++j) {
                for (int up = 0; up < 2; ++up) {
                    if (up == 1 && i + j + 1 >= s) {
                        continue;
                    }
                    std::array<std::array<double, 2>, 3> corners;
                    if (up == 0) {
                        corners = {{{double(i), double(j)}, {double(i + 1), double(j)}, {double(i), double(j + 1)}}};
                    } else {
                        corners = {{{double(i + 1), double(j)}, {double(i + 1), double(j + 1)}, {double(i), double(j + 1)}}};
                    }
                    for (int q = 0; q < rule.size(); ++q) {
                        double u = 0.0;
                        double w = 0.0;
                        for (int k = 0; k < 3; ++k) {
                            u += rule.points[q][k] * corners[k][0] / s;
                            w += rule.points[q][k] * corners[k][1] / s;
                        }
                        const Point x{a.x + u * (b.x - a.x) + w * (c.x - a.x), a.y + u * (b.y - a.y) + w * (c.y - a.y)};
                        cell += rule.weights[q] * sub_area * f(x);
                    }
                }
            }
        }
        total += cell;
    }
    return total;
}

} // namespace chsplit
