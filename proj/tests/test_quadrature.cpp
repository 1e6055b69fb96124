#include "chsplit/errors.hpp"
#include "chsplit/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace chsplit;

namespace {

double factorial(int k) { return std::tgamma(k + 1.0); }

// Average of l1^a l2^b l3^c over a triangle: 2 a! b! c! / (a+b+c+2)!.
double barycentric_moment(int a, int b, int c) { return 2.0 * factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 2); }

} // namespace

TEST(Quadrature, RulesIntegrateMonomialsExactly)
{
    for (int degree : {1, 2, 4, 8}) {
        const QuadratureRule rule = triangle_rule(degree);
        EXPECT_GE(rule.degree, degree);
        double wsum = 0.0;
        for (int q = 0; q < rule.size(); ++q) {
            wsum += rule.weights[q];
            EXPECT_NEAR(rule.points[q][0] + rule.points[q][1] + rule.points[q][2], 1.0, 1e-15);
            for (double l : rule.points[q]) {
                EXPECT_GE(l, 0.0);
            }
        }
        EXPECT_NEAR(wsum, 1.0, 1e-14);
        for (int a = 0; a <= rule.degree; ++a) {
            for (int b = 0; a + b <= rule.degree; ++b) {
                const int c = rule.degree - a - b;
                for (int cc = 0; cc <= c; ++cc) {
                    double s = 0.0;
                    for (int q = 0; q < rule.size(); ++q) {
                        const auto& l = rule.points[q];
                        s += rule.weights[q] * std::pow(l[0], a) * std::pow(l[1], b) * std::pow(l[2], cc);
                    }
                    EXPECT_NEAR(s, barycentric_moment(a, b, cc), 1e-14)
                        << "degree " << degree << " monomial " << a << b << cc;
                }
            }
        }
    }
}

TEST(Quadrature, DegreeEightIsNotExactForDegreeTen)
{
    const QuadratureRule rule = triangle_rule(8);
    double s = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
        s += rule.weights[q] * std::pow(rule.points[q][0], 10);
    }
    EXPECT_GT(std::abs(s - barycentric_moment(10, 0, 0)), 1e-8);
}

TEST(Quadrature, IntermediateDegreesRoundUp)
{
    EXPECT_GE(triangle_rule(3).degree, 3);
    EXPECT_GE(triangle_rule(5).degree, 5);
    EXPECT_EQ(triangle_rule(8).size(), 16);
    EXPECT_THROW(triangle_rule(9), InvalidArgument);
    EXPECT_THROW(triangle_rule(-1), InvalidArgument);
}
