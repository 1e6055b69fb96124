#include "chsplit/newton.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace chsplit;

namespace {

class Scalar final : public NonlinearSystem {
public:
    Scalar(double (*f)(double), double (*df)(double)) : f_(f), df_(df) {}
    Vector residual(const Vector& x) const override { return Vector::Constant(1, f_(x[0])); }
    SparseMatrix jacobian(const Vector& x) const override
    {
        SparseMatrix J(1, 1);
        J.insert(0, 0) = df_(x[0]);
        return J;
    }

private:
    double (*f_)(double);
    double (*df_)(double);
};

Vector scalar(double v) { return Vector::Constant(1, v); }

} // namespace

TEST(Newton, CubeRoot)
{
    Scalar sys([](double x) { return x * x * x - 8.0; }, [](double x) { return 3 * x * x; });
    auto [x, report] = newton_solve(sys, scalar(1.0), NewtonOptions{});
    EXPECT_NEAR(x[0], 2.0, 1e-12);
    EXPECT_LE(report.iterations, 10);
    EXPECT_EQ(report.residual_history.size(), static_cast<std::size_t>(report.iterations + 1));
    EXPECT_DOUBLE_EQ(report.initial_residual, 7.0);
}

TEST(Newton, RootGuessTakesNoIterations)
{
    Scalar sys([](double x) { return x * x * x - 8.0; }, [](double x) { return 3 * x * x; });
    auto [x, report] = newton_solve(sys, scalar(2.0), NewtonOptions{});
    EXPECT_EQ(report.iterations, 0);
    EXPECT_EQ(x[0], 2.0);
}

TEST(Newton, DampingRescuesOvershoot)
{
    // Undamped Newton on atan diverges from |x0| > 1.39.
    Scalar sys([](double x) { return std::atan(x); }, [](double x) { return 1.0 / (1.0 + x * x); });
    auto [x, report] = newton_solve(sys, scalar(5.0), NewtonOptions{});
    EXPECT_NEAR(x[0], 0.0, 1e-12);
    EXPECT_GT(report.halvings, 0);
}

TEST(Newton, FailuresCarryHistory)
{
    Scalar slow([](double x) { return x * x * x - 8.0; }, [](double x) { return 3 * x * x; });
    NewtonOptions capped;
    capped.max_iter = 2;
    try {
        newton_solve(slow, scalar(100.0), capped);
        FAIL() << "expected NewtonError";
    } catch (const NewtonError& e) {
        EXPECT_EQ(e.report().iterations, 2);
        EXPECT_EQ(e.residual_history().size(), 3u);
    }

    Scalar nan([](double x) { return x > 0.5 ? std::nan("") : x - 1.0; }, [](double) { return 1.0; });
    EXPECT_THROW(newton_solve(nan, scalar(-3.0), NewtonOptions{}), NewtonError);

    // No root: x^2 + 1 stalls once damping cannot reduce the residual.
    Scalar none([](double x) { return x * x + 1.0; }, [](double x) { return 2 * x; });
    EXPECT_THROW(newton_solve(none, scalar(0.0), NewtonOptions{}), SolverError);
}
