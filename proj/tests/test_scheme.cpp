#include "chsplit/errors.hpp"
#include "chsplit/scheme.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace chsplit;
using chsplit::testing::random_field;

namespace {

constexpr double eps = 6.25e-2;

SchemeParams params(double tau, double T, int degree = 2)
{
    SchemeParams p;
    p.epsilon = eps;
    p.tau = tau;
    p.final_time = T;
    p.degree = degree;
    return p;
}

double max_deviation(const Field& f, double c) { return (f.coeffs().array() - c).abs().maxCoeff(); }

// Columnwise central differences of the residual.
double jacobian_fd_error(const StepSystem& sys, const Vector& x)
{
    const Eigen::MatrixXd J = Eigen::MatrixXd(sys.jacobian(x));
    double worst = 0.0;
    const double h = 1e-6;
    for (int j = 0; j < x.size(); ++j) {
        Vector xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        const Vector col = (sys.residual(xp) - sys.residual(xm)) / (2 * h);
        worst = std::max(worst, (col - J.col(j)).lpNorm<Eigen::Infinity>() / std::max(1.0, J.col(j).lpNorm<Eigen::Infinity>()));
    }
    return worst;
}

} // namespace

TEST(Chi, AlgebraAndDerivatives)
{
    for (double c : {-1.3, 0.0, 0.4, 2.0}) {
        EXPECT_NEAR(chi(c, c), c * c * c, 1e-15);
    }
    EXPECT_EQ(chi(1.0, -1.0), 0.0);
    const double a = 0.3, b = -0.7, d = 1e-6;
    EXPECT_NEAR(chi_da(a, b), (chi(a + d, b) - chi(a - d, b)) / (2 * d), 1e-8);
    EXPECT_NEAR(chi_db(a, b), (chi(a, b + d) - chi(a, b - d)) / (2 * d), 1e-8);
    EXPECT_NEAR(chi_da(a, b), a * (a + b) / 2 + (a * a + b * b) / 4, 1e-15);
}

TEST(SchemeParams, Validation)
{
    EXPECT_NO_THROW(params(1e-3, 0.1).validate());
    EXPECT_EQ(params(1e-3, 0.1).num_steps(), 100);
    EXPECT_EQ(params(0.02 / 64, 0.1).num_steps(), 320);
    EXPECT_THROW(params(3e-3, 0.1).num_steps(), InvalidArgument);
    EXPECT_THROW(params(-1e-3, 0.1).validate(), InvalidArgument);
    SchemeParams p = params(1e-3, 0.1);
    p.epsilon = 0.0;
    EXPECT_THROW(p.validate(), InvalidArgument);
    p = params(1e-3, 0.1);
    p.newton.abs_tol = 0.0;
    EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(Initialize, ConstantDataGiveExactPotentials)
{
    auto ops = make_operators(build_space(build_uniform(4), 2));
    for (InitMuMode mode : {InitMuMode::DiscreteVariational, InitMuMode::RitzAnalytic}) {
        for (InitPhiMode pmode : {InitPhiMode::Interp, InitPhiMode::Ritz}) {
            SchemeParams p = params(1e-2, 0.1);
            p.init_mu = mode;
            p.init_phi = pmode;
            for (double c : {0.0, 1.0, -1.0, 0.5}) {
                const SchemeState s = initialize(p, *ops, constant_initial_condition(c));
                EXPECT_LT(max_deviation(s.phi_curr, c), 1e-12);
                EXPECT_LT(max_deviation(s.mu0, (c * c * c - c) / eps), 1e-10);
                EXPECT_EQ(s.step, 0);
                EXPECT_FALSE(s.phi_prev);
                EXPECT_FALSE(s.mu_half_last);
            }
        }
    }
}

TEST(Initialize, PaperDatumMassAndModes)
{
    auto ops = make_operators(build_space(build_uniform(16), 2));
    const SchemeState s = initialize(params(1e-3, 0.1), *ops, paper_initial_condition());
    EXPECT_NEAR(ops->mean(s.phi_curr), -0.5, 1e-3);

    SchemeParams ritz = params(1e-3, 0.1);
    ritz.init_phi = InitPhiMode::Ritz;
    ritz.init_mu = InitMuMode::RitzAnalytic;
    const SchemeState r = initialize(ritz, *ops, paper_initial_condition());
    EXPECT_NEAR(ops->mean(r.phi_curr), -0.5, 1e-12);

    // Both potentials approximate the same analytic mu_0, so their gap closes under refinement.
    std::vector<double> gaps;
    for (int n : {8, 16, 32}) {
        auto level = make_operators(build_space(build_uniform(n), 2));
        const Field a = initialize(params(1e-3, 0.1), *level, paper_initial_condition()).mu0;
        const Field b = initialize(ritz, *level, paper_initial_condition()).mu0;
        gaps.push_back(norm(a - b, NormKind::L2) / norm(b, NormKind::L2));
    }
    EXPECT_GT(gaps[0] / gaps[1], 1.5) << gaps[0] << " " << gaps[1];
    EXPECT_GT(gaps[1] / gaps[2], 1.5) << gaps[1] << " " << gaps[2];

    InitialCondition bare = paper_initial_condition();
    bare.laplacian = nullptr;
    EXPECT_THROW(initialize(ritz, *ops, bare), ConfigError);
    bare = paper_initial_condition();
    bare.gradient = nullptr;
    SchemeParams ritz_phi = params(1e-3, 0.1);
    ritz_phi.init_phi = InitPhiMode::Ritz;
    EXPECT_THROW(initialize(ritz_phi, *ops, bare), ConfigError);
}

TEST(StepSystem, JacobianMatchesFiniteDifferences)
{
    auto ops = make_operators(build_space(build_uniform(2), 1));
    const SchemeParams p = params(0.05, 0.1, 1);
    SchemeState s{0, std::nullopt, random_field(ops->space_ptr(), 1), std::nullopt, random_field(ops->space_ptr(), 2)};
    const StepSystem first = StepSystem::first_step(s, p, *ops);
    const int n = ops->space().num_dofs();
    Vector x(2 * n);
    x << random_field(ops->space_ptr(), 3).coeffs(), random_field(ops->space_ptr(), 4).coeffs();
    EXPECT_LT(jacobian_fd_error(first, x), 1e-6);

    s.step = 1;
    s.phi_prev = random_field(ops->space_ptr(), 5);
    s.mu_half_last = random_field(ops->space_ptr(), 6);
    const StepSystem regular = StepSystem::regular_step(s, p, *ops);
    EXPECT_LT(jacobian_fd_error(regular, x), 1e-6);
    EXPECT_THROW(StepSystem::regular_step(SchemeState{0, std::nullopt, s.phi_curr, std::nullopt, s.mu0}, p, *ops),
                 InvalidArgument);
}

TEST(Step, ConstantStateIsAFixedPointForAnyTau)
{
    auto space = build_space(build_uniform(4), 2);
    for (double tau : {1e-4, 1e-1, 1.0}) {
        for (double c : {-1.0, 0.0, 0.5, 1.0}) {
            const RunResult r = run(params(tau, 5 * tau), space, constant_initial_condition(c));
            EXPECT_LT(max_deviation(r.final_state.phi_curr, c), 1e-10) << "tau " << tau << " c " << c;
            EXPECT_LT(max_deviation(*r.final_state.mu_half_last, (c * c * c - c) / eps), 1e-9);
            EXPECT_LE(r.trajectory.steps.front().newton_iters, 1);
        }
    }
}

TEST(Step, FirstStepEnergyInequality)
{
    auto space = build_space(build_uniform(16), 2);
    const RunResult r = run(params(1e-4, 1e-4), space, paper_initial_condition());
    ASSERT_EQ(r.trajectory.steps.size(), 1u);
    EXPECT_GE(r.trajectory.first_step.margin(), 0.0);
    EXPECT_NEAR(r.trajectory.steps[0].mass, r.trajectory.initial.record.mass, 1e-10);
}

TEST(Step, EnergyLawOnPaperDatum)
{
    auto space = build_space(build_uniform(16), 2);
    const RunResult r = run(params(1e-3, 0.1), space, paper_initial_condition());
    const auto& steps = r.trajectory.steps;
    ASSERT_EQ(steps.size(), 100u);
    const double F1 = steps.front().F;
    for (std::size_t k = 1; k < steps.size(); ++k) {
        EXPECT_LE(steps[k].F - steps[k - 1].F, 1e-8) << "m=" << steps[k].m;
        EXPECT_LE(std::abs(steps[k].step_law_residual), 1e-7);
        EXPECT_LE(std::abs(steps[k].energy_law_residual), 1e-7);
        EXPECT_LE(steps[k].E, steps[k].F + 1e-14);
        EXPECT_LE(steps[k].F, F1 + 1e-12);
        EXPECT_LE(std::abs(steps[k].mass - steps.front().mass), 1e-10 * 0.5 + 1e-12);
        EXPECT_LE(steps[k].newton_iters, 6);
    }
}

TEST(Run, SingleStepAndObservers)
{
    auto space = build_space(build_uniform(4), 2);
    int calls = 0;
    std::vector<int> seen;
    const StepObserver obs[] = {[&](const SchemeState& s, const DiagnosticsRecord& rec) {
        ++calls;
        seen.push_back(s.step);
        EXPECT_EQ(rec.m, s.step);
    }};
    const RunResult one = run(params(0.1, 0.1), space, paper_initial_condition(), obs);
    EXPECT_EQ(one.trajectory.steps.size(), 1u);
    EXPECT_EQ(one.final_state.step, 1);
    EXPECT_EQ(calls, 2);
    seen.clear();
    calls = 0;
    run(params(0.01, 0.05), space, paper_initial_condition(), obs);
    EXPECT_EQ(seen, (std::vector<int>{0, 1, 2, 3, 4, 5}));
    EXPECT_THROW(run(params(0.03, 0.1), space, paper_initial_condition()), InvalidArgument);
}

TEST(Run, ConstantTrajectoryDiagnosticsAreConstant)
{
    auto space = build_space(build_uniform(4), 2);
    const RunResult r = run(params(0.01, 0.1), space, constant_initial_condition(0.5));
    ASSERT_EQ(r.trajectory.steps.size(), 10u);
    const DiagnosticsRecord& a = r.trajectory.steps.front();
    for (const DiagnosticsRecord& b : r.trajectory.steps) {
        EXPECT_NEAR(b.mass, a.mass, 1e-14);
        EXPECT_NEAR(b.E, a.E, 1e-12);
        EXPECT_NEAR(b.F, a.F, 1e-12);
        EXPECT_NEAR(b.phi_Linf, 0.5, 1e-12);
        EXPECT_NEAR(b.dtau_phi_L2, 0.0, 1e-10);
        EXPECT_NEAR(b.grad_mu_half_L2, 0.0, 1e-8);
    }
}

TEST(Run, RepeatedRunsAreBitwiseIdentical)
{
    auto csv = [] {
        auto space = build_space(build_uniform(8), 2);
        const RunResult r = run(params(1e-3, 0.02), space, paper_initial_condition());
        std::ostringstream out;
        write_diagnostics_csv(out, r.trajectory.steps);
        return out.str();
    };
    EXPECT_EQ(csv(), csv());
}

TEST(Run, NewtonConvergesForLargeSteps)
{
    auto space = build_space(build_uniform(8), 2);
    for (double tau : {1e-2, 1.0, 10.0}) {
        const RunResult r = run(params(tau, 2 * tau), space, paper_initial_condition());
        for (const auto& rec : r.trajectory.steps) {
            EXPECT_LE(rec.newton_iters, 30) << "tau " << tau;
        }
        EXPECT_NEAR(r.trajectory.steps.back().mass, r.trajectory.initial.record.mass, 1e-10);
    }
}
