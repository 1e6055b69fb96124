#include "chsplit/errors.hpp"
#include "chsplit/harness.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace chsplit;

namespace {

ConvergenceConfig small_study(InitialCondition ic)
{
    ConvergenceConfig c;
    c.levels = {4, 8, 16};
    c.kappa = 0.01 * std::sqrt(2.0);
    c.final_time = 0.01;
    c.epsilon = 6.25e-2;
    c.initial_condition = std::move(ic);
    return c;
}

} // namespace

TEST(Rate, Log2OfRatio)
{
    EXPECT_DOUBLE_EQ(rate(0.4, 0.1), 2.0);
    EXPECT_DOUBLE_EQ(rate(0.3, 0.3), 0.0);
    // Published norms for the first two mesh pairs.
    EXPECT_NEAR(rate(1.148e-1, 2.939e-2), 1.966, 5e-4);
    EXPECT_THROW(rate(0.0, 0.1), InvalidArgument);
    EXPECT_THROW(rate(0.1, -1.0), InvalidArgument);
}

TEST(ConvergenceConfig, Validation)
{
    ConvergenceConfig c = small_study(paper_initial_condition());
    EXPECT_NO_THROW(c.validate());
    EXPECT_DOUBLE_EQ(c.scheme_params(16).tau, 0.02 / 16);
    c.levels = {4, 12};
    EXPECT_THROW(c.validate(), InvalidArgument);
    c.levels = {8};
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = small_study(paper_initial_condition());
    c.final_time = 0.0101;
    EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(CauchyStudy, ConstantDataGiveZeroDifferences)
{
    const auto rows = cauchy_study(small_study(constant_initial_condition(0.5)));
    ASSERT_EQ(rows.size(), 2u);
    for (const CauchyRow& r : rows) {
        EXPECT_LT(r.cauchy_phi, 1e-12);
        EXPECT_LT(r.cauchy_mu, 1e-9);
        EXPECT_FALSE(r.rate_phi);
        EXPECT_FALSE(r.rate_mu);
    }
    std::ostringstream out;
    write_cauchy_csv(out, rows);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "h_coarse,h_fine,cauchy_phi_H1,rate_phi,cauchy_mu_H1,rate_mu");
    EXPECT_NE(out.str().find(",NA,"), std::string::npos);
}

TEST(CauchyStudy, PaperDatumRowsAndThreadIndependence)
{
    ConvergenceConfig c = small_study(paper_initial_condition());
    const CauchyStudy serial = run_cauchy_study(c);
    c.threads = 3;
    const CauchyStudy parallel = run_cauchy_study(c);
    ASSERT_EQ(serial.rows.size(), 2u);
    EXPECT_FALSE(serial.rows[0].rate_phi);
    ASSERT_TRUE(serial.rows[1].rate_phi);
    ASSERT_TRUE(serial.rows[1].rate_mu);
    EXPECT_DOUBLE_EQ(serial.rows[0].h_coarse, std::sqrt(2.0) / 4);
    EXPECT_DOUBLE_EQ(serial.rows[0].h_fine, std::sqrt(2.0) / 8);
    EXPECT_GT(serial.rows[0].cauchy_phi, serial.rows[1].cauchy_phi);
    for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_EQ(serial.rows[k].cauchy_phi, parallel.rows[k].cauchy_phi);
        EXPECT_EQ(serial.rows[k].cauchy_mu, parallel.rows[k].cauchy_mu);
    }
    EXPECT_EQ(serial.levels[2].steps, 8 * serial.levels[0].steps / 2);

    // The fine-space difference agrees pointwise with the difference of the two runs.
    const LevelRun& coarse = serial.levels[1];
    const LevelRun& fine = serial.levels[2];
    const Field diff = fine.final_state->phi_curr - prolong(coarse.final_state->phi_curr, fine.space);
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const Point p{u(gen), u(gen)};
        EXPECT_NEAR(evaluate(diff, p),
                    evaluate(fine.final_state->phi_curr, p) - evaluate(coarse.final_state->phi_curr, p), 1e-10);
    }
    EXPECT_NEAR(norm(diff, NormKind::H1), serial.rows[1].cauchy_phi, 1e-14);
}

TEST(CauchyStudy, TerminalPotentialExtrapolatesToFinalTime)
{
    ConvergenceConfig c = small_study(paper_initial_condition());
    c.levels = {4, 8};
    c.final_time = 0.005; // one step on the coarse level, two on the fine
    const CauchyStudy study = run_cauchy_study(c);
    ASSERT_EQ(study.levels[0].steps, 1);
    ASSERT_EQ(study.levels[1].steps, 2);

    for (const LevelRun& lr : study.levels) {
        std::vector<Field> halves;
        const std::vector<StepObserver> obs{[&](const SchemeState& s, const DiagnosticsRecord&) {
            if (s.step > 0) {
                halves.push_back(*s.mu_half_last);
            }
        }};
        const RunResult r = run(c.scheme_params(lr.n), lr.space, c.initial_condition, obs);
        ASSERT_EQ(static_cast<int>(halves.size()), lr.steps);
        // Linear extrapolation through (T - tau/2, mu^{M-1/2}) and the previous sample.
        const double t_last = c.final_time - 0.5 * lr.tau;
        const double t_prev = lr.steps == 1 ? 0.0 : c.final_time - 1.5 * lr.tau;
        const Field& last = halves.back();
        const Field& prev = lr.steps == 1 ? r.final_state.mu0 : halves[halves.size() - 2];
        const double s = (c.final_time - t_last) / (t_last - t_prev);
        const Field expected = last + s * (last - prev);
        const Field got = terminal_potential(lr, MuAlignment::FinalTime);
        EXPECT_LT(norm(got - expected, NormKind::LinfNodal), 1e-12);
        EXPECT_EQ(norm(terminal_potential(lr, MuAlignment::LastHalfStep) - last, NormKind::LinfNodal), 0.0);
    }

    const Field dmu = terminal_potential(study.levels[1], MuAlignment::FinalTime) -
                      prolong(terminal_potential(study.levels[0], MuAlignment::FinalTime), study.levels[1].space);
    EXPECT_NEAR(study.rows[0].cauchy_mu, norm(dmu, NormKind::H1), 1e-14);
    const Field dhalf = *study.levels[1].final_state->mu_half_last -
                        prolong(*study.levels[0].final_state->mu_half_last, study.levels[1].space);
    EXPECT_NEAR(study.rows[0].cauchy_mu_half, norm(dhalf, NormKind::H1), 1e-14);

    c.mu_alignment = MuAlignment::LastHalfStep;
    const auto rows = cauchy_study(c);
    EXPECT_EQ(rows[0].cauchy_mu, study.rows[0].cauchy_mu_half);
}
