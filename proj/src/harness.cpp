#include "chsplit/harness.hpp"

#include "chsplit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace chsplit {

void ConvergenceConfig::validate() const
{
    if (levels.size() < 2) {
        throw InvalidArgument("ConvergenceConfig: at least two levels are needed");
    }
    if (levels[0] < 2 || levels[0] % 2 != 0) {
        throw InvalidArgument("ConvergenceConfig: the coarsest level must be even and >= 2");
    }
    for (std::size_t k = 1; k < levels.size(); ++k) {
        if (levels[k] != 2 * levels[k - 1]) {
            throw InvalidArgument("ConvergenceConfig: each level must double the previous one");
        }
    }
    if (!(kappa > 0.0)) {
        throw InvalidArgument("ConvergenceConfig: kappa must be positive");
    }
    for (int n : levels) {
        scheme_params(n).num_steps();
    }
}

SchemeParams ConvergenceConfig::scheme_params(int n) const
{
    SchemeParams p;
    p.epsilon = epsilon;
    p.tau = kappa * std::sqrt(2.0) / n;
    p.final_time = final_time;
    p.degree = degree;
    p.newton = newton;
    p.init_phi = init_phi;
    p.init_mu = init_mu;
    return p;
}

Field terminal_potential(const LevelRun& level, MuAlignment alignment)
{
    if (!level.final_state || !level.final_state->mu_half_last) {
        throw InvalidArgument("terminal_potential: level has not been run");
    }
    const Field& last = *level.final_state->mu_half_last;
    if (alignment == MuAlignment::LastHalfStep) {
        return last;
    }
    // Half steps sit at T - tau/2 and T - 3 tau/2; on a single step the
    // previous value is mu^0 at t = 0 and the slope doubles.
    if (level.steps == 1) {
        return 2.0 * last - level.final_state->mu0;
    }
    if (!level.mu_half_prev) {
        throw InvalidArgument("terminal_potential: previous half-step potential missing");
    }
    return 1.5 * last - 0.5 * *level.mu_half_prev;
}

double rate(double norm_coarse_pair, double norm_fine_pair)
{
    if (!(norm_coarse_pair > 0.0) || !(norm_fine_pair > 0.0)) {
        throw InvalidArgument("rate: Cauchy norms must be positive");
    }
    return std::log2(norm_coarse_pair / norm_fine_pair);
}

CauchyStudy run_cauchy_study(const ConvergenceConfig& config, const LevelObservers& observers)
{
    config.validate();
    CauchyStudy study;
    study.levels.resize(config.levels.size());

    std::shared_ptr<const Mesh> mesh = build_uniform(config.levels[0]);
    for (std::size_t k = 0; k < config.levels.size(); ++k) {
        if (k > 0) {
            mesh = refine(mesh);
        }
        LevelRun& lr = study.levels[k];
        lr.n = mesh->n();
        lr.h = mesh->h();
        lr.space = build_space(mesh, config.degree);
        const SchemeParams p = config.scheme_params(lr.n);
        lr.tau = p.tau;
        lr.steps = p.num_steps();
    }

    // Each level is an independent trajectory; results land in level order.
    std::vector<std::exception_ptr> errors(study.levels.size());
    std::mutex next_mutex;
    std::size_t next = 0;
    auto worker = [&]() {
        for (;;) {
            std::size_t k;
            {
                std::lock_guard lock(next_mutex);
                if (next >= study.levels.size()) {
                    return;
                }
                k = next++;
            }
            try {
                LevelRun& lr = study.levels[k];
                std::vector<StepObserver> obs = observers ? observers(lr) : std::vector<StepObserver>{};
                obs.push_back([&lr](const SchemeState& state, const DiagnosticsRecord&) {
                    if (state.step == lr.steps - 1 && state.mu_half_last) {
                        lr.mu_half_prev = *state.mu_half_last;
                    }
                });
                RunResult r = run(config.scheme_params(lr.n), lr.space, config.initial_condition, obs);
                lr.trajectory = std::move(r.trajectory);
                lr.final_state = std::move(r.final_state);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const unsigned nthreads = std::clamp<unsigned>(config.threads, 1u, static_cast<unsigned>(study.levels.size()));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    constexpr double roundoff_floor = 1e-12;
    std::vector<bool> resolved_phi, resolved_mu;
    for (std::size_t k = 0; k + 1 < study.levels.size(); ++k) {
        const LevelRun& coarse = study.levels[k];
        const LevelRun& fine = study.levels[k + 1];
        const Field dphi = fine.final_state->phi_curr - prolong(coarse.final_state->phi_curr, fine.space);
        const Field dmu = terminal_potential(fine, config.mu_alignment) -
                          prolong(terminal_potential(coarse, config.mu_alignment), fine.space);
        const Field dmu_half = *fine.final_state->mu_half_last - prolong(*coarse.final_state->mu_half_last, fine.space);
        CauchyRow row;
        row.h_coarse = coarse.h;
        row.h_fine = fine.h;
        row.cauchy_phi = norm(dphi, NormKind::H1);
        row.cauchy_mu = norm(dmu, NormKind::H1);
        row.cauchy_mu_half = norm(dmu_half, NormKind::H1);
        // Differences at roundoff level (e.g. constant data) carry no rate.
        resolved_phi.push_back(row.cauchy_phi > roundoff_floor * std::max(1.0, norm(fine.final_state->phi_curr, NormKind::H1)));
        resolved_mu.push_back(row.cauchy_mu > roundoff_floor * std::max(1.0, norm(*fine.final_state->mu_half_last, NormKind::H1)));
        if (k > 0) {
            const CauchyRow& prev = study.rows.back();
            if (resolved_phi[k - 1] && resolved_phi[k]) {
                row.rate_phi = rate(prev.cauchy_phi, row.cauchy_phi);
            }
            if (resolved_mu[k - 1] && resolved_mu[k]) {
                row.rate_mu = rate(prev.cauchy_mu, row.cauchy_mu);
            }
        }
        study.rows.push_back(row);
    }
    return study;
}

std::vector<CauchyRow> cauchy_study(const ConvergenceConfig& config) { return run_cauchy_study(config).rows; }

const char* const cauchy_csv_header = "h_coarse,h_fine,cauchy_phi_H1,rate_phi,cauchy_mu_H1,rate_mu";

void write_cauchy_csv(std::ostream& out, const std::vector<CauchyRow>& rows)
{
    auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string("NA"); };
    out << cauchy_csv_header << '\n';
    for (const CauchyRow& r : rows) {
        out << format_real(r.h_coarse) << ',' << format_real(r.h_fine) << ',' << format_real(r.cauchy_phi) << ','
            << opt(r.rate_phi) << ',' << format_real(r.cauchy_mu) << ',' << opt(r.rate_mu) << '\n';
    }
}

} // namespace chsplit
