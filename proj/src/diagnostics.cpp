#include "chsplit/diagnostics.hpp"

#include "chsplit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace chsplit {

namespace {

double sq(double v) { return v * v; }

double l2_sq(const Field& v)
{
    const Field* f[] = {&v};
    return integrate(v.space(), f, [](const Point&, std::span<const FieldSample> s) { return sq(s[0].value); });
}

double grad_sq(const Field& v)
{
    const Field* f[] = {&v};
    return integrate(v.space(), f, [](const Point&, std::span<const FieldSample> s) {
        return sq(s[0].grad[0]) + sq(s[0].grad[1]);
    });
}

} // namespace

double energy_E(const Field& phi, double epsilon)
{
    const Field* f[] = {&phi};
    return integrate(phi.space(), f, [epsilon](const Point&, std::span<const FieldSample> s) {
        const double u = s[0].value;
        return sq(u * u - 1.0) / (4.0 * epsilon) + 0.5 * epsilon * (sq(s[0].grad[0]) + sq(s[0].grad[1]));
    });
}

double energy_F(const Field& phi_new, const Field& phi_old, double epsilon)
{
    require_same_space(phi_new, phi_old, "energy_F");
    const Field diff = phi_new - phi_old;
    return energy_E(phi_new, epsilon) + l2_sq(diff) / (4.0 * epsilon) + epsilon / 8.0 * grad_sq(diff);
}

DiagnosticsRecord measure_step(const DiscreteOperators& ops, double epsilon, double tau, const StepFields& in)
{
    if (!in.phi) {
        throw InvalidArgument("measure_step: phi is required");
    }
    const Field& phi = *in.phi;
    phi.require_finite("measure_step");

    DiagnosticsRecord r;
    r.m = in.m;
    r.t = in.t;
    r.mass = ops.mean(phi);
    r.E = energy_E(phi, epsilon);
    r.F = in.phi_prev ? energy_F(phi, *in.phi_prev, epsilon) : r.E;

    const Field* f[] = {&phi};
    const double l2 = l2_sq(phi);
    const double grad = grad_sq(phi);
    const double l4 =
        integrate(phi.space(), f, [](const Point&, std::span<const FieldSample> v) { return sq(sq(v[0].value)); });
    r.well_sq = integrate(phi.space(), f,
                          [](const Point&, std::span<const FieldSample> v) { return sq(sq(v[0].value) - 1.0); });
    r.phi_L2 = std::sqrt(l2);
    r.phi_L4 = std::pow(l4, 0.25);
    r.phi_H1 = std::sqrt(l2 + grad);
    r.phi_Linf = norm(phi, NormKind::Linf);
    r.grad_phi_sq = grad;
    r.delta_h_phi_L2 = norm(discrete_laplacian(ops, phi), NormKind::L2);

    if (in.mu_half) {
        in.mu_half->require_finite("measure_step");
        r.grad_mu_half_L2 = std::sqrt(grad_sq(*in.mu_half));
        r.mu_half_L2 = std::sqrt(l2_sq(*in.mu_half));
    }
    if (in.phi_prev) {
        const Field diff = phi - *in.phi_prev;
        r.phi_diff_sq = l2_sq(diff);
        r.grad_phi_diff_sq = grad_sq(diff);
        r.dtau_phi_L2 = std::sqrt(r.phi_diff_sq) / tau;
        if (in.phi_prev2) {
            Field second = diff;
            second -= *in.phi_prev;
            second += *in.phi_prev2;
            r.second_diff_sq = l2_sq(second);
            r.grad_second_diff_sq = grad_sq(second);
        }
    }
    if (in.newton) {
        r.newton_iters = in.newton->iterations;
        r.newton_residual = in.newton->final_residual;
    }
    return r;
}

InitialDiagnostics measure_initial(const DiscreteOperators& ops, double epsilon, double tau, const Field& phi0,
                                   const Field& mu0)
{
    InitialDiagnostics d;
    StepFields in;
    in.phi = &phi0;
    d.record = measure_step(ops, epsilon, tau, in);
    d.delta_h_mu0_L2 = norm(discrete_laplacian(ops, mu0), NormKind::L2);
    d.mu0_L2 = norm(mu0, NormKind::L2);
    d.initial_stability = d.record.E + sq(tau * d.delta_h_mu0_L2) + sq(d.record.delta_h_phi_L2);
    return d;
}

FirstStepCheck first_step_energy_check(const InitialDiagnostics& initial, const DiagnosticsRecord& step1,
                                       double epsilon, double tau)
{
    FirstStepCheck c;
    c.lhs = step1.E + tau * epsilon * sq(step1.grad_mu_half_L2) + step1.phi_diff_sq / (4.0 * epsilon);
    c.rhs = initial.record.E + epsilon * tau * tau / 4.0 * sq(initial.delta_h_mu0_L2);
    return c;
}

void EnergyLawTracker::add_step(DiagnosticsRecord& record)
{
    const double dissipation = tau_ * epsilon_ * sq(record.grad_mu_half_L2) + record.second_diff_sq / (4.0 * epsilon_)
        + epsilon_ / 8.0 * record.grad_second_diff_sq;
    accumulated_ += dissipation;
    const double scale = std::abs(F1_) > 0.0 ? std::abs(F1_) : 1.0;
    record.energy_law_residual = std::abs(record.F + accumulated_ - F1_) / scale;
    record.step_law_residual = std::abs(record.F - F_last_ + dissipation) / scale;
    F_last_ = record.F;
}

StabilitySummary stability_ledger(const Trajectory& tr)
{
    StabilitySummary s;
    const double tau = tr.tau;
    auto absorb_state = [&s](const DiagnosticsRecord& r) {
        s.max_grad_phi_sq = std::max(s.max_grad_phi_sq, r.grad_phi_sq);
        s.max_well_sq = std::max(s.max_well_sq, r.well_sq);
        s.max_phi_L4_4 = std::max(s.max_phi_L4_4, sq(sq(r.phi_L4)));
        s.max_delta_h_phi_sq = std::max(s.max_delta_h_phi_sq, sq(r.delta_h_phi_L2));
        s.max_phi_Linf = std::max(s.max_phi_Linf, r.phi_Linf);
    };
    absorb_state(tr.initial.record);
    s.initial_stability = tr.initial.initial_stability;
    s.first_step_margin = tr.first_step.margin();
    const double mass0 = tr.initial.record.mass;
    for (std::size_t k = 0; k < tr.steps.size(); ++k) {
        const DiagnosticsRecord& r = tr.steps[k];
        absorb_state(r);
        s.max_phi_diff_sq = std::max(s.max_phi_diff_sq, r.phi_diff_sq);
        s.max_mu_half_sq = std::max(s.max_mu_half_sq, sq(r.mu_half_L2));
        s.sum_grad_mu_sq += tau * sq(r.grad_mu_half_L2);
        if (r.m >= 2) {
            s.sum_grad_mu_sq_from_one += tau * sq(r.grad_mu_half_L2);
        }
        s.sum_dtau_phi_sq += tau * sq(r.dtau_phi_L2);
        s.sum_second_diff_sq += r.second_diff_sq + r.grad_second_diff_sq;
        s.max_energy_law_residual = std::max(s.max_energy_law_residual, r.energy_law_residual);
        s.max_mass_drift = std::max(s.max_mass_drift, std::abs(r.mass - mass0));
        if (k >= 1) {
            s.max_F_increase = std::max(s.max_F_increase, r.F - tr.steps[k - 1].F);
        } else {
            s.F1 = r.F;
        }
    }
    s.F_final = tr.steps.empty() ? tr.initial.record.E : tr.steps.back().F;
    if (tr.steps.size() < 2) {
        s.max_F_increase = 0.0;
    }
    return s;
}

std::vector<std::string> growth_flags(const StabilitySummary& coarse, const StabilitySummary& refined,
                                      double relative_tolerance)
{
    std::vector<std::string> flags;
    auto check = [&](const char* name, double a, double b) {
        if (b > a * (1.0 + relative_tolerance) + 1e-14) {
            flags.emplace_back(name);
        }
    };
    check("max_grad_phi_sq", coarse.max_grad_phi_sq, refined.max_grad_phi_sq);
    check("max_well_sq", coarse.max_well_sq, refined.max_well_sq);
    check("max_phi_L4_4", coarse.max_phi_L4_4, refined.max_phi_L4_4);
    check("max_delta_h_phi_sq", coarse.max_delta_h_phi_sq, refined.max_delta_h_phi_sq);
    check("max_phi_Linf", coarse.max_phi_Linf, refined.max_phi_Linf);
    check("max_mu_half_sq", coarse.max_mu_half_sq, refined.max_mu_half_sq);
    check("sum_grad_mu_sq", coarse.sum_grad_mu_sq, refined.sum_grad_mu_sq);
    check("sum_dtau_phi_sq", coarse.sum_dtau_phi_sq, refined.sum_dtau_phi_sq);
    // Differences shrink with tau; they are bounded, not expected to converge.
    check("max_phi_diff_sq", coarse.max_phi_diff_sq, refined.max_phi_diff_sq);
    check("sum_second_diff_sq", coarse.sum_second_diff_sq, refined.sum_second_diff_sq);
    return flags;
}

const char* const diagnostics_csv_header =
    "step,t,mass,E,F,grad_mu_L2,mu_L2,phi_L2,phi_L4,phi_H1,phi_Linf,dlap_phi_L2,dtau_phi_L2,newton_iters,"
    "newton_residual";

std::string format_real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& records)
{
    out << diagnostics_csv_header << '\n';
    for (const DiagnosticsRecord& r : records) {
        out << r.m << ',' << format_real(r.t) << ',' << format_real(r.mass) << ',' << format_real(r.E) << ','
            << format_real(r.F) << ',' << format_real(r.grad_mu_half_L2) << ',' << format_real(r.mu_half_L2) << ','
            << format_real(r.phi_L2) << ',' << format_real(r.phi_L4) << ',' << format_real(r.phi_H1) << ','
            << format_real(r.phi_Linf) << ',' << format_real(r.delta_h_phi_L2) << ',' << format_real(r.dtau_phi_L2)
            << ',' << r.newton_iters << ',' << format_real(r.newton_residual) << '\n';
    }
}

} // namespace chsplit
