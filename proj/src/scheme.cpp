#include "chsplit/scheme.hpp"

#include "chsplit/errors.hpp"

#include <cmath>
#include <string>

namespace chsplit {

using Triplet = Eigen::Triplet<double>;

void SchemeParams::validate() const
{
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw InvalidArgument("SchemeParams: epsilon must be positive");
    }
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw InvalidArgument("SchemeParams: tau must be positive");
    }
    if (!(final_time > 0.0) || !std::isfinite(final_time)) {
        throw InvalidArgument("SchemeParams: final_time must be positive");
    }
    if (degree != 1 && degree != 2) {
        throw InvalidArgument("SchemeParams: degree must be 1 or 2");
    }
    if (!(newton.abs_tol > 0.0) || !(newton.rel_tol > 0.0) || newton.max_iter < 1 || newton.max_halvings < 0) {
        throw InvalidArgument("SchemeParams: Newton tolerances must be positive");
    }
}

int SchemeParams::num_steps() const
{
    validate();
    const double ratio = final_time / tau;
    const double steps = std::round(ratio);
    if (steps < 1.0 || std::abs(steps * tau - final_time) > 1e-12 * final_time) {
        throw InvalidArgument("SchemeParams: tau = " + format_real(tau) + " does not divide final_time = "
                              + format_real(final_time));
    }
    return static_cast<int>(steps);
}

SchemeState initialize(const SchemeParams& params, const DiscreteOperators& ops, const InitialCondition& ic)
{
    params.validate();
    if (ops.space().degree() != params.degree) {
        throw InvalidArgument("initialize: space degree does not match SchemeParams::degree");
    }
    if (!ic.value) {
        throw ConfigError("initial condition '" + ic.name + "' has no pointwise values");
    }
    const auto& space = ops.space_ptr();
    const double eps = params.epsilon;

    auto mean_of = [&](const PointFunction& f, const std::optional<double>& known) {
        return known ? *known : fine_quadrature_integral(space->mesh(), f);
    };

    std::optional<Field> phi0;
    if (params.init_phi == InitPhiMode::Interp) {
        phi0 = interpolate_nodal(space, ic.value);
    } else {
        if (!ic.gradient) {
            throw ConfigError("phi_mode 'ritz' needs the gradient of initial condition '" + ic.name + "'");
        }
        phi0 = ritz_project(ops, ic.gradient, mean_of(ic.value, ic.mean));
    }

    std::optional<Field> mu0;
    if (params.init_mu == InitMuMode::DiscreteVariational) {
        // <mu, psi> = <phi^3 - phi, psi>/eps + eps a(phi, psi).
        const Field* f[] = {&*phi0};
        Vector b = assemble_load(*space, f, [eps](const Point&, std::span<const FieldSample> s) {
            const double u = s[0].value;
            return (u * u * u - u) / eps;
        });
        b += eps * (ops.stiffness() * phi0->coeffs());
        mu0.emplace(space, ops.solve_mass(b));
    } else {
        if (!ic.gradient || !ic.laplacian || !ic.laplacian_gradient) {
            throw ConfigError("mu_mode 'ritz_analytic' needs an analytic Laplacian of initial condition '" + ic.name
                              + "'");
        }
        const PointFunction mu_value = [&ic, eps](const Point& p) {
            const double u = ic.value(p);
            return (u * u * u - u) / eps - eps * ic.laplacian(p);
        };
        const GradientFunction mu_grad = [&ic, eps](const Point& p) {
            const double u = ic.value(p);
            const auto g = ic.gradient(p);
            const auto gl = ic.laplacian_gradient(p);
            const double w = (3.0 * u * u - 1.0) / eps;
            return std::array<double, 2>{w * g[0] - eps * gl[0], w * g[1] - eps * gl[1]};
        };
        mu0 = ritz_project(ops, mu_grad, fine_quadrature_integral(space->mesh(), mu_value));
    }
    phi0->require_finite("initialize");
    mu0->require_finite("initialize");
    return SchemeState{0, std::nullopt, std::move(*phi0), std::nullopt, std::move(*mu0)};
}

// ---------------------------------------------------------------------------

StepSystem::StepSystem(const DiscreteOperators& ops, double epsilon, double tau, double check_weight)
    : ops_(&ops), epsilon_(epsilon), tau_(tau), check_weight_(check_weight), n_(ops.space().num_dofs())
{
    const SparseMatrix& M = ops.mass();
    const SparseMatrix& K = ops.stiffness();
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(2 * M.nonZeros() + 2 * K.nonZeros()));
    for (Eigen::Index r = 0; r < M.outerSize(); ++r) {
        for (SparseMatrix::InnerIterator it(M, r); it; ++it) {
            const int i = static_cast<int>(it.row());
            const int j = static_cast<int>(it.col());
            entries.emplace_back(i, j, it.value());
            entries.emplace_back(n_ + i, n_ + j, -it.value());
        }
    }
    for (Eigen::Index r = 0; r < K.outerSize(); ++r) {
        for (SparseMatrix::InnerIterator it(K, r); it; ++it) {
            const int i = static_cast<int>(it.row());
            const int j = static_cast<int>(it.col());
            entries.emplace_back(i, n_ + j, tau * epsilon * it.value());
            entries.emplace_back(n_ + i, j, check_weight * epsilon * it.value());
        }
    }
    linear_jacobian_.resize(2 * n_, 2 * n_);
    linear_jacobian_.setFromTriplets(entries.begin(), entries.end());
    linear_jacobian_.makeCompressed();
}

StepSystem StepSystem::first_step(const SchemeState& state, const SchemeParams& params, const DiscreteOperators& ops)
{
    if (state.step != 0) {
        throw InvalidArgument("first_step: state is not at m = 0");
    }
    const double eps = params.epsilon;
    const double tau = params.tau;
    StepSystem sys(ops, eps, tau, 0.5);
    const Vector& phi0 = state.phi_curr.coeffs();
    const Vector& mu0 = state.mu0.coeffs();
    sys.phi_curr_ = phi0;
    sys.const_a_ = -(ops.mass() * phi0);
    sys.const_b_ = -(ops.mass() * phi0) / eps + 0.5 * tau * (ops.stiffness() * mu0) + 0.5 * eps * (ops.stiffness() * phi0);
    sys.guess_.resize(2 * sys.n_);
    sys.guess_ << phi0, mu0;
    return sys;
}

StepSystem StepSystem::regular_step(const SchemeState& state, const SchemeParams& params,
                                    const DiscreteOperators& ops)
{
    if (state.step < 1 || !state.phi_prev || !state.mu_half_last) {
        throw InvalidArgument("step: the two-step scheme needs phi^{m-1}; take the first step first");
    }
    const double eps = params.epsilon;
    const double tau = params.tau;
    StepSystem sys(ops, eps, tau, 0.75);
    const Vector& phi_c = state.phi_curr.coeffs();
    const Vector& phi_p = state.phi_prev->coeffs();
    sys.phi_curr_ = phi_c;
    sys.const_a_ = -(ops.mass() * phi_c);
    const Vector tilde = 1.5 * phi_c - 0.5 * phi_p;
    sys.const_b_ = -(ops.mass() * tilde) / eps + 0.25 * eps * (ops.stiffness() * phi_p);
    sys.guess_.resize(2 * sys.n_);
    sys.guess_ << 2.0 * phi_c - phi_p, state.mu_half_last->coeffs();
    return sys;
}

void StepSystem::assemble_nonlinear(const Vector& phi_next, Vector* load, std::vector<Triplet>* jac) const
{
    const FeSpace& space = ops_->space();
    const int nd = space.dofs_per_cell();
    const int nq = space.quadrature().size();
    if (load) {
        load->setZero(n_);
    }
    if (jac) {
        jac->clear();
        jac->reserve(static_cast<std::size_t>(space.num_cells()) * nd * nd);
    }
    std::array<double, 36> local{};
    for (int t = 0; t < space.num_cells(); ++t) {
        const auto dofs = space.cell_dofs(t);
        local.fill(0.0);
        for (int q = 0; q < nq; ++q) {
            double a = 0.0;
            double b = 0.0;
            for (int i = 0; i < nd; ++i) {
                a += phi_next[dofs[i]] * space.phi(q, i);
                b += phi_curr_[dofs[i]] * space.phi(q, i);
            }
            const double w = space.jxw(t, q);
            if (load) {
                const double c = w * chi(a, b);
                for (int i = 0; i < nd; ++i) {
                    (*load)[dofs[i]] += c * space.phi(q, i);
                }
            }
            if (jac) {
                const double d = w * chi_da(a, b);
                for (int i = 0; i < nd; ++i) {
                    for (int j = 0; j < nd; ++j) {
                        local[i * nd + j] += d * space.phi(q, i) * space.phi(q, j);
                    }
                }
            }
        }
        if (jac) {
            for (int i = 0; i < nd; ++i) {
                for (int j = 0; j < nd; ++j) {
                    jac->emplace_back(n_ + dofs[i], dofs[j], local[i * nd + j] / epsilon_);
                }
            }
        }
    }
}

Vector StepSystem::residual(const Vector& x) const
{
    const auto phi = x.head(n_);
    const auto mu = x.tail(n_);
    const SparseMatrix& M = ops_->mass();
    const SparseMatrix& K = ops_->stiffness();
    Vector nonlinear;
    assemble_nonlinear(phi, &nonlinear, nullptr);
    Vector r(2 * n_);
    r.head(n_) = M * phi + const_a_ + tau_ * epsilon_ * (K * mu);
    r.tail(n_) = nonlinear / epsilon_ + check_weight_ * epsilon_ * (K * phi) - M * mu + const_b_;
    return r;
}

SparseMatrix StepSystem::jacobian(const Vector& x) const
{
    std::vector<Triplet> entries;
    assemble_nonlinear(x.head(n_), nullptr, &entries);
    SparseMatrix nonlinear(2 * n_, 2 * n_);
    nonlinear.setFromTriplets(entries.begin(), entries.end());
    SparseMatrix J = linear_jacobian_ + nonlinear;
    J.makeCompressed();
    return J;
}

namespace {

StepResult solve_system(const StepSystem& sys, const SchemeParams& params, const DiscreteOperators& ops)
{
    auto [x, report] = newton_solve(sys, sys.initial_guess(), params.newton);
    const int n = sys.num_dofs();
    Field phi(ops.space_ptr(), x.head(n));
    Field mu(ops.space_ptr(), x.tail(n));
    phi.require_finite("step");
    mu.require_finite("step");
    return StepResult{std::move(phi), std::move(mu), std::move(report)};
}

} // namespace

StepResult first_step(const SchemeState& state, const SchemeParams& params, const DiscreteOperators& ops)
{
    return solve_system(StepSystem::first_step(state, params, ops), params, ops);
}

StepResult step(const SchemeState& state, const SchemeParams& params, const DiscreteOperators& ops)
{
    return solve_system(StepSystem::regular_step(state, params, ops), params, ops);
}

void advance(SchemeState& state, StepResult result)
{
    state.phi_prev = std::move(state.phi_curr);
    state.phi_curr = std::move(result.phi_next);
    state.mu_half_last = std::move(result.mu_half);
    ++state.step;
}

RunResult run(const SchemeParams& params, std::shared_ptr<const DiscreteOperators> ops, const InitialCondition& ic,
              std::span<const StepObserver> observers)
{
    const int num_steps = params.num_steps();
    const double eps = params.epsilon;
    const double tau = params.tau;

    SchemeState state = initialize(params, *ops, ic);
    Trajectory tr;
    tr.epsilon = eps;
    tr.tau = tau;
    tr.initial = measure_initial(*ops, eps, tau, state.phi_curr, state.mu0);
    for (const auto& obs : observers) {
        obs(state, tr.initial.record);
    }

    EnergyLawTracker law(eps, tau);
    tr.steps.reserve(static_cast<std::size_t>(num_steps));
    for (int m = 0; m < num_steps; ++m) {
        StepResult result = m == 0 ? first_step(state, params, *ops) : step(state, params, *ops);
        StepFields in;
        in.m = m + 1;
        in.t = (m + 1) * tau;
        in.phi = &result.phi_next;
        in.phi_prev = &state.phi_curr;
        in.phi_prev2 = state.phi_prev ? &*state.phi_prev : nullptr;
        in.mu_half = &result.mu_half;
        in.newton = &result.newton;
        DiagnosticsRecord record = measure_step(*ops, eps, tau, in);
        if (m == 0) {
            law.start(record.F);
            tr.first_step = first_step_energy_check(tr.initial, record, eps, tau);
        } else {
            law.add_step(record);
        }
        advance(state, std::move(result));
        for (const auto& obs : observers) {
            obs(state, record);
        }
        tr.steps.push_back(record);
    }
    return RunResult{std::move(tr), std::move(state)};
}

RunResult run(const SchemeParams& params, std::shared_ptr<const FeSpace> space, const InitialCondition& ic,
              std::span<const StepObserver> observers)
{
    return run(params, make_operators(std::move(space)), ic, observers);
}

} // namespace chsplit
