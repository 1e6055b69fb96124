#pragma once

#include "chsplit/fem.hpp"
#include "chsplit/sparse_linalg.hpp"

#include <memory>

namespace chsplit {

/// LinfNodal is the maximum over dof nodes; Linf also samples every
/// quadrature point, which catches interior extrema of P2 functions.
enum class NormKind { L2, H1semi, H1, L4, LinfNodal, Linf };

/// Mass and stiffness matrices of one space together with their factorizations.
/// Built once per space and shared read-only by projections, the time stepper
/// and diagnostics.
class DiscreteOperators {
public:
    explicit DiscreteOperators(std::shared_ptr<const FeSpace> space);

    const FeSpace& space() const noexcept { return *space_; }
    const std::shared_ptr<const FeSpace>& space_ptr() const noexcept { return space_; }
    const SparseMatrix& mass() const noexcept { return mass_; }
    const SparseMatrix& stiffness() const noexcept { return stiffness_; }
    /// M * 1, i.e. the integrals of the basis functions.
    const Vector& basis_integrals() const noexcept { return constrained_.mass_row(); }

    Vector solve_mass(const Vector& b) const;
    /// K x = b with <x, 1> = mean_target.
    Vector solve_mean_constrained(const Vector& b, double mean_target) const;

    /// <a, b> in L2.
    double inner(const Field& a, const Field& b) const;
    /// a(a, b) = <grad a, grad b>.
    double energy_inner(const Field& a, const Field& b) const;
    /// <v, 1>.
    double mean(const Field& v) const;

private:
    std::shared_ptr<const FeSpace> space_;
    SparseMatrix mass_;
    SparseMatrix stiffness_;
    CholeskySolver mass_solver_;
    MeanConstrainedSolver constrained_;
};

std::shared_ptr<const DiscreteOperators> make_operators(std::shared_ptr<const FeSpace> space);

/// Ritz projection: a(R f - f, xi) = 0 for all xi, <R f - f, 1> = 0.
/// `mean_f` is the integral of f over the unit square.
Field ritz_project(const DiscreteOperators& ops, const GradientFunction& grad_f, double mean_f);

/// L2 projection: <Q f - f, xi> = 0 for all xi.
Field l2_project(const DiscreteOperators& ops, const PointFunction& f);

/// Discrete Laplacian: <Lap_h v, xi> = -a(v, xi). The result has zero mean.
Field discrete_laplacian(const DiscreteOperators& ops, const Field& v);

/// Discrete inverse Laplacian T_h: zero-mean solution of a(T_h v, xi) = <v, xi>.
/// Requires <v, 1> = 0 (relative tolerance 1e-10); throws CompatibilityError otherwise.
/// Note Lap_h T_h v = -v.
Field inverse_laplacian(const DiscreteOperators& ops, const Field& v);

double norm(const Field& v, NormKind kind);

/// Discrete negative norm sqrt(<v, T_h v>) for zero-mean v.
double norm_minus1h(const DiscreteOperators& ops, const Field& v);

/// Represent a coarse field exactly on a nested finer space (same or higher degree).
/// Throws InvalidArgument if the fine mesh does not descend from the coarse one.
Field prolong(const Field& coarse, std::shared_ptr<const FeSpace> fine_space);

} // namespace chsplit
