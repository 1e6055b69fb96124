#pragma once

#include "chsplit/mesh.hpp"
#include "chsplit/quadrature.hpp"
#include "chsplit/sparse_linalg.hpp"

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace chsplit {

/// Continuous Lagrange P1/P2 space on a Mesh.
///
/// Dofs: one per vertex (same index as the vertex), then for P2 one per edge at
/// its midpoint (index num_vertices + edge). Local ordering on a triangle is
/// vertices 0,1,2 followed by the midpoints of local edges 0,1,2.
/// Basis values and physical gradients are tabulated at every quadrature point
/// on construction; the space is immutable afterwards.
class FeSpace {
public:
    FeSpace(std::shared_ptr<const Mesh> mesh, int degree);

    const Mesh& mesh() const noexcept { return *mesh_; }
    const std::shared_ptr<const Mesh>& mesh_ptr() const noexcept { return mesh_; }
    int degree() const noexcept { return degree_; }
    int num_dofs() const noexcept { return num_dofs_; }
    int dofs_per_cell() const noexcept { return dofs_per_cell_; }
    int num_cells() const noexcept { return mesh_->num_triangles(); }
    const QuadratureRule& quadrature() const noexcept { return rule_; }

    std::span<const int> cell_dofs(int t) const
    {
        return {cell_dofs_.data() + static_cast<std::size_t>(t) * dofs_per_cell_,
                static_cast<std::size_t>(dofs_per_cell_)};
    }
    /// Interpolation node of a dof (vertex or edge midpoint).
    const Point& dof_node(int d) const { return dof_nodes_[d]; }

    /// Reference basis values at barycentric point `bary`, written to `out`.
    void basis_values(const std::array<double, 3>& bary, std::span<double> out) const;

    // Tabulated data, indexed by (cell, quadrature point, local dof).
    double phi(int q, int i) const { return values_[static_cast<std::size_t>(q) * dofs_per_cell_ + i]; }
    const std::array<double, 2>& grad(int t, int q, int i) const
    {
        return grads_[(static_cast<std::size_t>(t) * rule_.size() + q) * dofs_per_cell_ + i];
    }
    double jxw(int t, int q) const { return jxw_[static_cast<std::size_t>(t) * rule_.size() + q]; }
    const Point& qpoint(int t, int q) const { return qpoints_[static_cast<std::size_t>(t) * rule_.size() + q]; }

private:
    std::shared_ptr<const Mesh> mesh_;
    int degree_;
    int num_dofs_ = 0;
    int dofs_per_cell_ = 0;
    QuadratureRule rule_;
    std::vector<int> cell_dofs_;
    std::vector<Point> dof_nodes_;
    std::vector<double> values_;
    std::vector<std::array<double, 2>> grads_;
    std::vector<double> jxw_;
    std::vector<Point> qpoints_;
};

/// Degree 1 uses a degree-4 rule, degree 2 a degree-8 rule, so every product
/// appearing in the scheme (up to cubic nonlinearity times a test function) is
/// integrated exactly.
std::shared_ptr<const FeSpace> build_space(std::shared_ptr<const Mesh> mesh, int degree);

/// Coefficient vector of one scalar function in an FeSpace.
class Field {
public:
    explicit Field(std::shared_ptr<const FeSpace> space);
    Field(std::shared_ptr<const FeSpace> space, Vector coeffs);

    const FeSpace& space() const noexcept { return *space_; }
    const std::shared_ptr<const FeSpace>& space_ptr() const noexcept { return space_; }
    const Vector& coeffs() const noexcept { return coeffs_; }
    Vector& coeffs() noexcept { return coeffs_; }

    /// Throws NumericalError if any coefficient is NaN/Inf.
    void require_finite(const char* what) const;

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double s);

private:
    std::shared_ptr<const FeSpace> space_;
    Vector coeffs_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/// Throws InvalidArgument unless both fields live on the same FeSpace object.
void require_same_space(const Field& a, const Field& b, const char* who);

/// Value and gradient of a field at one quadrature point.
struct FieldSample {
    double value = 0.0;
    std::array<double, 2> grad{};
};

using PointFunction = std::function<double(const Point&)>;
using GradientFunction = std::function<std::array<double, 2>(const Point&)>;
/// Integrand / load density in terms of position and sampled fields.
using FieldIntegrand = std::function<double(const Point&, std::span<const FieldSample>)>;

SparseMatrix assemble_mass(const FeSpace& space);
SparseMatrix assemble_stiffness(const FeSpace& space);

/// b_i = integral of f(x, fields) * psi_i.
Vector assemble_load(const FeSpace& space, std::span<const Field* const> fields, const FieldIntegrand& f);
/// b_i = integral of f(x) * psi_i.
Vector assemble_load(const FeSpace& space, const PointFunction& f);
/// b_i = integral of g(x) . grad psi_i.
Vector assemble_gradient_load(const FeSpace& space, const GradientFunction& g);
/// A_ij = integral of w(x, fields) * psi_i * psi_j.
SparseMatrix assemble_weighted_mass(const FeSpace& space, std::span<const Field* const> fields,
                                    const FieldIntegrand& w);

/// Integral over the unit square of integrand(x, fields) by the space's rule.
/// Non-finite integrand values raise NumericalError naming the element.
double integrate(const FeSpace& space, std::span<const Field* const> fields, const FieldIntegrand& integrand);

/// Nodal interpolant. Raises NumericalError naming the node if f is not finite there.
Field interpolate_nodal(std::shared_ptr<const FeSpace> space, const PointFunction& f);

/// Point evaluation by locating the containing triangle.
double evaluate(const Field& field, const Point& p);

} // namespace chsplit
