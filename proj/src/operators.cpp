#include "chsplit/operators.hpp"

#include "chsplit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace chsplit {

DiscreteOperators::DiscreteOperators(std::shared_ptr<const FeSpace> space)
    : space_(std::move(space)),
      mass_(assemble_mass(*space_)),
      stiffness_(assemble_stiffness(*space_)),
      mass_solver_(mass_),
      constrained_(stiffness_, mass_)
{
}

Vector DiscreteOperators::solve_mass(const Vector& b) const { return mass_solver_.solve(b); }

Vector DiscreteOperators::solve_mean_constrained(const Vector& b, double mean_target) const
{
    return constrained_.solve(b, mean_target);
}

double DiscreteOperators::inner(const Field& a, const Field& b) const
{
    require_same_space(a, b, "inner");
    return a.coeffs().dot(mass_ * b.coeffs());
}

double DiscreteOperators::energy_inner(const Field& a, const Field& b) const
{
    require_same_space(a, b, "energy_inner");
    return a.coeffs().dot(stiffness_ * b.coeffs());
}

double DiscreteOperators::mean(const Field& v) const { return basis_integrals().dot(v.coeffs()); }

std::shared_ptr<const DiscreteOperators> make_operators(std::shared_ptr<const FeSpace> space)
{
    return std::make_shared<const DiscreteOperators>(std::move(space));
}

Field ritz_project(const DiscreteOperators& ops, const GradientFunction& grad_f, double mean_f)
{
    Vector b = assemble_gradient_load(ops.space(), grad_f);
    // sum(b) is the quadrature of grad f . grad 1 = 0, up to rounding.
    b -= ops.basis_integrals() * (b.sum() / ops.basis_integrals().sum());
    Field r(ops.space_ptr(), ops.solve_mean_constrained(b, mean_f));
    r.require_finite("ritz_project");
    return r;
}

Field l2_project(const DiscreteOperators& ops, const PointFunction& f)
{
    Field r(ops.space_ptr(), ops.solve_mass(assemble_load(ops.space(), f)));
    r.require_finite("l2_project");
    return r;
}

Field discrete_laplacian(const DiscreteOperators& ops, const Field& v)
{
    if (v.space_ptr() != ops.space_ptr()) {
        throw InvalidArgument("discrete_laplacian: field not on the operators' space");
    }
    Field r(ops.space_ptr(), ops.solve_mass(-(ops.stiffness() * v.coeffs())));
    r.require_finite("discrete_laplacian");
    return r;
}

Field inverse_laplacian(const DiscreteOperators& ops, const Field& v)
{
    if (v.space_ptr() != ops.space_ptr()) {
        throw InvalidArgument("inverse_laplacian: field not on the operators' space");
    }
    const double mean = ops.mean(v);
    const double scale = std::sqrt(std::max(ops.inner(v, v), 0.0));
    if (std::abs(mean) > 1e-10 * scale) {
        throw CompatibilityError("inverse_laplacian: input has nonzero mean " + std::to_string(mean));
    }
    Vector b = ops.mass() * v.coeffs();
    b -= ops.basis_integrals() * (b.sum() / ops.basis_integrals().sum());
    Field r(ops.space_ptr(), ops.solve_mean_constrained(b, 0.0));
    r.require_finite("inverse_laplacian");
    return r;
}

double norm(const Field& v, NormKind kind)
{
    const FeSpace& space = v.space();
    const Field* fields[] = {&v};
    switch (kind) {
    case NormKind::L2:
        return std::sqrt(integrate(space, fields, [](const Point&, std::span<const FieldSample> s) {
            return s[0].value * s[0].value;
        }));
    case NormKind::H1semi:
        return std::sqrt(integrate(space, fields, [](const Point&, std::span<const FieldSample> s) {
            return s[0].grad[0] * s[0].grad[0] + s[0].grad[1] * s[0].grad[1];
        }));
    case NormKind::H1:
        return std::sqrt(integrate(space, fields, [](const Point&, std::span<const FieldSample> s) {
            return s[0].value * s[0].value + s[0].grad[0] * s[0].grad[0] + s[0].grad[1] * s[0].grad[1];
        }));
    case NormKind::L4:
        return std::pow(integrate(space, fields,
                                  [](const Point&, std::span<const FieldSample> s) {
                                      const double u2 = s[0].value * s[0].value;
                                      return u2 * u2;
                                  }),
                        0.25);
    case NormKind::LinfNodal:
        return v.coeffs().size() ? v.coeffs().cwiseAbs().maxCoeff() : 0.0;
    case NormKind::Linf: {
        double m = v.coeffs().size() ? v.coeffs().cwiseAbs().maxCoeff() : 0.0;
        integrate(space, fields, [&m](const Point&, std::span<const FieldSample> s) {
            m = std::max(m, std::abs(s[0].value));
            return 0.0;
        });
        return m;
    }
    }
    throw InvalidArgument("norm: unknown norm kind");
}

double norm_minus1h(const DiscreteOperators& ops, const Field& v)
{
    const Field t = inverse_laplacian(ops, v);
    return std::sqrt(std::max(ops.inner(v, t), 0.0));
}

Field prolong(const Field& coarse, std::shared_ptr<const FeSpace> fine_space)
{
    const FeSpace& cs = coarse.space();
    const Mesh* coarse_mesh = &cs.mesh();
    const FeSpace& fs = *fine_space;
    if (fs.degree() < cs.degree()) {
        throw InvalidArgument("prolong: fine space has lower polynomial degree");
    }
    // Number of refinement levels separating the meshes.
    int depth = 0;
    for (const Mesh* m = &fs.mesh(); m != coarse_mesh; ++depth) {
        if (!m->parent()) {
            throw InvalidArgument("prolong: fine mesh does not descend from the coarse mesh");
        }
        m = m->parent().get();
    }

    Field fine(fine_space);
    std::vector<char> done(fs.num_dofs(), 0);
    std::array<double, 6> basis{};
    for (int t = 0; t < fs.num_cells(); ++t) {
        int ancestor = t;
        const Mesh* m = &fs.mesh();
        for (int k = 0; k < depth; ++k) {
            ancestor = m->parent_triangle(ancestor);
            m = m->parent().get();
        }
        const auto& tri = coarse_mesh->triangles()[ancestor];
        const Point& a = coarse_mesh->vertices()[tri[0]];
        const Point& b = coarse_mesh->vertices()[tri[1]];
        const Point& c = coarse_mesh->vertices()[tri[2]];
        const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
        const auto cdofs = cs.cell_dofs(ancestor);
        for (int d : fs.cell_dofs(t)) {
            if (done[d]) {
                continue;
            }
            const Point& p = fs.dof_node(d);
            const double l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
            const double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
            cs.basis_values({1.0 - l1 - l2, l1, l2}, {basis.data(), static_cast<std::size_t>(cs.dofs_per_cell())});
            double v = 0.0;
            for (int i = 0; i < cs.dofs_per_cell(); ++i) {
                v += basis[i] * coarse.coeffs()[cdofs[i]];
            }
            fine.coeffs()[d] = v;
            done[d] = 1;
        }
    }
    return fine;
}

} // namespace chsplit
