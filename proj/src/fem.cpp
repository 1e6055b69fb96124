#include "chsplit/fem.hpp"

#include "chsplit/errors.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace chsplit {

namespace {

using Triplet = Eigen::Triplet<double>;

// d(basis_i)/d(lambda_k) at a barycentric point.
void basis_bary_derivs(int degree, const std::array<double, 3>& l, std::span<std::array<double, 3>> out)
{
    if (degree == 1) {
        out[0] = {1, 0, 0};
        out[1] = {0, 1, 0};
        out[2] = {0, 0, 1};
        return;
    }
    for (int i = 0; i < 3; ++i) {
        out[i] = {0, 0, 0};
        out[i][i] = 4.0 * l[i] - 1.0;
    }
    for (int k = 0; k < 3; ++k) {
        const int k1 = (k + 1) % 3;
        out[3 + k] = {0, 0, 0};
        out[3 + k][k] = 4.0 * l[k1];
        out[3 + k][k1] = 4.0 * l[k];
    }
}

struct CellGeometry {
    double area;
    std::array<std::array<double, 2>, 3> grad_lambda;
};

CellGeometry cell_geometry(const Mesh& mesh, int t)
{
    const auto& tri = mesh.triangles()[t];
    const Point& a = mesh.vertices()[tri[0]];
    const Point& b = mesh.vertices()[tri[1]];
    const Point& c = mesh.vertices()[tri[2]];
    const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    CellGeometry g;
    g.area = 0.5 * det;
    g.grad_lambda[0] = {(b.y - c.y) / det, (c.x - b.x) / det};
    g.grad_lambda[1] = {(c.y - a.y) / det, (a.x - c.x) / det};
    g.grad_lambda[2] = {(a.y - b.y) / det, (b.x - a.x) / det};
    return g;
}

void sample_fields(const FeSpace& space, std::span<const Field* const> fields, int t, int q,
                   std::vector<FieldSample>& samples)
{
    const auto dofs = space.cell_dofs(t);
    samples.assign(fields.size(), FieldSample{});
    for (std::size_t f = 0; f < fields.size(); ++f) {
        const Vector& c = fields[f]->coeffs();
        FieldSample s;
        for (int i = 0; i < space.dofs_per_cell(); ++i) {
            const double ci = c[dofs[i]];
            const auto& g = space.grad(t, q, i);
            s.value += ci * space.phi(q, i);
            s.grad[0] += ci * g[0];
            s.grad[1] += ci * g[1];
        }
        samples[f] = s;
    }
}

void require_fields_on(const FeSpace& space, std::span<const Field* const> fields, const char* who)
{
    for (const Field* f : fields) {
        if (&f->space() != &space) {
            throw InvalidArgument(std::string(who) + ": field belongs to a different space");
        }
    }
}

SparseMatrix compress(int n, std::vector<Triplet>& entries)
{
    SparseMatrix A(n, n);
    A.setFromTriplets(entries.begin(), entries.end());
    A.makeCompressed();
    return A;
}

} // namespace

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh, int degree) : mesh_(std::move(mesh)), degree_(degree)
{
    if (!mesh_) {
        throw InvalidArgument("build_space: null mesh");
    }
    if (degree != 1 && degree != 2) {
        throw InvalidArgument("build_space: unsupported polynomial degree " + std::to_string(degree));
    }
    const Mesh& m = *mesh_;
    rule_ = triangle_rule(degree == 1 ? 4 : 8);
    dofs_per_cell_ = degree == 1 ? 3 : 6;
    num_dofs_ = m.num_vertices() + (degree == 2 ? m.num_edges() : 0);

    dof_nodes_.assign(m.vertices().begin(), m.vertices().end());
    if (degree == 2) {
        for (const Edge& e : m.edges()) {
            const Point& a = m.vertices()[e.vertices[0]];
            const Point& b = m.vertices()[e.vertices[1]];
            dof_nodes_.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
        }
    }

    const int nc = m.num_triangles();
    cell_dofs_.resize(static_cast<std::size_t>(nc) * dofs_per_cell_);
    for (int t = 0; t < nc; ++t) {
        int* d = cell_dofs_.data() + static_cast<std::size_t>(t) * dofs_per_cell_;
        for (int k = 0; k < 3; ++k) {
            d[k] = m.triangles()[t][k];
        }
        if (degree == 2) {
            for (int k = 0; k < 3; ++k) {
                d[3 + k] = m.num_vertices() + m.triangle_edges(t)[k];
            }
        }
    }

    const int nq = rule_.size();
    values_.resize(static_cast<std::size_t>(nq) * dofs_per_cell_);
    std::vector<std::array<std::array<double, 3>, 6>> bary_derivs(nq);
    for (int q = 0; q < nq; ++q) {
        basis_values(rule_.points[q], {values_.data() + static_cast<std::size_t>(q) * dofs_per_cell_,
                                       static_cast<std::size_t>(dofs_per_cell_)});
        basis_bary_derivs(degree, rule_.points[q], {bary_derivs[q].data(), static_cast<std::size_t>(dofs_per_cell_)});
    }

    grads_.resize(static_cast<std::size_t>(nc) * nq * dofs_per_cell_);
    jxw_.resize(static_cast<std::size_t>(nc) * nq);
    qpoints_.resize(static_cast<std::size_t>(nc) * nq);
    for (int t = 0; t < nc; ++t) {
        const CellGeometry g = cell_geometry(m, t);
        const auto& tri = m.triangles()[t];
        for (int q = 0; q < nq; ++q) {
            const auto& l = rule_.points[q];
            const std::size_t tq = static_cast<std::size_t>(t) * nq + q;
            jxw_[tq] = rule_.weights[q] * g.area;
            Point x{};
            for (int k = 0; k < 3; ++k) {
                x.x += l[k] * m.vertices()[tri[k]].x;
                x.y += l[k] * m.vertices()[tri[k]].y;
            }
            qpoints_[tq] = x;
            for (int i = 0; i < dofs_per_cell_; ++i) {
                std::array<double, 2> gr{0.0, 0.0};
                for (int k = 0; k < 3; ++k) {
                    gr[0] += bary_derivs[q][i][k] * g.grad_lambda[k][0];
                    gr[1] += bary_derivs[q][i][k] * g.grad_lambda[k][1];
                }
                grads_[tq * dofs_per_cell_ + i] = gr;
            }
        }
    }
}

void FeSpace::basis_values(const std::array<double, 3>& l, std::span<double> out) const
{
    if (degree_ == 1) {
        out[0] = l[0];
        out[1] = l[1];
        out[2] = l[2];
        return;
    }
    for (int i = 0; i < 3; ++i) {
        out[i] = l[i] * (2.0 * l[i] - 1.0);
    }
    for (int k = 0; k < 3; ++k) {
        out[3 + k] = 4.0 * l[k] * l[(k + 1) % 3];
    }
}

std::shared_ptr<const FeSpace> build_space(std::shared_ptr<const Mesh> mesh, int degree)
{
    return std::make_shared<const FeSpace>(std::move(mesh), degree);
}

// ---------------------------------------------------------------------------

Field::Field(std::shared_ptr<const FeSpace> space) : space_(std::move(space))
{
    if (!space_) {
        throw InvalidArgument("Field: null space");
    }
    coeffs_ = Vector::Zero(space_->num_dofs());
}

Field::Field(std::shared_ptr<const FeSpace> space, Vector coeffs) : space_(std::move(space)), coeffs_(std::move(coeffs))
{
    if (!space_) {
        throw InvalidArgument("Field: null space");
    }
    if (coeffs_.size() != space_->num_dofs()) {
        throw InvalidArgument("Field: coefficient vector has length " + std::to_string(coeffs_.size())
                              + ", space has " + std::to_string(space_->num_dofs()) + " dofs");
    }
}

void Field::require_finite(const char* what) const
{
    if (!coeffs_.allFinite()) {
        throw NumericalError(std::string(what) + ": field has non-finite coefficients");
    }
}

Field& Field::operator+=(const Field& other)
{
    require_same_space(*this, other, "Field::operator+=");
    coeffs_ += other.coeffs_;
    return *this;
}

Field& Field::operator-=(const Field& other)
{
    require_same_space(*this, other, "Field::operator-=");
    coeffs_ -= other.coeffs_;
    return *this;
}

Field& Field::operator*=(double s)
{
    coeffs_ *= s;
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

void require_same_space(const Field& a, const Field& b, const char* who)
{
    if (a.space_ptr() != b.space_ptr()) {
        throw InvalidArgument(std::string(who) + ": fields live on different spaces");
    }
}

// ---------------------------------------------------------------------------

SparseMatrix assemble_mass(const FeSpace& space)
{
    const int nd = space.dofs_per_cell();
    const int nq = space.quadrature().size();
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(space.num_cells()) * nd * nd);
    std::vector<double> local(static_cast<std::size_t>(nd) * nd);
    for (int t = 0; t < space.num_cells(); ++t) {
        std::fill(local.begin(), local.end(), 0.0);
        for (int q = 0; q < nq; ++q) {
            const double w = space.jxw(t, q);
            for (int i = 0; i < nd; ++i) {
                for (int j = 0; j < nd; ++j) {
                    local[i * nd + j] += w * space.phi(q, i) * space.phi(q, j);
                }
            }
        }
        const auto dofs = space.cell_dofs(t);
        for (int i = 0; i < nd; ++i) {
            for (int j = 0; j < nd; ++j) {
                entries.emplace_back(dofs[i], dofs[j], local[i * nd + j]);
            }
        }
    }
    return compress(space.num_dofs(), entries);
}

SparseMatrix assemble_stiffness(const FeSpace& space)
{
    const int nd = space.dofs_per_cell();
    const int nq = space.quadrature().size();
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(space.num_cells()) * nd * nd);
    std::vector<double> local(static_cast<std::size_t>(nd) * nd);
    for (int t = 0; t < space.num_cells(); ++t) {
        std::fill(local.begin(), local.end(), 0.0);
        for (int q = 0; q < nq; ++q) {
            const double w = space.jxw(t, q);
            for (int i = 0; i < nd; ++i) {
                const auto& gi = space.grad(t, q, i);
                for (int j = 0; j < nd; ++j) {
                    const auto& gj = space.grad(t, q, j);
                    local[i * nd + j] += w * (gi[0] * gj[0] + gi[1] * gj[1]);
                }
            }
        }
        const auto dofs = space.cell_dofs(t);
        for (int i = 0; i < nd; ++i) {
            for (int j = 0; j < nd; ++j) {
                entries.emplace_back(dofs[i], dofs[j], local[i * nd + j]);
            }
        }
    }
    return compress(space.num_dofs(), entries);
}

Vector assemble_load(const FeSpace& space, std::span<const Field* const> fields, const FieldIntegrand& f)
{
    require_fields_on(space, fields, "assemble_load");
    const int nd = space.dofs_per_cell();
    const int nq = space.quadrature().size();
    Vector b = Vector::Zero(space.num_dofs());
    std::vector<FieldSample> samples;
    for (int t = 0; t < space.num_cells(); ++t) {
        const auto dofs = space.cell_dofs(t);
        for (int q = 0; q < nq; ++q) {
            sample_fields(space, fields, t, q, samples);
            const double value = f(space.qpoint(t, q), samples) * space.jxw(t, q);
            if (!std::isfinite(value)) {
                throw NumericalError("assemble_load: non-finite load density on element " + std::to_string(t));
            }
            for (int i = 0; i < nd; ++i) {
                b[dofs[i]] += value * space.phi(q, i);
            }
        }
    }
    return b;
}

Vector assemble_load(const FeSpace& space, const PointFunction& f)
{
    return assemble_load(space, {}, [&](const Point& x, std::span<const FieldSample>) { return f(x); });
}

Vector assemble_gradient_load(const FeSpace& space, const GradientFunction& g)
{
    const int nd = space.dofs_per_cell();
    const int nq = space.quadrature().size();
    Vector b = Vector::Zero(space.num_dofs());
    for (int t = 0; t < space.num_cells(); ++t) {
        const auto dofs = space.cell_dofs(t);
        for (int q = 0; q < nq; ++q) {
            const auto gx = g(space.qpoint(t, q));
            const double w = space.jxw(t, q);
            if (!std::isfinite(gx[0]) || !std::isfinite(gx[1])) {
                throw NumericalError("assemble_gradient_load: non-finite gradient on element " + std::to_string(t));
            }
            for (int i = 0; i < nd; ++i) {
                const auto& gi = space.grad(t, q, i);
                b[dofs[i]] += w * (gx[0] * gi[0] + gx[1] * gi[1]);
            }
        }
    }
    return b;
}

SparseMatrix assemble_weighted_mass(const FeSpace& space, std::span<const Field* const> fields,
                                    const FieldIntegrand& weight)
{
    require_fields_on(space, fields, "assemble_weighted_mass");
    const int nd = space.dofs_per_cell();
    const int nq = space.quadrature().size();
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(space.num_cells()) * nd * nd);
    std::vector<double> local(static_cast<std::size_t>(nd) * nd);
    std::vector<FieldSample> samples;
    for (int t = 0; t < space.num_cells(); ++t) {
        std::fill(local.begin(), local.end(), 0.0);
        for (int q = 0; q < nq; ++q) {
            sample_fields(space, fields, t, q, samples);
            const double w = weight(space.qpoint(t, q), samples) * space.jxw(t, q);
            if (!std::isfinite(w)) {
                throw NumericalError("assemble_weighted_mass: non-finite weight on element " + std::to_string(t));
            }
            for (int i = 0; i < nd; ++i) {
                for (int j = 0; j < nd; ++j) {
                    local[i * nd + j] += w * space.phi(q, i) * space.phi(q, j);
                }
            }
        }
        const auto dofs = space.cell_dofs(t);
        for (int i = 0; i < nd; ++i) {
            for (int j = 0; j < nd; ++j) {
                entries.emplace_back(dofs[i], dofs[j], local[i * nd + j]);
            }
        }
    }
    return compress(space.num_dofs(), entries);
}

double integrate(const FeSpace& space, std::span<const Field* const> fields, const FieldIntegrand& integrand)
{
    require_fields_on(space, fields, "integrate");
    const int nq = space.quadrature().size();
    std::vector<FieldSample> samples;
    double total = 0.0;
    for (int t = 0; t < space.num_cells(); ++t) {
        double cell = 0.0;
        for (int q = 0; q < nq; ++q) {
            sample_fields(space, fields, t, q, samples);
            const double v = integrand(space.qpoint(t, q), samples);
            if (!std::isfinite(v)) {
                throw NumericalError("integrate: non-finite integrand on element " + std::to_string(t));
            }
            cell += v * space.jxw(t, q);
        }
        total += cell;
    }
    return total;
}

Field interpolate_nodal(std::shared_ptr<const FeSpace> space, const PointFunction& f)
{
    Field field(space);
    for (int d = 0; d < space->num_dofs(); ++d) {
        const Point& p = space->dof_node(d);
        const double v = f(p);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "interpolate_nodal: non-finite value at dof " << d << " node (" << p.x << ", " << p.y << ")";
            throw NumericalError(msg.str());
        }
        field.coeffs()[d] = v;
    }
    return field;
}

double evaluate(const Field& field, const Point& p)
{
    const FeSpace& space = field.space();
    const auto loc = space.mesh().locate(p);
    if (!loc) {
        throw InvalidArgument("evaluate: point outside the domain");
    }
    std::array<double, 6> basis{};
    space.basis_values(loc->barycentric, {basis.data(), static_cast<std::size_t>(space.dofs_per_cell())});
    const auto dofs = space.cell_dofs(loc->triangle);
    double v = 0.0;
    for (int i = 0; i < space.dofs_per_cell(); ++i) {
        v += basis[i] * field.coeffs()[dofs[i]];
    }
    return v;
}

} // namespace chsplit
