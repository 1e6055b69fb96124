#include "chsplit/sparse_linalg.hpp"

#include "chsplit/errors.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/UmfPackSupport>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace chsplit {

namespace {

using ColMatrix = Eigen::SparseMatrix<double>;

double check_residual(const SparseMatrix& A, const Vector& x, const Vector& b, double tol, const char* who)
{
    if (!x.allFinite()) {
        throw SolverError(std::string(who) + ": solution contains non-finite entries");
    }
    const double res = (A * x - b).norm();
    const double bound = tol * std::max(1.0, b.norm());
    if (!(res <= bound)) {
        throw SolverError(std::string(who) + ": residual " + std::to_string(res) + " exceeds " + std::to_string(bound),
                          {res});
    }
    return res;
}

void require_square(const SparseMatrix& A, const Vector& b, const char* who)
{
    if (A.rows() != A.cols() || A.rows() != b.size()) {
        throw InvalidArgument(std::string(who) + ": dimension mismatch");
    }
}

} // namespace

CholeskySolver::CholeskySolver(SparseMatrix A) : matrix_(std::move(A))
{
    ColMatrix col = matrix_;
    factor_.compute(col);
    if (factor_.info() != Eigen::Success) {
        throw SolverError("CholeskySolver: factorization failed (matrix not SPD?)");
    }
}

Vector CholeskySolver::solve(const Vector& b, double tol, LinearSolveReport* report) const
{
    require_square(matrix_, b, "CholeskySolver");
    Vector x = factor_.solve(b);
    const double res = check_residual(matrix_, x, b, tol, "CholeskySolver");
    if (report) {
        *report = {0, res, true};
    }
    return x;
}

LuSolver::LuSolver(SparseMatrix A)
    : matrix_(std::move(A)),
      factor_(std::make_unique<Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>>>())
{
    if (matrix_.rows() != matrix_.cols()) {
        throw InvalidArgument("LuSolver: matrix is not square");
    }
    ColMatrix col = matrix_;
    col.makeCompressed();
    factor_->compute(col);
    if (factor_->info() != Eigen::Success) {
        throw SolverError("LuSolver: factorization failed: " + factor_->lastErrorMessage());
    }
}

Vector LuSolver::solve(const Vector& b, double tol, LinearSolveReport* report) const
{
    require_square(matrix_, b, "LuSolver");
    Vector x = factor_->solve(b);
    const double res = check_residual(matrix_, x, b, tol, "LuSolver");
    if (report) {
        *report = {0, res, true};
    }
    return x;
}

std::pair<Vector, LinearSolveReport> solve_spd(const SparseMatrix& A, const Vector& b, double tol, SpdMethod method)
{
    require_square(A, b, "solve_spd");
    if (method == SpdMethod::Direct) {
        LinearSolveReport report;
        Vector x = CholeskySolver(A).solve(b, tol, &report);
        report.factorization_reused = false;
        return {std::move(x), report};
    }

    ColMatrix col = A;
    Eigen::ConjugateGradient<ColMatrix, Eigen::Lower | Eigen::Upper, Eigen::IncompleteCholesky<double>> cg;
    cg.setMaxIterations(10 * static_cast<int>(A.rows()));
    // Eigen's tolerance is relative to ||b||; tighten so the absolute bound holds too.
    cg.setTolerance(0.5 * tol * std::max(1.0, b.norm()) / std::max(b.norm(), 1e-300));
    cg.compute(col);
    if (cg.info() != Eigen::Success) {
        throw SolverError("solve_spd: preconditioner setup failed");
    }
    Vector x = cg.solve(b);
    std::vector<double> history{(A * x - b).norm()};
    if (cg.info() != Eigen::Success) {
        throw SolverError("solve_spd: conjugate gradients did not converge within "
                              + std::to_string(cg.maxIterations()) + " iterations",
                          history);
    }
    const double res = check_residual(A, x, b, tol, "solve_spd");
    return {std::move(x), LinearSolveReport{static_cast<int>(cg.iterations()), res, false}};
}

std::pair<Vector, LinearSolveReport> solve_general(const SparseMatrix& A, const Vector& b, double tol)
{
    require_square(A, b, "solve_general");
    LinearSolveReport report;
    Vector x = LuSolver(A).solve(b, tol, &report);
    report.factorization_reused = false;
    return {std::move(x), report};
}

// UMFPACK rather than Eigen::SparseLU: several times faster on the coupled
// Newton systems. UMFPACK keeps pointers into the factored matrix, so the
// column-major copy lives here.
struct ReusableLu::Impl {
    Eigen::UmfPackLU<ColMatrix> lu;
    SparseMatrix matrix;
    ColMatrix pattern;
    ColMatrix factored;
    bool analyzed = false;
    bool reused = false;
};

ReusableLu::ReusableLu() : impl_(std::make_unique<Impl>()) {}
ReusableLu::~ReusableLu() = default;
ReusableLu::ReusableLu(ReusableLu&&) noexcept = default;
ReusableLu& ReusableLu::operator=(ReusableLu&&) noexcept = default;

void ReusableLu::factorize(const SparseMatrix& A)
{
    if (A.rows() != A.cols()) {
        throw InvalidArgument("ReusableLu: matrix is not square");
    }
    ColMatrix col = A;
    col.makeCompressed();
    Impl& s = *impl_;
    bool same_pattern = s.analyzed && col.rows() == s.pattern.rows() && col.nonZeros() == s.pattern.nonZeros();
    if (same_pattern) {
        const auto n = static_cast<std::size_t>(col.cols() + 1);
        const auto nnz = static_cast<std::size_t>(col.nonZeros());
        same_pattern = std::equal(col.outerIndexPtr(), col.outerIndexPtr() + n, s.pattern.outerIndexPtr())
            && std::equal(col.innerIndexPtr(), col.innerIndexPtr() + nnz, s.pattern.innerIndexPtr());
    }
    s.factored = std::move(col);
    if (!same_pattern) {
        s.lu.analyzePattern(s.factored);
        if (s.lu.info() != Eigen::Success) {
            s.analyzed = false;
            throw SolverError("ReusableLu: symbolic analysis failed");
        }
        s.pattern = s.factored;
        s.analyzed = true;
    }
    s.reused = same_pattern;
    s.lu.factorize(s.factored);
    if (s.lu.info() != Eigen::Success) {
        throw SolverError("ReusableLu: numerical factorization failed (singular matrix?)");
    }
    s.matrix = A;
}

Vector ReusableLu::solve(const Vector& b, double tol, LinearSolveReport* report) const
{
    const Impl& s = *impl_;
    if (!s.analyzed) {
        throw InvalidArgument("ReusableLu: solve before factorize");
    }
    require_square(s.matrix, b, "ReusableLu");
    Vector x = s.lu.solve(b);
    const double res = check_residual(s.matrix, x, b, tol, "ReusableLu");
    if (report) {
        *report = {0, res, s.reused};
    }
    return x;
}

Vector project_compatible(const SparseMatrix& M, const Vector& b)
{
    const Vector m = M * Vector::Ones(M.cols());
    return b - m * (b.sum() / m.sum());
}

MeanConstrainedSolver::MeanConstrainedSolver(const SparseMatrix& K, const SparseMatrix& M)
    : stiffness_(K), mass_row_(M * Vector::Ones(M.cols()))
{
    const Eigen::Index n = K.rows();
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(static_cast<std::size_t>(K.nonZeros() + 2 * n));
    for (Eigen::Index r = 0; r < K.outerSize(); ++r) {
        for (SparseMatrix::InnerIterator it(K, r); it; ++it) {
            entries.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        entries.emplace_back(static_cast<int>(i), static_cast<int>(n), mass_row_[i]);
        entries.emplace_back(static_cast<int>(n), static_cast<int>(i), mass_row_[i]);
    }
    SparseMatrix bordered(n + 1, n + 1);
    bordered.setFromTriplets(entries.begin(), entries.end());
    bordered_ = std::make_unique<LuSolver>(std::move(bordered));
}

Vector MeanConstrainedSolver::solve(const Vector& b, double mean_target, double tol) const
{
    const Eigen::Index n = stiffness_.rows();
    if (b.size() != n) {
        throw InvalidArgument("MeanConstrainedSolver: dimension mismatch");
    }
    const double defect = b.sum();
    if (std::abs(defect) > tol * std::max(1.0, b.lpNorm<1>())) {
        throw CompatibilityError("solve_singular_meanzero: right-hand side has nonzero sum "
                                 + std::to_string(defect));
    }
    Vector rhs(n + 1);
    rhs.head(n) = b;
    rhs[n] = mean_target;
    const Vector sol = bordered_->solve(rhs, tol);
    Vector x = sol.head(n);
    // The multiplier absorbs the admissible defect; the solve itself must satisfy K x = b.
    check_residual(stiffness_, x, b - mass_row_ * sol[n], tol, "solve_singular_meanzero");
    return x;
}

Vector solve_singular_meanzero(const SparseMatrix& K, const SparseMatrix& M, const Vector& b, double mean_target,
                               double tol)
{
    return MeanConstrainedSolver(K, M).solve(b, mean_target, tol);
}

} // namespace chsplit
