#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <memory>
#include <utility>

namespace chsplit {

using Vector = Eigen::VectorXd;
/// Compressed row storage.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct LinearSolveReport {
    int iterations = 0;          ///< 0 for direct solves
    double residual_norm = 0.0;  ///< ||A x - b||_2
    bool factorization_reused = false;
};

enum class SpdMethod { Direct, ConjugateGradient };

inline constexpr double default_linear_tol = 1e-10;

/// Solve A x = b for symmetric positive definite A.
/// Postcondition: ||A x - b|| <= tol * max(1, ||b||), else SolverError.
std::pair<Vector, LinearSolveReport> solve_spd(const SparseMatrix& A, const Vector& b,
                                                double tol = default_linear_tol,
                                                SpdMethod method = SpdMethod::Direct);

/// Solve A x = b for square nonsingular A via sparse LU.
std::pair<Vector, LinearSolveReport> solve_general(const SparseMatrix& A, const Vector& b,
                                                    double tol = default_linear_tol);

/// Solve K x = b subject to <x, 1> = mean_target, where K is positive semidefinite
/// with the constants as null space and M is the mass matrix defining <., .>.
/// Requires sum(b) = 0 (within tol); throws CompatibilityError otherwise.
Vector solve_singular_meanzero(const SparseMatrix& K, const SparseMatrix& M, const Vector& b,
                               double mean_target, double tol = default_linear_tol);

/// Remove the component of a load vector b along M*1, so that sum(Pb) = 0.
/// Adding the load of a constant function to b leaves Pb unchanged.
Vector project_compatible(const SparseMatrix& M, const Vector& b);

/// Cached sparse Cholesky factorization of an SPD matrix.
class CholeskySolver {
public:
    explicit CholeskySolver(SparseMatrix A);
    Vector solve(const Vector& b, double tol = default_linear_tol, LinearSolveReport* report = nullptr) const;

private:
    SparseMatrix matrix_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor_;
};

/// Cached sparse LU factorization of a general square matrix.
class LuSolver {
public:
    explicit LuSolver(SparseMatrix A);
    Vector solve(const Vector& b, double tol = default_linear_tol, LinearSolveReport* report = nullptr) const;

private:
    SparseMatrix matrix_;
    std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>> factor_;
};

/// Sparse LU (UMFPACK) whose symbolic analysis is kept across
/// refactorizations of matrices with an identical sparsity pattern.
class ReusableLu {
public:
    ReusableLu();
    ~ReusableLu();
    ReusableLu(ReusableLu&&) noexcept;
    ReusableLu& operator=(ReusableLu&&) noexcept;

    void factorize(const SparseMatrix& A);
    Vector solve(const Vector& b, double tol = default_linear_tol, LinearSolveReport* report = nullptr) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Bordered factorization [K m; m^T 0] for repeated mean-constrained solves.
class MeanConstrainedSolver {
public:
    MeanConstrainedSolver(const SparseMatrix& K, const SparseMatrix& M);
    Vector solve(const Vector& b, double mean_target, double tol = default_linear_tol) const;
    const Vector& mass_row() const noexcept { return mass_row_; }

private:
    SparseMatrix stiffness_;
    Vector mass_row_;
    std::unique_ptr<LuSolver> bordered_;
};

} // namespace chsplit
