#include "chsplit/errors.hpp"
#include "chsplit/fem.hpp"
#include "chsplit/sparse_linalg.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace chsplit;
using chsplit::testing::dense_gauss_solve;

namespace {

SparseMatrix random_sparse(int n, unsigned seed, bool symmetric_positive)
{
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j : {i - 3, i - 1, i + 1, i + 5}) {
            if (j >= 0 && j < n) {
                A(i, j) = u(gen);
            }
        }
    }
    if (symmetric_positive) {
        A = (A * A.transpose()).eval();
        A.diagonal().array() += 1.0;
    } else {
        A.diagonal().array() += 4.0;
    }
    return A.sparseView();
}

Vector random_vector(int n, unsigned seed)
{
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vector v(n);
    for (int i = 0; i < n; ++i) {
        v[i] = u(gen);
    }
    return v;
}

} // namespace

TEST(SparseLinalg, SpdSolversMatchDenseOracle)
{
    auto space = build_space(build_uniform(16), 1);
    SparseMatrix A = assemble_stiffness(*space);
    A += assemble_mass(*space);
    const Vector b = random_vector(static_cast<int>(A.rows()), 2);
    const Eigen::VectorXd oracle = dense_gauss_solve(Eigen::MatrixXd(A), b);
    auto [x_direct, rep_direct] = solve_spd(A, b);
    auto [x_cg, rep_cg] = solve_spd(A, b, 1e-12, SpdMethod::ConjugateGradient);
    EXPECT_LT((x_direct - oracle).norm(), 1e-10 * oracle.norm());
    EXPECT_LT((x_cg - oracle).norm(), 1e-9 * oracle.norm());
    EXPECT_EQ(rep_direct.iterations, 0);
    EXPECT_GT(rep_cg.iterations, 0);
    EXPECT_LE(rep_direct.residual_norm, 1e-10 * b.norm());
}

TEST(SparseLinalg, GeneralSolverMatchesDenseOracle)
{
    const SparseMatrix A = random_sparse(50, 3, false);
    const Vector b = random_vector(50, 4);
    const Eigen::VectorXd oracle = dense_gauss_solve(Eigen::MatrixXd(A), b);
    auto [x, rep] = solve_general(A, b);
    EXPECT_LT((x - oracle).norm(), 1e-11 * oracle.norm());
    LuSolver lu(A);
    EXPECT_LT((lu.solve(b) - oracle).norm(), 1e-11 * oracle.norm());
}

TEST(SparseLinalg, SingularSystemRejectsDimensionMismatch)
{
    const SparseMatrix A = random_sparse(10, 5, false);
    EXPECT_THROW(solve_general(A, Vector::Ones(9)), InvalidArgument);
}

TEST(SparseLinalg, ReusableLuReusesSymbolicFactorization)
{
    SparseMatrix A = random_sparse(30, 6, false);
    const Vector b = random_vector(30, 7);
    ReusableLu lu;
    lu.factorize(A);
    LinearSolveReport rep;
    const Vector x1 = lu.solve(b, 1e-10, &rep);
    EXPECT_FALSE(rep.factorization_reused);
    A *= 2.0;
    lu.factorize(A);
    const Vector x2 = lu.solve(b, 1e-10, &rep);
    EXPECT_TRUE(rep.factorization_reused);
    EXPECT_LT((x1 - 2.0 * x2).norm(), 1e-12 * x1.norm());
}

TEST(SparseLinalg, MeanConstrainedNeumannSolve)
{
    auto space = build_space(build_uniform(4), 1);
    const SparseMatrix K = assemble_stiffness(*space);
    const SparseMatrix M = assemble_mass(*space);
    const Vector ones = Vector::Ones(space->num_dofs());
    Vector b = project_compatible(M, random_vector(space->num_dofs(), 8));
    EXPECT_NEAR(b.sum(), 0.0, 1e-14);
    const Vector x = solve_singular_meanzero(K, M, b, 0.25);
    EXPECT_LT((K * x - b).norm(), 1e-10);
    EXPECT_NEAR(ones.dot(M * x), 0.25, 1e-12);

    // Adding the load of a constant does not change the projected load.
    const Vector shifted = project_compatible(M, b + M * ones);
    EXPECT_LT((shifted - b).norm(), 1e-13);

    Vector incompatible = b;
    incompatible[0] += 1.0;
    EXPECT_THROW(solve_singular_meanzero(K, M, incompatible, 0.0), CompatibilityError);

    MeanConstrainedSolver solver(K, M);
    EXPECT_LT((solver.solve(b, 0.25) - x).norm(), 1e-12);
}
