#pragma once

#include "chsplit/fem.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <random>
#include <string>

namespace chsplit::testing {

inline Field random_field(std::shared_ptr<const FeSpace> space, unsigned seed, double scale = 1.0)
{
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(-scale, scale);
    Vector c(space->num_dofs());
    for (int i = 0; i < c.size(); ++i) {
        c[i] = u(gen);
    }
    return Field(std::move(space), std::move(c));
}

/// Gaussian elimination with partial pivoting on a dense copy.
inline Eigen::VectorXd dense_gauss_solve(Eigen::MatrixXd A, Eigen::VectorXd b)
{
    const int n = static_cast<int>(A.rows());
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i) {
            if (std::abs(A(i, k)) > std::abs(A(p, k))) {
                p = i;
            }
        }
        A.row(k).swap(A.row(p));
        std::swap(b[k], b[p]);
        for (int i = k + 1; i < n; ++i) {
            const double f = A(i, k) / A(k, k);
            A.row(i).tail(n - k) -= f * A.row(k).tail(n - k);
            b[i] -= f * b[k];
        }
    }
    Eigen::VectorXd x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) {
            s -= A(i, j) * x[j];
        }
        x[i] = s / A(i, i);
    }
    return x;
}

inline std::filesystem::path scratch_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("chsplit_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace chsplit::testing
