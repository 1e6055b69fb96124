#pragma once

#include <array>
#include <vector>

namespace chsplit {

/// Symmetric rule on a triangle. Points are barycentric, weights are fractions
/// of the triangle area (they sum to 1).
struct QuadratureRule {
    int degree = 0;
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;

    int size() const noexcept { return static_cast<int>(weights.size()); }
};

/// Smallest tabulated Dunavant rule exact for polynomials of total degree
/// `degree` (available: 1, 2, 4, 8). Throws InvalidArgument above 8.
QuadratureRule triangle_rule(int degree);

} // namespace chsplit
