#pragma once

#include "chsplit/fem.hpp"

#include <optional>
#include <string>

namespace chsplit {

/// Analytic initial phase field. Derivative callbacks may be empty; the
/// initialization modes that need them report a configuration error.
struct InitialCondition {
    std::string name;
    PointFunction value;
    GradientFunction gradient;
    PointFunction laplacian;
    GradientFunction laplacian_gradient;
    /// Integral over the unit square, when known in closed form.
    std::optional<double> mean;
};

/// 0.5 (1 - cos 4 pi x)(1 - cos 2 pi y) - 1, with closed-form derivatives; mean -1/2.
InitialCondition paper_initial_condition();

InitialCondition constant_initial_condition(double c);

/// Parsed expression in x and y; derivatives come from Taylor jets.
InitialCondition expression_initial_condition(const std::string& source);

/// Integral of f over the unit square using the degree-8 rule on `mesh`
/// refined twice. Used when no closed-form mean is available.
double fine_quadrature_integral(const Mesh& mesh, const PointFunction& f);

} // namespace chsplit
