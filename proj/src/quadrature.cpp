#include "chsplit/quadrature.hpp"

#include "chsplit/errors.hpp"

#include <string>

namespace chsplit {

namespace {

void add_centroid(QuadratureRule& rule, double w)
{
    rule.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    rule.weights.push_back(w);
}

// Orbit of (a, a, 1-2a).
void add_orbit3(QuadratureRule& rule, double a, double w)
{
    const double c = 1.0 - 2.0 * a;
    rule.points.push_back({a, a, c});
    rule.points.push_back({c, a, a});
    rule.points.push_back({a, c, a});
    for (int k = 0; k < 3; ++k) {
        rule.weights.push_back(w);
    }
}

// Orbit of (a, b, 1-a-b), all six permutations.
void add_orbit6(QuadratureRule& rule, double a, double b, double w)
{
    const double c = 1.0 - a - b;
    rule.points.push_back({a, b, c});
    rule.points.push_back({a, c, b});
    rule.points.push_back({b, a, c});
    rule.points.push_back({b, c, a});
    rule.points.push_back({c, a, b});
    rule.points.push_back({c, b, a});
    for (int k = 0; k < 6; ++k) {
        rule.weights.push_back(w);
    }
}

} // namespace

QuadratureRule triangle_rule(int degree)
{
    QuadratureRule rule;
    if (degree < 0) {
        throw InvalidArgument("triangle_rule: negative degree");
    }
    if (degree <= 1) {
        rule.degree = 1;
        add_centroid(rule, 1.0);
    } else if (degree == 2) {
        rule.degree = 2;
        add_orbit3(rule, 1.0 / 6.0, 1.0 / 3.0);
    } else if (degree <= 4) {
        rule.degree = 4;
        add_orbit3(rule, 0.44594849091596488631832925388305, 0.22338158967801146569500700843312);
        add_orbit3(rule, 0.09157621350977074345957146340220, 0.10995174365532186763832632490021);
    } else if (degree <= 8) {
        rule.degree = 8;
        add_centroid(rule, 0.14431560767778716825109111048906);
        add_orbit3(rule, 0.17056930775176020662229350149146, 0.10321737053471825028179155029212);
        add_orbit3(rule, 0.05054722831703097545842355059660, 0.03245849762319808031092592834178);
        add_orbit3(rule, 0.45929258829272315602881551449417, 0.09509163426728462479389610438858);
        add_orbit6(rule, 0.26311282963463811342178578628464, 0.72849239295540428124100037917606,
                   0.02723031417443499426484469007390);
    } else {
        throw InvalidArgument("triangle_rule: no tabulated rule of degree " + std::to_string(degree));
    }
    return rule;
}

} // namespace chsplit
