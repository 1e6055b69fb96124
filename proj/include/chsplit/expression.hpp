#pragma once

#include <array>
#include <memory>
#include <string>

namespace chsplit {

/// Truncated bivariate Taylor polynomial: all coefficients of dx^i dy^j with
/// i + j <= 3. Arithmetic on jets propagates exact derivatives up to third order.
class Jet3 {
public:
    static constexpr int order = 3;
    static constexpr int size = 10;

    Jet3() = default;
    explicit Jet3(double constant) { c_[0] = constant; }
    static Jet3 variable_x(double x0);
    static Jet3 variable_y(double y0);

    double value() const noexcept { return c_[0]; }
    /// Taylor coefficient of dx^i dy^j.
    double coeff(int i, int j) const noexcept { return c_[index(i, j)]; }
    double& coeff(int i, int j) noexcept { return c_[index(i, j)]; }

    /// Partial derivative d^(i+j) / dx^i dy^j.
    double derivative(int i, int j) const noexcept;

    Jet3& operator+=(const Jet3& o);
    Jet3& operator-=(const Jet3& o);
    Jet3& operator*=(double s);

    friend Jet3 operator+(Jet3 a, const Jet3& b) { return a += b; }
    friend Jet3 operator-(Jet3 a, const Jet3& b) { return a -= b; }
    friend Jet3 operator-(Jet3 a) { return a *= -1.0; }
    friend Jet3 operator*(const Jet3& a, const Jet3& b);
    friend Jet3 operator/(const Jet3& a, const Jet3& b);

    /// f(a) given f and its first three derivatives at a.value().
    static Jet3 compose(const Jet3& a, double f0, double f1, double f2, double f3);

private:
    static constexpr int index(int i, int j) noexcept
    {
        const int d = i + j;
        return d * (d + 1) / 2 + j;
    }
    std::array<double, size> c_{};
};

Jet3 sin(const Jet3& a);
Jet3 cos(const Jet3& a);
Jet3 tan(const Jet3& a);
Jet3 exp(const Jet3& a);
Jet3 log(const Jet3& a);
Jet3 sqrt(const Jet3& a);
Jet3 tanh(const Jet3& a);
Jet3 sinh(const Jet3& a);
Jet3 cosh(const Jet3& a);
Jet3 atan(const Jet3& a);
Jet3 pow(const Jet3& a, double p);
Jet3 pow(const Jet3& a, const Jet3& b);

/// Parsed scalar expression in x and y.
///
/// Grammar: + - * / ^ (right associative), unary minus, parentheses, numbers,
/// the constants pi and e, and the functions sin cos tan exp log sqrt tanh
/// sinh cosh atan pow(a, b).
class Expression {
public:
    /// Throws ConfigError with the offending position on a syntax error.
    explicit Expression(const std::string& source);

    const std::string& source() const noexcept { return source_; }
    double operator()(double x, double y) const;
    Jet3 jet(double x, double y) const;

    struct Node;

private:
    std::string source_;
    std::shared_ptr<const Node> root_;
};

} // namespace chsplit
