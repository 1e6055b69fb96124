#include "chsplit/expression.hpp"

#include "chsplit/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace chsplit {

Jet3 Jet3::variable_x(double x0)
{
    Jet3 j(x0);
    j.coeff(1, 0) = 1.0;
    return j;
}

Jet3 Jet3::variable_y(double y0)
{
    Jet3 j(y0);
    j.coeff(0, 1) = 1.0;
    return j;
}

double Jet3::derivative(int i, int j) const noexcept
{
    static constexpr double fact[] = {1.0, 1.0, 2.0, 6.0};
    return coeff(i, j) * fact[i] * fact[j];
}

Jet3& Jet3::operator+=(const Jet3& o)
{
    for (int k = 0; k < size; ++k) {
        c_[k] += o.c_[k];
    }
    return *this;
}

Jet3& Jet3::operator-=(const Jet3& o)
{
    for (int k = 0; k < size; ++k) {
        c_[k] -= o.c_[k];
    }
    return *this;
}

Jet3& Jet3::operator*=(double s)
{
    for (double& v : c_) {
        v *= s;
    }
    return *this;
}

Jet3 operator*(const Jet3& a, const Jet3& b)
{
    Jet3 r;
    for (int d = 0; d <= Jet3::order; ++d) {
        for (int j = 0; j <= d; ++j) {
            const int i = d - j;
            double s = 0.0;
            for (int i1 = 0; i1 <= i; ++i1) {
                for (int j1 = 0; j1 <= j; ++j1) {
                    s += a.coeff(i1, j1) * b.coeff(i - i1, j - j1);
                }
            }
            r.coeff(i, j) = s;
        }
    }
    return r;
}

Jet3 Jet3::compose(const Jet3& a, double f0, double f1, double f2, double f3)
{
    Jet3 p = a;
    p.c_[0] = 0.0;
    const Jet3 p2 = p * p;
    const Jet3 p3 = p2 * p;
    Jet3 r(f0);
    Jet3 t = p;
    t *= f1;
    r += t;
    t = p2;
    t *= f2 / 2.0;
    r += t;
    t = p3;
    t *= f3 / 6.0;
    r += t;
    return r;
}

Jet3 operator/(const Jet3& a, const Jet3& b)
{
    const double v = b.value();
    const Jet3 inv = Jet3::compose(b, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v), -6.0 / (v * v * v * v));
    return a * inv;
}

Jet3 sin(const Jet3& a)
{
    const double s = std::sin(a.value());
    const double c = std::cos(a.value());
    return Jet3::compose(a, s, c, -s, -c);
}

Jet3 cos(const Jet3& a)
{
    const double s = std::sin(a.value());
    const double c = std::cos(a.value());
    return Jet3::compose(a, c, -s, -c, s);
}

Jet3 tan(const Jet3& a) { return sin(a) / cos(a); }

Jet3 exp(const Jet3& a)
{
    const double e = std::exp(a.value());
    return Jet3::compose(a, e, e, e, e);
}

Jet3 log(const Jet3& a)
{
    const double v = a.value();
    return Jet3::compose(a, std::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}

Jet3 sqrt(const Jet3& a) { return pow(a, 0.5); }

Jet3 tanh(const Jet3& a)
{
    const double t = std::tanh(a.value());
    const double d1 = 1.0 - t * t;
    const double d2 = -2.0 * t * d1;
    const double d3 = -2.0 * d1 * d1 + 4.0 * t * t * d1;
    return Jet3::compose(a, t, d1, d2, d3);
}

Jet3 sinh(const Jet3& a)
{
    const double s = std::sinh(a.value());
    const double c = std::cosh(a.value());
    return Jet3::compose(a, s, c, s, c);
}

Jet3 cosh(const Jet3& a)
{
    const double s = std::sinh(a.value());
    const double c = std::cosh(a.value());
    return Jet3::compose(a, c, s, c, s);
}

Jet3 atan(const Jet3& a)
{
    const double v = a.value();
    const double q = 1.0 + v * v;
    return Jet3::compose(a, std::atan(v), 1.0 / q, -2.0 * v / (q * q), (6.0 * v * v - 2.0) / (q * q * q));
}

Jet3 pow(const Jet3& a, double p)
{
    if (p == std::floor(p) && std::abs(p) <= 16.0) {
        // Integer powers by repeated multiplication stay valid for a.value() <= 0.
        Jet3 r(1.0);
        const int n = static_cast<int>(std::abs(p));
        for (int k = 0; k < n; ++k) {
            r = r * a;
        }
        return p < 0 ? Jet3(1.0) / r : r;
    }
    const double v = a.value();
    const double f0 = std::pow(v, p);
    return Jet3::compose(a, f0, p * std::pow(v, p - 1.0), p * (p - 1.0) * std::pow(v, p - 2.0),
                         p * (p - 1.0) * (p - 2.0) * std::pow(v, p - 3.0));
}

Jet3 pow(const Jet3& a, const Jet3& b)
{
    bool constant_exponent = true;
    for (int d = 1; d <= Jet3::order; ++d) {
        for (int j = 0; j <= d; ++j) {
            constant_exponent = constant_exponent && b.coeff(d - j, j) == 0.0;
        }
    }
    if (constant_exponent) {
        return pow(a, b.value());
    }
    return exp(b * log(a));
}

// ---------------------------------------------------------------------------

struct Expression::Node {
    enum class Kind { Number, X, Y, Add, Sub, Mul, Div, Pow, Neg, Call };
    Kind kind = Kind::Number;
    double number = 0.0;
    std::string function;
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse()
    {
        NodePtr n = expr();
        skip();
        if (pos_ != s_.size()) {
            error("unexpected character");
        }
        return n;
    }

private:
    [[noreturn]] void error(const std::string& what) const
    {
        throw ConfigError("expression '" + s_ + "': " + what + " at position " + std::to_string(pos_));
    }

    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static NodePtr make(Node::Kind k, std::vector<NodePtr> args = {})
    {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->args = std::move(args);
        return n;
    }

    NodePtr expr()
    {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = make(Node::Kind::Add, {lhs, term()});
            } else if (accept('-')) {
                lhs = make(Node::Kind::Sub, {lhs, term()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr term()
    {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = make(Node::Kind::Mul, {lhs, unary()});
            } else if (accept('/')) {
                lhs = make(Node::Kind::Div, {lhs, unary()});
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary()
    {
        if (accept('-')) {
            return make(Node::Kind::Neg, {unary()});
        }
        if (accept('+')) {
            return unary();
        }
        return power();
    }

    NodePtr power()
    {
        NodePtr base = primary();
        if (accept('^')) {
            return make(Node::Kind::Pow, {base, unary()});
        }
        return base;
    }

    NodePtr primary()
    {
        skip();
        if (pos_ >= s_.size()) {
            error("unexpected end of input");
        }
        const char c = s_[pos_];
        if (accept('(')) {
            NodePtr n = expr();
            if (!accept(')')) {
                error("expected ')'");
            }
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) {
                error("malformed number");
            }
            pos_ += static_cast<std::size_t>(end - begin);
            auto n = std::make_shared<Node>();
            n->number = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
                ++pos_;
            }
            const std::string name = s_.substr(start, pos_ - start);
            if (accept('(')) {
                std::vector<NodePtr> args{expr()};
                while (accept(',')) {
                    args.push_back(expr());
                }
                if (!accept(')')) {
                    error("expected ')' after arguments of " + name);
                }
                static const char* unary_functions[] = {"sin", "cos",  "tan",  "exp",  "log",
                                                        "sqrt", "tanh", "sinh", "cosh", "atan"};
                bool known = false;
                for (const char* f : unary_functions) {
                    known = known || name == f;
                }
                if (known && args.size() == 1) {
                    auto n = std::make_shared<Node>();
                    n->kind = Node::Kind::Call;
                    n->function = name;
                    n->args = std::move(args);
                    return n;
                }
                if (name == "pow" && args.size() == 2) {
                    return make(Node::Kind::Pow, std::move(args));
                }
                pos_ = start;
                error("unknown function '" + name + "' with " + std::to_string(args.size()) + " argument(s)");
            }
            if (name == "x") {
                return make(Node::Kind::X);
            }
            if (name == "y") {
                return make(Node::Kind::Y);
            }
            auto n = std::make_shared<Node>();
            if (name == "pi") {
                n->number = 3.14159265358979323846;
                return n;
            }
            if (name == "e") {
                n->number = 2.71828182845904523536;
                return n;
            }
            pos_ = start;
            error("unknown identifier '" + name + "'");
        }
        error(std::string("unexpected character '") + c + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

double call(const std::string& f, double a)
{
    if (f == "sin") return std::sin(a);
    if (f == "cos") return std::cos(a);
    if (f == "tan") return std::tan(a);
    if (f == "exp") return std::exp(a);
    if (f == "log") return std::log(a);
    if (f == "sqrt") return std::sqrt(a);
    if (f == "tanh") return std::tanh(a);
    if (f == "sinh") return std::sinh(a);
    if (f == "cosh") return std::cosh(a);
    return std::atan(a);
}

Jet3 call(const std::string& f, const Jet3& a)
{
    if (f == "sin") return sin(a);
    if (f == "cos") return cos(a);
    if (f == "tan") return tan(a);
    if (f == "exp") return exp(a);
    if (f == "log") return log(a);
    if (f == "sqrt") return sqrt(a);
    if (f == "tanh") return tanh(a);
    if (f == "sinh") return sinh(a);
    if (f == "cosh") return cosh(a);
    return atan(a);
}

double raise(double a, double b) { return std::pow(a, b); }
Jet3 raise(const Jet3& a, const Jet3& b) { return pow(a, b); }

template <class T>
T eval(const Node& n, const T& x, const T& y)
{
    switch (n.kind) {
    case Node::Kind::Number: return T(n.number);
    case Node::Kind::X: return x;
    case Node::Kind::Y: return y;
    case Node::Kind::Add: return eval(*n.args[0], x, y) + eval(*n.args[1], x, y);
    case Node::Kind::Sub: return eval(*n.args[0], x, y) - eval(*n.args[1], x, y);
    case Node::Kind::Mul: return eval(*n.args[0], x, y) * eval(*n.args[1], x, y);
    case Node::Kind::Div: return eval(*n.args[0], x, y) / eval(*n.args[1], x, y);
    case Node::Kind::Pow: return raise(eval(*n.args[0], x, y), eval(*n.args[1], x, y));
    case Node::Kind::Neg: return -eval(*n.args[0], x, y);
    case Node::Kind::Call: return call(n.function, eval(*n.args[0], x, y));
    }
    return T(0.0);
}

} // namespace

Expression::Expression(const std::string& source) : source_(source), root_(Parser(source_).parse()) {}

double Expression::operator()(double x, double y) const { return eval<double>(*root_, x, y); }

Jet3 Expression::jet(double x, double y) const
{
    return eval<Jet3>(*root_, Jet3::variable_x(x), Jet3::variable_y(y));
}

} // namespace chsplit
