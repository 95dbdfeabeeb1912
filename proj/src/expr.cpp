#include "pcv/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace pcv {

namespace {

ExprPtr make_number(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::number;
    e->number = v;
    return e;
}

ExprPtr make_variable(int axis) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::variable;
    e->axis = axis;
    return e;
}

bool is_number(const ExprPtr& e, double v) {
    return e->kind == Expr::Kind::number && e->number == v;
}

ExprPtr make_binary(Expr::Kind k, ExprPtr a, ExprPtr b) {
    // constant folding keeps symbolic derivatives small
    if (k == Expr::Kind::add) {
        if (is_number(a, 0)) return b;
        if (is_number(b, 0)) return a;
    }
    if (k == Expr::Kind::sub && is_number(b, 0)) return a;
    if (k == Expr::Kind::mul) {
        if (is_number(a, 0) || is_number(b, 0)) return make_number(0);
        if (is_number(a, 1)) return b;
        if (is_number(b, 1)) return a;
    }
    if (k == Expr::Kind::div && is_number(a, 0)) return make_number(0);
    if (a->kind == Expr::Kind::number && b->kind == Expr::Kind::number) {
        switch (k) {
        case Expr::Kind::add: return make_number(a->number + b->number);
        case Expr::Kind::sub: return make_number(a->number - b->number);
        case Expr::Kind::mul: return make_number(a->number * b->number);
        default: break; // division kept symbolic: runtime guards apply
        }
    }
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->a = std::move(a);
    e->b = std::move(b);
    return e;
}

ExprPtr make_neg(ExprPtr a) {
    if (a->kind == Expr::Kind::number) return make_number(-a->number);
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::neg;
    e->a = std::move(a);
    return e;
}

ExprPtr make_powi(ExprPtr a, int n) {
    if (n == 1) return a;
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::powi;
    e->a = std::move(a);
    e->exponent = n;
    return e;
}

ExprPtr make_call(std::string f, ExprPtr a) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::call;
    e->func = std::move(f);
    e->a = std::move(a);
    return e;
}

class Parser {
  public:
    Parser(const std::string& src, unsigned vars) : src_(src), vars_(vars) {}

    ExprPtr run() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError(pos_, "an expression", src_);
        ExprPtr e = expr();
        skip_ws();
        if (pos_ < src_.size()) throw ParseError(pos_, "end of expression or an operator", src_);
        return e;
    }

  private:
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    ExprPtr expr() {
        ExprPtr e = term();
        while (true) {
            char c = peek();
            if (c == '+' || c == '-') {
                ++pos_;
                e = make_binary(c == '+' ? Expr::Kind::add : Expr::Kind::sub, e, term());
            } else {
                return e;
            }
        }
    }

    ExprPtr term() {
        ExprPtr e = factor();
        while (true) {
            char c = peek();
            if (c == '*' || c == '/') {
                ++pos_;
                e = make_binary(c == '*' ? Expr::Kind::mul : Expr::Kind::div, e, factor());
            } else {
                return e;
            }
        }
    }

    ExprPtr factor() {
        if (peek() == '-') {
            ++pos_;
            return make_neg(factor());
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = atom();
        if (peek() == '^') {
            ++pos_;
            return make_powi(base, integer_exponent());
        }
        return base;
    }

    int integer_exponent() {
        skip_ws();
        std::size_t start = pos_;
        bool neg = false;
        if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
            neg = src_[pos_] == '-';
            ++pos_;
        }
        std::size_t digits = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ == digits) throw ParseError(start, "an integer exponent", src_);
        if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E'))
            throw ParseError(pos_, "an integer exponent (no fractional powers)", src_);
        int v = std::atoi(src_.substr(digits, pos_ - digits).c_str());
        return neg ? -v : v;
    }

    ExprPtr atom() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError(pos_, "a number, variable, function or '('", src_);
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = expr();
            if (peek() != ')') throw ParseError(pos_, "')'", src_);
            ++pos_;
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(pos_, "a number, variable, function or '('", src_);
    }

    ExprPtr number() {
        std::size_t start = pos_;
        const char* begin = src_.c_str() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError(start, "a number", src_);
        pos_ += static_cast<std::size_t>(end - begin);
        if (!std::isfinite(v)) throw ParseError(start, "a finite number", src_);
        return make_number(v);
    }

    ExprPtr identifier() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        std::string name = src_.substr(start, pos_ - start);
        if (name == "sqrt" || name == "exp" || name == "ln" || name == "sin" || name == "cos") {
            if (peek() != '(') throw ParseError(pos_, "'(' after function " + name, src_);
            ++pos_;
            ExprPtr arg = expr();
            if (peek() != ')') throw ParseError(pos_, "')'", src_);
            ++pos_;
            return make_call(name, arg);
        }
        int axis = name == "x" ? 0 : name == "y" ? 1 : name == "z" ? 2 : -1;
        if (axis < 0)
            throw ParseError(start, "a variable or one of sqrt, exp, ln, sin, cos", src_);
        if (!(vars_ & (1u << axis)))
            throw ParseError(start, "a function of z only (variable '" + name + "' not allowed)",
                             src_);
        return make_variable(axis);
    }

    const std::string& src_;
    unsigned vars_;
    std::size_t pos_ = 0;
};

} // namespace

ExprPtr parse_expression(const std::string& source, unsigned allowed_vars) {
    return Parser(source, allowed_vars).run();
}

FunctionSpec parse_scalar_function(const std::string& source) {
    if (source.empty()) throw ParseError(0, "a nonempty expression", source);
    return FunctionSpec{source, parse_expression(source, kVarsZ)};
}

ExprPtr differentiate(const ExprPtr& e, int axis) {
    using K = Expr::Kind;
    switch (e->kind) {
    case K::number: return make_number(0);
    case K::variable: return make_number(e->axis == axis ? 1 : 0);
    case K::neg: return make_neg(differentiate(e->a, axis));
    case K::add: return make_binary(K::add, differentiate(e->a, axis), differentiate(e->b, axis));
    case K::sub: return make_binary(K::sub, differentiate(e->a, axis), differentiate(e->b, axis));
    case K::mul:
        return make_binary(K::add, make_binary(K::mul, differentiate(e->a, axis), e->b),
                           make_binary(K::mul, e->a, differentiate(e->b, axis)));
    case K::div:
        // (a'b - ab') / b^2
        return make_binary(
            K::div,
            make_binary(K::sub, make_binary(K::mul, differentiate(e->a, axis), e->b),
                        make_binary(K::mul, e->a, differentiate(e->b, axis))),
            make_powi(e->b, 2));
    case K::powi:
        // n a^(n-1) a'
        return make_binary(K::mul, make_number(e->exponent),
                           make_binary(K::mul, make_powi(e->a, e->exponent - 1),
                                       differentiate(e->a, axis)));
    case K::call: {
        ExprPtr da = differentiate(e->a, axis);
        if (e->func == "sqrt")
            return make_binary(K::div, da,
                               make_binary(K::mul, make_number(2), make_call("sqrt", e->a)));
        if (e->func == "exp") return make_binary(K::mul, da, make_call("exp", e->a));
        if (e->func == "ln") return make_binary(K::div, da, e->a);
        if (e->func == "sin") return make_binary(K::mul, da, make_call("cos", e->a));
        // cos
        return make_neg(make_binary(K::mul, da, make_call("sin", e->a)));
    }
    }
    return make_number(0);
}

double eval_expr(const ExprPtr& e, double x, double y, double z) {
    using K = Expr::Kind;
    switch (e->kind) {
    case K::number: return e->number;
    case K::variable: return e->axis == 0 ? x : e->axis == 1 ? y : z;
    case K::neg: return -eval_expr(e->a, x, y, z);
    case K::add: return eval_expr(e->a, x, y, z) + eval_expr(e->b, x, y, z);
    case K::sub: return eval_expr(e->a, x, y, z) - eval_expr(e->b, x, y, z);
    case K::mul: return eval_expr(e->a, x, y, z) * eval_expr(e->b, x, y, z);
    case K::div: {
        double d = eval_expr(e->b, x, y, z);
        if (std::abs(d) <= kDivisionEpsilon)
            throw DivisionNearZero("expression divides by value within epsilon of zero");
        return eval_expr(e->a, x, y, z) / d;
    }
    case K::powi: return std::pow(eval_expr(e->a, x, y, z), e->exponent);
    case K::call: {
        double v = eval_expr(e->a, x, y, z);
        if (e->func == "sqrt") {
            if (!(v > 0)) throw DomainError("sqrt of non-positive value in expression");
            return std::sqrt(v);
        }
        if (e->func == "exp") return std::exp(v);
        if (e->func == "ln") {
            if (!(v > 0)) throw DomainError("ln of non-positive value in expression");
            return std::log(v);
        }
        if (e->func == "sin") return std::sin(v);
        return std::cos(v);
    }
    }
    return 0;
}

Jet3 eval_expr(const ExprPtr& e, const Vec3J& vars) {
    using K = Expr::Kind;
    switch (e->kind) {
    case K::number: return Jet3::constant(e->number);
    case K::variable: return vars[e->axis];
    case K::neg: return -eval_expr(e->a, vars);
    case K::add: return eval_expr(e->a, vars) + eval_expr(e->b, vars);
    case K::sub: return eval_expr(e->a, vars) - eval_expr(e->b, vars);
    case K::mul: return eval_expr(e->a, vars) * eval_expr(e->b, vars);
    case K::div: return eval_expr(e->a, vars) / eval_expr(e->b, vars);
    case K::powi: return jet_powi(eval_expr(e->a, vars), e->exponent);
    case K::call: {
        Jet3 v = eval_expr(e->a, vars);
        if (e->func == "sqrt") return jet_sqrt(v);
        if (e->func == "exp") return jet_exp(v);
        if (e->func == "ln") return jet_log(v);
        if (e->func == "sin") return jet_sin(v);
        return jet_cos(v);
    }
    }
    return Jet3::constant(0.0);
}

} // namespace pcv
