#ifndef PCV_EXPR_HPP
#define PCV_EXPR_HPP

#include <memory>
#include <string>

#include "pcv/fields.hpp"

namespace pcv {

/// Expression AST over the chart variables.  Grammar: number literals,
/// variables, binary + - * / ^ (integer exponents), unary -, functions
/// sqrt exp ln sin cos, parentheses, standard precedence.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { number, variable, neg, add, sub, mul, div, powi, call };
    Kind kind = Kind::number;
    double number = 0.0;
    int axis = 2; // variable: 0=x, 1=y, 2=z
    int exponent = 0;
    std::string func; // sqrt | exp | ln | sin | cos
    ExprPtr a, b;
};

/// Bitmask of variables an expression may use: bit 0 = x, 1 = y, 2 = z.
constexpr unsigned kVarsZ = 0b100;
constexpr unsigned kVarsXYZ = 0b111;

ExprPtr parse_expression(const std::string& source, unsigned allowed_vars);

/// Exact symbolic d/d(axis) with light constant folding.
ExprPtr differentiate(const ExprPtr& e, int axis);

double eval_expr(const ExprPtr& e, double x, double y, double z);
Jet3 eval_expr(const ExprPtr& e, const Vec3J& vars);

/// A user-supplied scalar function of z.
struct FunctionSpec {
    std::string source;
    ExprPtr ast;

    double operator()(double z) const { return eval_expr(ast, 0.0, 0.0, z); }
    /// Evaluate on a z-jet (the x and y slots of the jet are unused).
    Jet3 eval_jet(const Jet3& zjet) const {
        return eval_expr(ast, {Jet3::constant(0.0), Jet3::constant(0.0), zjet});
    }
    FunctionSpec derivative() const {
        return FunctionSpec{"d/dz(" + source + ")", differentiate(ast, 2)};
    }
};

FunctionSpec parse_scalar_function(const std::string& source);

} // namespace pcv

#endif
