#include <doctest.h>

#include <cmath>

#include "pcv/expr.hpp"
#include "pcv/finite_diff.hpp"

using namespace pcv;

TEST_CASE("identity and polynomial specs") {
    FunctionSpec id = parse_scalar_function("z");
    CHECK(id(2.5) == 2.5);
    Jet3 j = id.eval_jet(Jet3::variable(2.5, 2));
    CHECK(j.d1(2) == 1.0);

    FunctionSpec q = parse_scalar_function("z^2 - 1");
    Jet3 jq = q.eval_jet(Jet3::variable(3.0, 2));
    CHECK(jq.value() == doctest::Approx(8.0));
    CHECK(jq.d1(2) == doctest::Approx(6.0));
}

TEST_CASE("composite against finite differences") {
    FunctionSpec f = parse_scalar_function("sqrt(1+z^2)/z");
    Jet3 j = f.eval_jet(Jet3::variable(2.0, 2));
    CHECK(j.value() == doctest::Approx(std::sqrt(5.0) / 2.0).epsilon(1e-14));
    auto fd = finite_difference_oracle(
        [&](const ChartPoint& p) { return f(p.z); }, {0, 0, 2.0}, 1e-5);
    CHECK(j.d1(2) == doctest::Approx(fd.gradient[2]).epsilon(1e-6));
}

TEST_CASE("precedence and unary minus") {
    FunctionSpec f = parse_scalar_function("2+3*4^2");
    CHECK(f(1.0) == doctest::Approx(50.0));
    CHECK(parse_scalar_function("-z^2")(3.0) == doctest::Approx(-9.0));
    CHECK(parse_scalar_function("(2+3)*z")(2.0) == doctest::Approx(10.0));
    CHECK(parse_scalar_function("2 - 3 - 4")(0.0) == doctest::Approx(-5.0));
    CHECK(parse_scalar_function("12/3/2")(0.0) == doctest::Approx(2.0));
    CHECK(parse_scalar_function("z^-2")(2.0) == doctest::Approx(0.25));
}

TEST_CASE("parse errors carry positions") {
    auto expect_error = [](const std::string& src, std::size_t pos) {
        try {
            parse_scalar_function(src);
            FAIL("expected ParseError for: " << src);
        } catch (const ParseError& e) {
            CHECK(e.position == pos);
        }
    };
    expect_error("", 0);
    expect_error("z +", 3);
    expect_error("(z", 2);
    expect_error("z $", 2);
    expect_error("w + 1", 0);   // unknown identifier
    expect_error("x + 1", 0);   // x not allowed in z-only functions
    expect_error("z^2.5", 3);   // fractional exponent
    expect_error("sqrt(,)", 5);
    expect_error("sqrt 2", 5);  // function requires parenthesis
    expect_error("1 + * 2", 4);
}

TEST_CASE("custom components may use x and y") {
    ExprPtr e = parse_expression("x*y - 2*z", kVarsXYZ);
    CHECK(eval_expr(e, 3.0, 4.0, 1.0) == doctest::Approx(10.0));
    CHECK_THROWS_AS(parse_expression("x", kVarsZ), ParseError);
}

TEST_CASE("symbolic derivative matches finite differences") {
    const char* sources[] = {"z",
                             "z^2 - 1",
                             "sqrt(1+z^2)/z",
                             "exp(-z)*sin(3*z)",
                             "ln(2+z)/(1+z^2)",
                             "cos(z)^3 - 2*z^-1"};
    for (const char* src : sources) {
        FunctionSpec f = parse_scalar_function(src);
        FunctionSpec df = f.derivative();
        for (double z : {0.7, 1.3, 2.9}) {
            auto fd = finite_difference_oracle(
                [&](const ChartPoint& p) { return f(p.z); }, {0, 0, z}, 1e-6);
            CHECK(df(z) == doctest::Approx(fd.gradient[2]).epsilon(1e-7));
        }
    }
}

TEST_CASE("expression evaluation errors are explicit") {
    FunctionSpec f = parse_scalar_function("1/z");
    CHECK_THROWS_AS(f(0.0), DivisionNearZero);
    FunctionSpec g = parse_scalar_function("sqrt(z)");
    CHECK_THROWS_AS(g(-1.0), DomainError);
    FunctionSpec h = parse_scalar_function("ln(z)");
    CHECK_THROWS_AS(h(0.0), DomainError);
    CHECK_THROWS_AS(g.eval_jet(Jet3::variable(-1.0, 2)), DomainError);
}
