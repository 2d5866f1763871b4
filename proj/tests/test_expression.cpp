#include <doctest.h>

#include <cmath>

#include "aporbit/error.hpp"
#include "aporbit/expression.hpp"
#include "aporbit/rng.hpp"

using namespace aporbit;
using Op = Expr::Op;

TEST_CASE("parse builds the expected trees") {
    CHECK(parse_expression("0.9*cos(3*x1)", 1) ==
          Expr::binary(Op::Mul, Expr::number(0.9),
                       Expr::unary(Op::Cos, Expr::binary(Op::Mul, Expr::number(3), Expr::variable(1)))));
    CHECK(parse_expression("x1 - x2*x2", 2) ==
          Expr::binary(Op::Sub, Expr::variable(1),
                       Expr::binary(Op::Mul, Expr::variable(2), Expr::variable(2))));
    CHECK(parse_expression("1 - 2 - 3", 1) ==
          Expr::binary(Op::Sub, Expr::binary(Op::Sub, Expr::number(1), Expr::number(2)), Expr::number(3)));
    CHECK(parse_expression("-x1*2", 1) ==
          Expr::binary(Op::Mul, Expr::unary(Op::Neg, Expr::variable(1)), Expr::number(2)));
    CHECK(parse_expression("max(x1, 1e-3)", 1) ==
          Expr::binary(Op::Max, Expr::variable(1), Expr::number(1e-3)));
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_expression("x3", 2), UnknownIdentifier);
    CHECK_THROWS_AS(parse_expression("foo(x1)", 1), UnknownIdentifier);
    CHECK_THROWS_AS(parse_expression("sin(x1, x1)", 1), ArityError);
    CHECK_THROWS_AS(parse_expression("min(x1)", 1), ArityError);
    CHECK_THROWS_AS(parse_expression("", 1), SyntaxError);
    CHECK_THROWS_AS(parse_expression("(x1", 1), SyntaxError);
    CHECK_THROWS_AS(parse_expression("x1 +", 1), SyntaxError);
    try {
        parse_expression("x1 ) 2", 1);
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.position() == 3);
    }
}

TEST_CASE("evaluation") {
    const double x[] = {0.5, -0.25};
    CHECK(evaluate(parse_expression("x1 - x2*x2", 2), x) == 0.5 - 0.0625);
    CHECK(evaluate(parse_expression("abs(x2) + min(x1, x2) + max(x1, x2)", 2), x) == 0.25 + 0.25);
    CHECK(evaluate(parse_expression("tanh(x1)", 1), x) == std::tanh(0.5));
    CHECK_THROWS_AS(evaluate(parse_expression("1/(x1 - 0.5)", 1), x), EvaluationError);
    CHECK(max_variable(parse_expression("x1 + sin(x2)", 2)) == 2);
}

namespace {

Expr random_expr(Rng& rng, int depth, int dim) {
    if (depth == 0 || rng.below(4) == 0) {
        if (rng.below(2) == 0) return Expr::variable(1 + static_cast<int>(rng.below(dim)));
        // Non-negative literals: the parser produces negation as a separate node.
        return Expr::number(rng.uniform(0.0, 10.0) * std::pow(10.0, static_cast<int>(rng.below(9)) - 4));
    }
    static constexpr Op unary_ops[] = {Op::Neg, Op::Sin, Op::Cos, Op::Tanh, Op::Abs};
    static constexpr Op binary_ops[] = {Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Min, Op::Max};
    if (rng.below(3) == 0) return Expr::unary(unary_ops[rng.below(5)], random_expr(rng, depth - 1, dim));
    return Expr::binary(binary_ops[rng.below(6)], random_expr(rng, depth - 1, dim),
                        random_expr(rng, depth - 1, dim));
}

}  // namespace

TEST_CASE("print then parse is the identity on 50 expressions") {
    const std::vector<std::string> handwritten = {
        "0.9*cos(3*x1)", "x1 - x2*x2", "1 - (2 - 3)", "(1 - 2) - 3", "x1/(x2/x3)",
        "--x1", "-(x1 + x2)", "-x1*-x2", "sin(-x1)", "min(max(x1, x2), 0.5)",
        "1e-300 + x1", "0.1 + 0.2", "x1*(x2 + x3)*x1", "abs(x1 - x2)/2", "tanh(x1)*0.99",
    };
    for (const auto& src : handwritten) {
        const Expr e = parse_expression(src, 3);
        const std::string printed = to_string(e);
        CAPTURE(src);
        CAPTURE(printed);
        CHECK(parse_expression(printed, 3) == e);
    }
    Rng rng(2024);
    for (int i = 0; i < 35; ++i) {
        const Expr e = random_expr(rng, 5, 3);
        const std::string printed = to_string(e);
        CAPTURE(printed);
        CHECK(parse_expression(printed, 3) == e);
    }
}
