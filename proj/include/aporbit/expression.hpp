#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aporbit {

/// Parse tree of the map expression language: variables x1..xd, real
/// literals, + - * /, unary minus, sin cos tanh abs (one argument) and
/// min max (two arguments).
struct Expr {
    enum class Op { Number, Var, Neg, Add, Sub, Mul, Div, Sin, Cos, Tanh, Abs, Min, Max };

    Op op = Op::Number;
    double value = 0.0;  // Number
    int var = 0;         // Var, 1-based
    std::vector<Expr> args;

    static Expr number(double v);
    static Expr variable(int index);
    static Expr unary(Op op, Expr a);
    static Expr binary(Op op, Expr a, Expr b);

    bool operator==(const Expr&) const = default;
};

/// Recursive-descent parser. Precedence: unary minus > * / > + -, all
/// binary operators left-associative. Throws SyntaxError (with byte
/// position), UnknownIdentifier, ArityError.
Expr parse_expression(std::string_view source, int dim);

/// Prints with the minimal parentheses needed for parse(print(e)) == e.
/// Literals use 17 significant digits.
std::string to_string(const Expr& e);

/// Throws EvaluationError when a denominator has magnitude below 1e-300.
double evaluate(const Expr& e, std::span<const double> x);

/// Highest variable index referenced (0 for none).
int max_variable(const Expr& e);

}  // namespace aporbit
