#include "aporbit/expression.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "aporbit/error.hpp"

namespace aporbit {

Expr Expr::number(double v) {
    Expr e;
    e.op = Op::Number;
    e.value = v;
    return e;
}

Expr Expr::variable(int index) {
    Expr e;
    e.op = Op::Var;
    e.var = index;
    return e;
}

Expr Expr::unary(Op op, Expr a) {
    Expr e;
    e.op = op;
    e.args.push_back(std::move(a));
    return e;
}

Expr Expr::binary(Op op, Expr a, Expr b) {
    Expr e;
    e.op = op;
    e.args.push_back(std::move(a));
    e.args.push_back(std::move(b));
    return e;
}

namespace {

struct Function {
    std::string_view name;
    Expr::Op op;
    std::size_t arity;
};

constexpr std::array<Function, 6> kFunctions{{
    {"sin", Expr::Op::Sin, 1},
    {"cos", Expr::Op::Cos, 1},
    {"tanh", Expr::Op::Tanh, 1},
    {"abs", Expr::Op::Abs, 1},
    {"min", Expr::Op::Min, 2},
    {"max", Expr::Op::Max, 2},
}};

const Function* find_function(std::string_view name) {
    for (const auto& f : kFunctions) {
        if (f.name == name) return &f;
    }
    return nullptr;
}

const Function* find_function(Expr::Op op) {
    for (const auto& f : kFunctions) {
        if (f.op == op) return &f;
    }
    return nullptr;
}

class Parser {
public:
    Parser(std::string_view src, int dim) : src_(src), dim_(dim) {}

    Expr parse() {
        skip_space();
        if (pos_ == src_.size()) throw SyntaxError("empty expression", pos_);
        Expr e = parse_sum();
        skip_space();
        if (pos_ != src_.size()) {
            throw SyntaxError(std::string("unexpected '") + src_[pos_] + "'", pos_);
        }
        return e;
    }

private:
    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= src_.size()) {
                throw SyntaxError(std::string("expected '") + c + "' but input ended", pos_);
            }
            throw SyntaxError(std::string("expected '") + c + "'", pos_);
        }
    }

    Expr parse_sum() {
        Expr lhs = parse_product();
        for (;;) {
            if (accept('+')) {
                lhs = Expr::binary(Expr::Op::Add, std::move(lhs), parse_product());
            } else if (accept('-')) {
                lhs = Expr::binary(Expr::Op::Sub, std::move(lhs), parse_product());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_product() {
        Expr lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = Expr::binary(Expr::Op::Mul, std::move(lhs), parse_unary());
            } else if (accept('/')) {
                lhs = Expr::binary(Expr::Op::Div, std::move(lhs), parse_unary());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_unary() {
        if (accept('-')) return Expr::unary(Expr::Op::Neg, parse_unary());
        return parse_primary();
    }

    Expr parse_primary() {
        skip_space();
        if (pos_ >= src_.size()) throw SyntaxError("unexpected end of input", pos_);
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
    }

    Expr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
            ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
                while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p;
                pos_ = p;
            }
        }
        const std::string text(src_.substr(start, pos_ - start));
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size() || text == ".") {
            throw SyntaxError("malformed number '" + text + "'", start);
        }
        if (!std::isfinite(v)) throw SyntaxError("number out of range '" + text + "'", start);
        return Expr::number(v);
    }

    Expr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = src_.substr(start, pos_ - start);

        if (name.size() >= 2 && name[0] == 'x' &&
            std::all_of(name.begin() + 1, name.end(),
                        [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
            int index = 0;
            const auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
            if (ec != std::errc() || index < 1 || index > dim_) {
                throw UnknownIdentifier("variable '" + std::string(name) + "' is not one of x1..x" +
                                        std::to_string(dim_));
            }
            return Expr::variable(index);
        }

        const Function* fn = find_function(name);
        if (fn == nullptr) throw UnknownIdentifier("unknown identifier '" + std::string(name) + "'");

        expect('(');
        std::vector<Expr> args;
        if (!accept(')')) {
            do {
                args.push_back(parse_sum());
            } while (accept(','));
            expect(')');
        }
        if (args.size() != fn->arity) {
            throw ArityError(std::string(fn->name) + " takes " + std::to_string(fn->arity) +
                             " argument(s), got " + std::to_string(args.size()));
        }
        Expr e;
        e.op = fn->op;
        e.args = std::move(args);
        return e;
    }

    std::string_view src_;
    int dim_;
    std::size_t pos_ = 0;
};

// binding strength: sums 1, products 2, unary/atoms 3
int precedence(const Expr& e) {
    switch (e.op) {
        case Expr::Op::Add:
        case Expr::Op::Sub:
            return 1;
        case Expr::Op::Mul:
        case Expr::Op::Div:
            return 2;
        default:
            return 3;
    }
}

void print(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool wrap, std::string& out) {
    if (wrap) out += '(';
    print(e, out);
    if (wrap) out += ')';
}

void print(const Expr& e, std::string& out) {
    switch (e.op) {
        case Expr::Op::Number: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", std::abs(e.value));
            // a negative literal only arises from hand-built trees
            if (std::signbit(e.value)) {
                out += "(-";
                out += buf;
                out += ')';
            } else {
                out += buf;
            }
            return;
        }
        case Expr::Op::Var:
            out += 'x';
            out += std::to_string(e.var);
            return;
        case Expr::Op::Neg:
            out += '-';
            print_wrapped(e.args[0], precedence(e.args[0]) < 3, out);
            return;
        case Expr::Op::Add:
        case Expr::Op::Sub:
        case Expr::Op::Mul:
        case Expr::Op::Div: {
            const int prec = precedence(e);
            const char* sym = e.op == Expr::Op::Add   ? " + "
                              : e.op == Expr::Op::Sub ? " - "
                              : e.op == Expr::Op::Mul ? " * "
                                                      : " / ";
            print_wrapped(e.args[0], precedence(e.args[0]) < prec, out);
            out += sym;
            print_wrapped(e.args[1], precedence(e.args[1]) <= prec, out);
            return;
        }
        default: {
            const Function* fn = find_function(e.op);
            out += fn->name;
            out += '(';
            for (std::size_t i = 0; i < e.args.size(); ++i) {
                if (i > 0) out += ", ";
                print(e.args[i], out);
            }
            out += ')';
            return;
        }
    }
}

}  // namespace

Expr parse_expression(std::string_view source, int dim) {
    if (dim < 1) throw InvalidArgument("expression dimension must be >= 1");
    return Parser(source, dim).parse();
}

std::string to_string(const Expr& e) {
    std::string out;
    print(e, out);
    return out;
}

double evaluate(const Expr& e, std::span<const double> x) {
    switch (e.op) {
        case Expr::Op::Number:
            return e.value;
        case Expr::Op::Var:
            if (e.var < 1 || static_cast<std::size_t>(e.var) > x.size()) {
                throw EvaluationError("variable x" + std::to_string(e.var) + " not bound");
            }
            return x[static_cast<std::size_t>(e.var - 1)];
        case Expr::Op::Neg:
            return -evaluate(e.args[0], x);
        case Expr::Op::Add:
            return evaluate(e.args[0], x) + evaluate(e.args[1], x);
        case Expr::Op::Sub:
            return evaluate(e.args[0], x) - evaluate(e.args[1], x);
        case Expr::Op::Mul:
            return evaluate(e.args[0], x) * evaluate(e.args[1], x);
        case Expr::Op::Div: {
            const double num = evaluate(e.args[0], x);
            const double den = evaluate(e.args[1], x);
            if (std::abs(den) < 1e-300) throw EvaluationError("division by (near) zero");
            return num / den;
        }
        case Expr::Op::Sin:
            return std::sin(evaluate(e.args[0], x));
        case Expr::Op::Cos:
            return std::cos(evaluate(e.args[0], x));
        case Expr::Op::Tanh:
            return std::tanh(evaluate(e.args[0], x));
        case Expr::Op::Abs:
            return std::abs(evaluate(e.args[0], x));
        case Expr::Op::Min:
            return std::min(evaluate(e.args[0], x), evaluate(e.args[1], x));
        case Expr::Op::Max:
            return std::max(evaluate(e.args[0], x), evaluate(e.args[1], x));
    }
    return 0.0;
}

int max_variable(const Expr& e) {
    int m = e.op == Expr::Op::Var ? e.var : 0;
    for (const auto& a : e.args) m = std::max(m, max_variable(a));
    return m;
}

}  // namespace aporbit
