// Closed-form expressions in one variable x: a small immutable AST with a
// recursive-descent parser, a round-trippable printer, and jet evaluation.
//
// Grammar:
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := unary ("^" factor)?          -- "^" is right-associative
//   unary  := "-" unary | atom
//   atom   := NUMBER | "x" | "pi" | IDENT "(" expr ")" | "(" expr ")"
//   IDENT  in {sin, cos, tan, atan, exp, ln, sqrt, sinh, cosh, tanh}
//
// Only C-infinity primitives are admitted: the downstream criteria need
// three clean derivatives, so non-smooth functions are rejected at parse
// time by simply not being in the grammar.
#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "periodscope/jet.hpp"

namespace pscope {

enum class UnaryFn { Sin, Cos, Tan, Atan, Exp, Ln, Sqrt, Sinh, Cosh, Tanh };

const char* unary_fn_name(UnaryFn fn);

struct ExprNode {
    enum class Kind { Number, Var, Pi, Neg, Add, Sub, Mul, Div, Pow, Call };
    Kind kind;
    double number = 0.0;              // Kind::Number
    UnaryFn fn = UnaryFn::Sin;        // Kind::Call
    std::shared_ptr<const ExprNode> a, b;
};

// Value-semantic handle to an immutable expression tree.
class Expr {
  public:
    Expr() : Expr(number(0.0)) {}

    static Expr number(double v);
    static Expr var();
    static Expr pi();
    static Expr neg(Expr e);
    static Expr add(Expr a, Expr b);
    static Expr sub(Expr a, Expr b);
    static Expr mul(Expr a, Expr b);
    static Expr div(Expr a, Expr b);
    static Expr pow(Expr base, Expr exponent);
    static Expr call(UnaryFn fn, Expr arg);

    const ExprNode& root() const { return *root_; }
    std::shared_ptr<const ExprNode> root_ptr() const { return root_; }

  private:
    explicit Expr(std::shared_ptr<const ExprNode> r) : root_(std::move(r)) {}
    std::shared_ptr<const ExprNode> root_;

    friend Expr parse(std::string_view);
};

// Throws ParseError (with byte offset and expected-token set) on malformed
// input, UnknownIdentifier on names outside the grammar.
Expr parse(std::string_view text);

// Prints a form that parses back to a structurally equal tree.
std::string to_string(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

// Taylor jet of e at x up to the given order; coefficient 0 equals plain
// evaluation. Throws DomainError naming the offending subexpression.
Jet eval_jet(const Expr& e, double x, int order = 4);

double eval_value(const Expr& e, double x);

}  // namespace pscope
