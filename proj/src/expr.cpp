#include "periodscope/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <utility>

namespace pscope {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;
using Kind = ExprNode::Kind;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

struct FnEntry {
    const char* name;
    UnaryFn fn;
};
constexpr std::array<FnEntry, 10> kFunctions = {{
    {"sin", UnaryFn::Sin}, {"cos", UnaryFn::Cos}, {"tan", UnaryFn::Tan},
    {"atan", UnaryFn::Atan}, {"exp", UnaryFn::Exp}, {"ln", UnaryFn::Ln},
    {"sqrt", UnaryFn::Sqrt}, {"sinh", UnaryFn::Sinh}, {"cosh", UnaryFn::Cosh},
    {"tanh", UnaryFn::Tanh},
}};

}  // namespace

const char* unary_fn_name(UnaryFn fn) {
    for (const auto& e : kFunctions)
        if (e.fn == fn) return e.name;
    return "?";
}

Expr Expr::number(double v) {
    auto n = make(Kind::Number);
    const_cast<ExprNode&>(*n).number = v;
    return Expr(std::move(n));
}
Expr Expr::var() { return Expr(make(Kind::Var)); }
Expr Expr::pi() { return Expr(make(Kind::Pi)); }
Expr Expr::neg(Expr e) { return Expr(make(Kind::Neg, e.root_)); }
Expr Expr::add(Expr a, Expr b) { return Expr(make(Kind::Add, a.root_, b.root_)); }
Expr Expr::sub(Expr a, Expr b) { return Expr(make(Kind::Sub, a.root_, b.root_)); }
Expr Expr::mul(Expr a, Expr b) { return Expr(make(Kind::Mul, a.root_, b.root_)); }
Expr Expr::div(Expr a, Expr b) { return Expr(make(Kind::Div, a.root_, b.root_)); }
Expr Expr::pow(Expr a, Expr b) { return Expr(make(Kind::Pow, a.root_, b.root_)); }
Expr Expr::call(UnaryFn fn, Expr arg) {
    auto n = make(Kind::Call, arg.root_);
    const_cast<ExprNode&>(*n).fn = fn;
    return Expr(std::move(n));
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Token {
    enum class Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Type type = Type::End;
    double number = 0.0;
    std::string ident;
    std::size_t offset = 0;
};

class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) { advance(); }

    NodePtr run() {
        NodePtr e = parseExpr();
        if (tok_.type != Token::Type::End)
            fail("end of input, '+', '-', '*', '/' or '^'");
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string& expected) const {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "syntax error at offset %zu: expected ", tok_.offset);
        throw ParseError(tok_.offset, expected, buf + expected);
    }

    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        tok_ = Token{};
        tok_.offset = pos_;
        if (pos_ >= text_.size()) { tok_.type = Token::Type::End; return; }
        const char c = text_[pos_];
        switch (c) {
            case '+': tok_.type = Token::Type::Plus; ++pos_; return;
            case '-': tok_.type = Token::Type::Minus; ++pos_; return;
            case '*': tok_.type = Token::Type::Star; ++pos_; return;
            case '/': tok_.type = Token::Type::Slash; ++pos_; return;
            case '^': tok_.type = Token::Type::Caret; ++pos_; return;
            case '(': tok_.type = Token::Type::LParen; ++pos_; return;
            case ')': tok_.type = Token::Type::RParen; ++pos_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            lexNumber();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            tok_.type = Token::Type::Ident;
            tok_.ident.assign(text_.substr(start, pos_ - start));
            return;
        }
        char buf[96];
        std::snprintf(buf, sizeof(buf), "syntax error at offset %zu: unexpected character '%c'",
                      pos_, c);
        throw ParseError(pos_, "number, 'x', 'pi', function or '('", buf);
    }

    // NUMBER := digits ['.' digits] [('e'|'E') ['+'|'-'] digits]
    void lexNumber() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // bare 'e' belongs to the next token, not the number
            }
        }
        double v = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (res.ec != std::errc{}) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "syntax error at offset %zu: bad number literal", start);
            throw ParseError(start, "number", buf);
        }
        tok_.type = Token::Type::Number;
        tok_.number = v;
    }

    NodePtr parseExpr() {
        NodePtr lhs = parseTerm();
        for (;;) {
            if (tok_.type == Token::Type::Plus) {
                advance();
                lhs = make(Kind::Add, std::move(lhs), parseTerm());
            } else if (tok_.type == Token::Type::Minus) {
                advance();
                lhs = make(Kind::Sub, std::move(lhs), parseTerm());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parseTerm() {
        NodePtr lhs = parseFactor();
        for (;;) {
            if (tok_.type == Token::Type::Star) {
                advance();
                lhs = make(Kind::Mul, std::move(lhs), parseFactor());
            } else if (tok_.type == Token::Type::Slash) {
                advance();
                lhs = make(Kind::Div, std::move(lhs), parseFactor());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parseFactor() {
        NodePtr base = parseUnary();
        if (tok_.type == Token::Type::Caret) {
            advance();
            return make(Kind::Pow, std::move(base), parseFactor());
        }
        return base;
    }

    NodePtr parseUnary() {
        if (tok_.type == Token::Type::Minus) {
            advance();
            return make(Kind::Neg, parseUnary());
        }
        return parseAtom();
    }

    NodePtr parseAtom() {
        switch (tok_.type) {
            case Token::Type::Number: {
                double v = tok_.number;
                advance();
                auto n = make(Kind::Number);
                const_cast<ExprNode&>(*n).number = v;
                return n;
            }
            case Token::Type::LParen: {
                advance();
                NodePtr e = parseExpr();
                if (tok_.type != Token::Type::RParen) fail("')'");
                advance();
                return e;
            }
            case Token::Type::Ident: {
                const std::string name = tok_.ident;
                const std::size_t off = tok_.offset;
                if (name == "x") {
                    advance();
                    return make(Kind::Var);
                }
                if (name == "pi") {
                    advance();
                    return make(Kind::Pi);
                }
                for (const auto& e : kFunctions) {
                    if (name == e.name) {
                        advance();
                        if (tok_.type != Token::Type::LParen) fail("'(' after function name");
                        advance();
                        NodePtr arg = parseExpr();
                        if (tok_.type != Token::Type::RParen) fail("')'");
                        advance();
                        auto n = make(Kind::Call, std::move(arg));
                        const_cast<ExprNode&>(*n).fn = e.fn;
                        return n;
                    }
                }
                char buf[128];
                std::snprintf(buf, sizeof(buf),
                              "unknown identifier '%s' at offset %zu", name.c_str(), off);
                throw UnknownIdentifier(off, "'x', 'pi' or a function name", buf);
            }
            default:
                fail("number, 'x', 'pi', function or '('");
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Token tok_;
};

}  // namespace

Expr parse(std::string_view text) {
    return Expr(Parser(text).run());
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

// Positions a subexpression can be printed into; parenthesization depends on
// where the grammar would re-read it.
enum class Ctx { Top, AddLhs, AddRhs, MulLhs, MulRhs, PowBase, PowExp, NegArg };

bool needs_parens(Kind k, Ctx ctx) {
    switch (k) {
        case Kind::Number:
        case Kind::Var:
        case Kind::Pi:
        case Kind::Call:
            return false;
        case Kind::Add:
        case Kind::Sub:
            return !(ctx == Ctx::Top || ctx == Ctx::AddLhs);
        case Kind::Mul:
        case Kind::Div:
            return !(ctx == Ctx::Top || ctx == Ctx::AddLhs || ctx == Ctx::AddRhs ||
                     ctx == Ctx::MulLhs);
        case Kind::Pow:
            // "^" is right-associative and binds tightest among the binary
            // operators; only a nested base position forces parentheses.
            return !(ctx == Ctx::Top || ctx == Ctx::AddLhs || ctx == Ctx::AddRhs ||
                     ctx == Ctx::MulLhs || ctx == Ctx::MulRhs || ctx == Ctx::PowExp);
        case Kind::Neg:
            // Unary minus is a valid "unary", hence a valid "^" base; keep it
            // bare only where the grammar re-reads it unambiguously.
            return !(ctx == Ctx::Top || ctx == Ctx::PowExp || ctx == Ctx::PowBase ||
                     ctx == Ctx::NegArg);
    }
    return true;
}

void print_node(const ExprNode& n, Ctx ctx, std::string& out) {
    const bool parens = needs_parens(n.kind, ctx);
    if (parens) out += '(';
    switch (n.kind) {
        case Kind::Number: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", n.number);
            out += buf;
            break;
        }
        case Kind::Var: out += 'x'; break;
        case Kind::Pi: out += "pi"; break;
        case Kind::Neg:
            out += '-';
            print_node(*n.a, Ctx::NegArg, out);
            break;
        case Kind::Add:
            print_node(*n.a, Ctx::AddLhs, out);
            out += " + ";
            print_node(*n.b, Ctx::AddRhs, out);
            break;
        case Kind::Sub:
            print_node(*n.a, Ctx::AddLhs, out);
            out += " - ";
            print_node(*n.b, Ctx::AddRhs, out);
            break;
        case Kind::Mul:
            print_node(*n.a, Ctx::MulLhs, out);
            out += '*';
            print_node(*n.b, Ctx::MulRhs, out);
            break;
        case Kind::Div:
            print_node(*n.a, Ctx::MulLhs, out);
            out += '/';
            print_node(*n.b, Ctx::MulRhs, out);
            break;
        case Kind::Pow:
            print_node(*n.a, Ctx::PowBase, out);
            out += '^';
            print_node(*n.b, Ctx::PowExp, out);
            break;
        case Kind::Call:
            out += unary_fn_name(n.fn);
            out += '(';
            print_node(*n.a, Ctx::Top, out);
            out += ')';
            break;
    }
    if (parens) out += ')';
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print_node(e.root(), Ctx::Top, out);
    return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
    struct Cmp {
        static bool eq(const ExprNode& x, const ExprNode& y) {
            if (x.kind != y.kind) return false;
            switch (x.kind) {
                case Kind::Number: return x.number == y.number;
                case Kind::Var:
                case Kind::Pi: return true;
                case Kind::Neg: return eq(*x.a, *y.a);
                case Kind::Call: return x.fn == y.fn && eq(*x.a, *y.a);
                default: return eq(*x.a, *y.a) && eq(*x.b, *y.b);
            }
        }
    };
    return Cmp::eq(a.root(), b.root());
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

std::string describe(const ExprNode& n) {
    std::string s;
    print_node(n, Ctx::Top, s);
    return s;
}

bool contains_var(const ExprNode& n) {
    switch (n.kind) {
        case Kind::Var: return true;
        case Kind::Number:
        case Kind::Pi: return false;
        case Kind::Neg:
        case Kind::Call: return contains_var(*n.a);
        default: return contains_var(*n.a) || contains_var(*n.b);
    }
}

Jet eval_node(const ExprNode& n, double x, int order) {
    switch (n.kind) {
        case Kind::Number: return Jet::constant(n.number, x, order);
        case Kind::Var: return Jet::variable(x, order);
        case Kind::Pi: return Jet::constant(std::numbers::pi, x, order);
        case Kind::Neg: return -eval_node(*n.a, x, order);
        case Kind::Add: return eval_node(*n.a, x, order) + eval_node(*n.b, x, order);
        case Kind::Sub: return eval_node(*n.a, x, order) - eval_node(*n.b, x, order);
        case Kind::Mul: return eval_node(*n.a, x, order) * eval_node(*n.b, x, order);
        case Kind::Div: {
            Jet a = eval_node(*n.a, x, order);
            Jet b = eval_node(*n.b, x, order);
            try {
                return a / b;
            } catch (const DomainError& e) {
                throw DomainError(std::string(e.what()) + " in '" + describe(n) + "'");
            }
        }
        case Kind::Pow: {
            // The dispatch is structural so that every jet order takes the
            // same branch and c[0] always equals plain evaluation.
            Jet base = eval_node(*n.a, x, order);
            try {
                if (!contains_var(*n.b)) {
                    const double r = eval_node(*n.b, x, 0).value();
                    if (std::nearbyint(r) == r && std::abs(r) <= 1e9)
                        return jet_pow_int(base, static_cast<long long>(r));
                    return jet_pow(base, r);
                }
                // Variable exponent: a^b = exp(b ln a), a > 0 required.
                return jet_exp(eval_node(*n.b, x, order) * jet_ln(base));
            } catch (const DomainError& e) {
                throw DomainError(std::string(e.what()) + " in '" + describe(n) + "'");
            }
        }
        case Kind::Call: {
            Jet u = eval_node(*n.a, x, order);
            try {
                switch (n.fn) {
                    case UnaryFn::Sin: return jet_sin(u);
                    case UnaryFn::Cos: return jet_cos(u);
                    case UnaryFn::Tan: return jet_tan(u);
                    case UnaryFn::Atan: return jet_atan(u);
                    case UnaryFn::Exp: return jet_exp(u);
                    case UnaryFn::Ln: return jet_ln(u);
                    case UnaryFn::Sqrt: return jet_sqrt(u);
                    case UnaryFn::Sinh: return jet_sinh(u);
                    case UnaryFn::Cosh: return jet_cosh(u);
                    case UnaryFn::Tanh: return jet_tanh(u);
                }
                throw DomainError("unhandled function");
            } catch (const DomainError& e) {
                throw DomainError(std::string(e.what()) + " in '" + describe(n) + "'");
            }
        }
    }
    throw DomainError("unhandled expression node");
}

}  // namespace

Jet eval_jet(const Expr& e, double x, int order) {
    if (order < 0 || order > Jet::kMaxOrder)
        throw DomainError("jet order out of range");
    return eval_node(e.root(), x, order);
}

double eval_value(const Expr& e, double x) {
    return eval_node(e.root(), x, 0).value();
}

}  // namespace pscope
