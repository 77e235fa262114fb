#include "wkbq/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <utility>

#include "wkbq/errors.hpp"

namespace wkbq::expr {

namespace {

using Kind = Expr::Kind;
using Node = Expr::Node;
using NodePtr = Expr::NodePtr;

constexpr std::array<std::pair<std::string_view, Func>, 9> kFunctions{{
    {"exp", Func::exp},
    {"log", Func::log},
    {"sqrt", Func::sqrt},
    {"abs", Func::abs},
    {"sin", Func::sin},
    {"cos", Func::cos},
    {"tanh", Func::tanh},
    {"cosh", Func::cosh},
    {"sinh", Func::sinh},
}};

constexpr int kMaxDepth = 200;

NodePtr make_literal(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::literal;
    n->value = v;
    return n;
}

NodePtr make_variable() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::variable;
    return n;
}

bool is_literal(const NodePtr& n, double v) { return n->kind == Kind::literal && n->value == v; }

NodePtr make_negate(NodePtr a) {
    if (a->kind == Kind::literal) return make_literal(-a->value);
    if (a->kind == Kind::negate) return a->lhs;
    auto n = std::make_shared<Node>();
    n->kind = Kind::negate;
    n->lhs = std::move(a);
    return n;
}

NodePtr make_raw_binary(BinaryOp op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::binary;
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

NodePtr make_call(Func f, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::call;
    n->fn = f;
    n->lhs = std::move(a);
    return n;
}

double eval_node(const Node& n, double x);

// Folds literal-only subtrees when the result is a finite, domain-valid number.
NodePtr fold(NodePtr n) {
    if (n->kind == Kind::binary && n->lhs->kind == Kind::literal && n->rhs->kind == Kind::literal) {
        try {
            return make_literal(eval_node(*n, 0.0));
        } catch (const DomainError&) {
            return n;
        }
    }
    return n;
}

// Simplifying constructors used by the differentiator.
NodePtr add(NodePtr a, NodePtr b) {
    if (is_literal(a, 0.0)) return b;
    if (is_literal(b, 0.0)) return a;
    if (b->kind == Kind::negate) return fold(make_raw_binary(BinaryOp::sub, std::move(a), b->lhs));
    return fold(make_raw_binary(BinaryOp::add, std::move(a), std::move(b)));
}

NodePtr sub(NodePtr a, NodePtr b) {
    if (is_literal(b, 0.0)) return a;
    if (is_literal(a, 0.0)) return make_negate(std::move(b));
    return fold(make_raw_binary(BinaryOp::sub, std::move(a), std::move(b)));
}

NodePtr mul(NodePtr a, NodePtr b) {
    if (is_literal(a, 0.0) || is_literal(b, 0.0)) return make_literal(0.0);
    if (is_literal(a, 1.0)) return b;
    if (is_literal(b, 1.0)) return a;
    if (is_literal(a, -1.0)) return make_negate(std::move(b));
    if (is_literal(b, -1.0)) return make_negate(std::move(a));
    return fold(make_raw_binary(BinaryOp::mul, std::move(a), std::move(b)));
}

NodePtr div(NodePtr a, NodePtr b) {
    if (is_literal(a, 0.0)) return make_literal(0.0);
    if (is_literal(b, 1.0)) return a;
    return fold(make_raw_binary(BinaryOp::div, std::move(a), std::move(b)));
}

NodePtr pow(NodePtr a, NodePtr b) {
    if (is_literal(b, 1.0)) return a;
    if (is_literal(b, 0.0)) return make_literal(1.0);
    return fold(make_raw_binary(BinaryOp::pow, std::move(a), std::move(b)));
}

bool depends_on_x(const Node& n) {
    switch (n.kind) {
        case Kind::literal: return false;
        case Kind::variable: return true;
        case Kind::negate:
        case Kind::call: return depends_on_x(*n.lhs);
        case Kind::binary: return depends_on_x(*n.lhs) || depends_on_x(*n.rhs);
    }
    return true;
}

double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string("non-finite result in ") + what);
    return v;
}

double eval_pow(double base, double exponent) {
    if (base < 0.0 && exponent != std::trunc(exponent))
        throw DomainError("non-integer power of a negative base");
    if (base == 0.0 && exponent < 0.0) throw DomainError("zero raised to a negative power");
    return checked(std::pow(base, exponent), "power");
}

double eval_call(Func f, double a) {
    switch (f) {
        case Func::exp: return checked(std::exp(a), "exp");
        case Func::log:
            if (!(a > 0.0)) throw DomainError("log of a non-positive argument");
            return std::log(a);
        case Func::sqrt:
            if (a < 0.0) throw DomainError("sqrt of a negative argument");
            return std::sqrt(a);
        case Func::abs: return std::fabs(a);
        case Func::sin: return std::sin(a);
        case Func::cos: return std::cos(a);
        case Func::tanh: return std::tanh(a);
        case Func::cosh: return checked(std::cosh(a), "cosh");
        case Func::sinh: return checked(std::sinh(a), "sinh");
    }
    return a;
}

double eval_node(const Node& n, double x) {
    switch (n.kind) {
        case Kind::literal: return n.value;
        case Kind::variable: return x;
        case Kind::negate: return -eval_node(*n.lhs, x);
        case Kind::call: return eval_call(n.fn, eval_node(*n.lhs, x));
        case Kind::binary: {
            const double a = eval_node(*n.lhs, x);
            const double b = eval_node(*n.rhs, x);
            switch (n.op) {
                case BinaryOp::add: return checked(a + b, "addition");
                case BinaryOp::sub: return checked(a - b, "subtraction");
                case BinaryOp::mul: return checked(a * b, "multiplication");
                case BinaryOp::div:
                    if (b == 0.0) throw DomainError("division by zero");
                    return checked(a / b, "division");
                case BinaryOp::pow: return eval_pow(a, b);
            }
        }
    }
    return 0.0;
}

NodePtr derive(const NodePtr& n) {
    switch (n->kind) {
        case Kind::literal: return make_literal(0.0);
        case Kind::variable: return make_literal(1.0);
        case Kind::negate: return make_negate(derive(n->lhs));
        case Kind::binary: {
            const NodePtr& a = n->lhs;
            const NodePtr& b = n->rhs;
            switch (n->op) {
                case BinaryOp::add: return add(derive(a), derive(b));
                case BinaryOp::sub: return sub(derive(a), derive(b));
                case BinaryOp::mul: return add(mul(derive(a), b), mul(a, derive(b)));
                case BinaryOp::div:
                    return sub(div(derive(a), b), div(mul(a, derive(b)), pow(b, make_literal(2.0))));
                case BinaryOp::pow: {
                    const bool base_var = depends_on_x(*a);
                    const bool exp_var = depends_on_x(*b);
                    if (!exp_var) {
                        if (!base_var) return make_literal(0.0);
                        // b * a^(b-1) * a'
                        NodePtr reduced = b->kind == Kind::literal ? make_literal(b->value - 1.0)
                                                                   : sub(b, make_literal(1.0));
                        return mul(mul(b, pow(a, reduced)), derive(a));
                    }
                    if (!base_var) return mul(mul(n, make_call(Func::log, a)), derive(b));
                    // a^b * (b' log a + b a'/a)
                    return mul(n, add(mul(derive(b), make_call(Func::log, a)), div(mul(b, derive(a)), a)));
                }
            }
            break;
        }
        case Kind::call: {
            const NodePtr& a = n->lhs;
            NodePtr da = derive(a);
            if (is_literal(da, 0.0)) return da;
            switch (n->fn) {
                case Func::exp: return mul(n, da);
                case Func::log: return div(da, a);
                case Func::sqrt: return div(da, mul(make_literal(2.0), n));
                case Func::abs: return div(mul(a, da), n);
                case Func::sin: return mul(make_call(Func::cos, a), da);
                case Func::cos: return make_negate(mul(make_call(Func::sin, a), da));
                case Func::tanh: return div(da, pow(make_call(Func::cosh, a), make_literal(2.0)));
                case Func::cosh: return mul(make_call(Func::sinh, a), da);
                case Func::sinh: return mul(make_call(Func::cosh, a), da);
            }
            break;
        }
    }
    return make_literal(0.0);
}

std::string format_literal(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), ptr);
}

std::string print(const Node& n) {
    switch (n.kind) {
        case Kind::literal:
            return n.value < 0 ? "(" + format_literal(n.value) + ")" : format_literal(n.value);
        case Kind::variable: return "x";
        case Kind::negate: return "(-" + print(*n.lhs) + ")";
        case Kind::call: return std::string(function_name(n.fn)) + "(" + print(*n.lhs) + ")";
        case Kind::binary: {
            static constexpr std::array<char, 5> ops{'+', '-', '*', '/', '^'};
            return "(" + print(*n.lhs) + ops[static_cast<int>(n.op)] + print(*n.rhs) + ")";
        }
    }
    return {};
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr run() {
        skip_ws();
        if (pos_ >= src_.size()) throw SyntaxError("empty expression", pos_);
        NodePtr e = expression();
        skip_ws();
        if (pos_ < src_.size()) throw SyntaxError(std::string("unexpected '") + src_[pos_] + "'", pos_);
        return e;
    }

private:
    struct DepthGuard {
        explicit DepthGuard(Parser& p) : p_(p) {
            if (++p_.depth_ > kMaxDepth) throw SyntaxError("expression nested too deeply", p_.pos_);
        }
        ~DepthGuard() { --p_.depth_; }
        Parser& p_;
    };

    void skip_ws() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r'))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expression() {
        DepthGuard guard(*this);
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = make_raw_binary(BinaryOp::add, lhs, term());
            else if (accept('-')) lhs = make_raw_binary(BinaryOp::sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = make_raw_binary(BinaryOp::mul, lhs, unary());
            else if (accept('/')) lhs = make_raw_binary(BinaryOp::div, lhs, unary());
            else return lhs;
        }
    }

    NodePtr unary() {
        DepthGuard guard(*this);
        if (accept('-')) return make_negate_raw(unary());
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make_raw_binary(BinaryOp::pow, base, exponent());
        return base;
    }

    NodePtr exponent() {
        DepthGuard guard(*this);
        if (accept('-')) return make_negate_raw(exponent());
        return power();
    }

    static NodePtr make_negate_raw(NodePtr a) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::negate;
        n->lhs = std::move(a);
        return n;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= src_.size()) throw SyntaxError("unexpected end of input", pos_);
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = expression();
            if (!accept(')')) throw SyntaxError("expected ')'", pos_);
            return inner;
        }
        if ((c >= '0' && c <= '9') || c == '.') return number();
        if (is_ident_start(c)) return identifier();
        throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
    }

    NodePtr number() {
        const std::size_t start = pos_;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), v, std::chars_format::general);
        if (ec == std::errc::result_out_of_range) throw SyntaxError("number out of range", start);
        if (ec != std::errc()) throw SyntaxError("malformed number", start);
        pos_ = static_cast<std::size_t>(ptr - src_.data());
        return make_literal(v);
    }

    static bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
    static bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);
        if (name == "x") return make_variable();
        for (const auto& [fname, f] : kFunctions) {
            if (name == fname) {
                if (!accept('(')) throw SyntaxError("expected '(' after " + std::string(name), pos_);
                NodePtr arg = expression();
                if (!accept(')')) throw SyntaxError("expected ')'", pos_);
                return make_call(f, std::move(arg));
            }
        }
        throw UnknownIdentifierError("unknown identifier '" + std::string(name) + "'", start);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

}  // namespace

Expr Expr::literal(double v) { return Expr(make_literal(v)); }
Expr Expr::variable() { return Expr(make_variable()); }

double Expr::operator()(double x) const { return eval_node(*root_, x); }

bool Expr::depends_on_x() const { return expr::depends_on_x(*root_); }

std::string Expr::to_string() const { return print(*root_); }

Expr parse(std::string_view source) { return Expr(Parser(source).run()); }

Expr differentiate(const Expr& e) { return Expr(derive(e.root())); }

std::string_view function_name(Func f) {
    for (const auto& [name, fn] : kFunctions)
        if (fn == f) return name;
    return "?";
}

}  // namespace wkbq::expr
