#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace wkbq::expr {

enum class Func { exp, log, sqrt, abs, sin, cos, tanh, cosh, sinh };
enum class BinaryOp { add, sub, mul, div, pow };

/// Immutable expression tree in the single variable x.
///
/// Leaves are literals or x; interior nodes are negation, the five binary
/// operators and the whitelisted functions. Sharing subtrees is allowed, so
/// copies are cheap and evaluation is safe from any number of threads.
class Expr {
public:
    enum class Kind { literal, variable, negate, binary, call };

    struct Node {
        Kind kind;
        double value = 0.0;
        BinaryOp op = BinaryOp::add;
        Func fn = Func::exp;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };
    using NodePtr = std::shared_ptr<const Node>;

    explicit Expr(NodePtr root) : root_(std::move(root)) {}

    static Expr literal(double v);
    static Expr variable();

    /// Throws DomainError at poles, out-of-range sqrt/log arguments, non-integer
    /// powers of negative bases and non-finite results.
    double operator()(double x) const;

    const NodePtr& root() const noexcept { return root_; }
    bool depends_on_x() const;

    /// Fully parenthesised text that parses back to an equivalent tree.
    std::string to_string() const;

private:
    NodePtr root_;
};

/// Grammar (whitespace ignored):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' exponent)?      right-associative
///   exponent:= '-' exponent | power
///   primary := number | 'x' | func '(' expr ')' | '(' expr ')'
/// Throws SyntaxError / UnknownIdentifierError carrying the character offset.
Expr parse(std::string_view source);

/// Exact symbolic d/dx, with light constant folding.
Expr differentiate(const Expr& e);

inline double eval(const Expr& e, double x) { return e(x); }

std::string_view function_name(Func f);

}  // namespace wkbq::expr
