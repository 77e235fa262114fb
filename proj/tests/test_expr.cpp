#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "wkbq/errors.hpp"
#include "wkbq/expr.hpp"

using namespace wkbq;
using expr::parse;

namespace {

double at(const char* src, double x) { return parse(src)(x); }
double slope(const char* src, double x) { return expr::differentiate(parse(src))(x); }

// Random smooth expression text with moderate magnitudes on |x| <= 2.
std::string random_expr(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    const auto number = [&] {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", coef(rng));
        return std::string("(") + buf + ")";
    };
    switch (pick(rng)) {
        case 0: return number();
        case 1: return "x";
        case 2: return "(" + random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1) + ")";
        case 3: return "(" + random_expr(rng, depth - 1) + " - " + random_expr(rng, depth - 1) + ")";
        case 4: return "(" + random_expr(rng, depth - 1) + " * " + random_expr(rng, depth - 1) + ")";
        case 5: return "(" + random_expr(rng, depth - 1) + ")^" + std::to_string(pick(rng) % 4);
        case 6: return "sin(" + random_expr(rng, depth - 1) + ")";
        case 7: return "tanh(" + random_expr(rng, depth - 1) + ")";
        case 8: return "sqrt(1 + (" + random_expr(rng, depth - 1) + ")^2)";
        default: return "exp(-(" + random_expr(rng, depth - 1) + ")^2)/(2 + cos(x))";
    }
}

}  // namespace

TEST_CASE("evaluation follows precedence") {
    CHECK(at("x^2/2", 2.0) == 2.0);
    CHECK(at("x^2/2", -2.0) == 2.0);
    CHECK(at("-6/cosh(x)^2", 0.0) == -6.0);
    CHECK(at("-x^2", 3.0) == -9.0);
    CHECK(at("2^3^2", 0.0) == 512.0);
    CHECK(at("2^-1", 0.0) == 0.5);
    CHECK(at("1 - 2 - 3", 0.0) == -4.0);
    CHECK(at("8 / 4 / 2", 0.0) == 1.0);
    CHECK(at(" 1+2*x ", 3.0) == 7.0);
    CHECK(at("--x", 2.0) == 2.0);
    CHECK(at("abs(x) + log(exp(1)) + sinh(0) + tanh(0)", -3.0) == doctest::Approx(4.0));
    CHECK(at("1.5e2 + .5", 0.0) == 150.5);
}

TEST_CASE("syntax errors carry the offset") {
    const auto offset = [](const char* s) -> long {
        try {
            parse(s);
        } catch (const SyntaxError& e) {
            return static_cast<long>(e.position());
        }
        return -1;
    };
    CHECK(offset("2*+x") == 2);
    CHECK(offset("") == 0);
    CHECK(offset("(x") == 2);
    CHECK(offset("x)") == 1);
    CHECK(offset("sin x") == 4);
    CHECK(offset("1 +") == 3);
}

TEST_CASE("unknown identifiers are rejected") {
    CHECK_THROWS_AS(parse("y + 1"), UnknownIdentifierError);
    CHECK_THROWS_AS(parse("sech(x)"), UnknownIdentifierError);
    try {
        parse("x + foo(x)");
    } catch (const UnknownIdentifierError& e) {
        CHECK(e.position() == 4);
    }
}

TEST_CASE("domain errors are distinct from syntax errors") {
    CHECK_THROWS_AS(at("-1/x", 0.0), DomainError);
    CHECK_THROWS_AS(at("sqrt(x)", -1.0), DomainError);
    CHECK_THROWS_AS(at("log(x)", 0.0), DomainError);
    CHECK_THROWS_AS(at("x^0.5", -2.0), DomainError);
    CHECK_THROWS_AS(at("x^-1", 0.0), DomainError);
    CHECK_THROWS_AS(at("exp(x)", 1000.0), DomainError);
    CHECK(at("x^3", -2.0) == -8.0);
}

TEST_CASE("symbolic derivatives") {
    CHECK(slope("x^2/2", 3.0) == doctest::Approx(3.0));
    CHECK(slope("-6/cosh(x)^2", 0.0) == doctest::Approx(0.0));
    CHECK(slope("-1/x", 2.0) == doctest::Approx(0.25));
    CHECK(slope("sin(x)*exp(x)", 0.0) == doctest::Approx(1.0));
    CHECK(slope("sqrt(x)", 4.0) == doctest::Approx(0.25));
    CHECK(slope("log(x)", 2.0) == doctest::Approx(0.5));
    CHECK(slope("x^x", 1.0) == doctest::Approx(1.0));
    CHECK(slope("abs(x)", -2.0) == doctest::Approx(-1.0));
    CHECK(slope("tanh(x)", 0.0) == doctest::Approx(1.0));
    CHECK_FALSE(expr::differentiate(parse("3 + sin(2)")).depends_on_x());
}

TEST_CASE("derivative agrees with a central difference on random expressions") {
    std::mt19937_64 rng(20261015);
    std::uniform_real_distribution<double> xs(-2.0, 2.0);
    int checked = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const std::string src = random_expr(rng, 4);
        const expr::Expr e = parse(src);
        const expr::Expr d = expr::differentiate(e);
        const double x = xs(rng);
        const double h = 1e-5 * std::max(1.0, std::fabs(x));
        double fd;
        double exact;
        try {
            fd = (e(x + h) - e(x - h)) / (2.0 * h);
            exact = d(x);
        } catch (const DomainError&) {
            continue;
        }
        ++checked;
        INFO(src << " at x = " << x);
        CHECK(std::fabs(exact - fd) <= 1e-6 * std::max(1.0, std::fabs(exact)));
    }
    CHECK(checked > 300);
}

TEST_CASE("printed form parses back to the same function") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> xs(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const expr::Expr e = parse(random_expr(rng, 4));
        const expr::Expr back = parse(e.to_string());
        const double x = xs(rng);
        INFO(e.to_string());
        try {
            CHECK(back(x) == doctest::Approx(e(x)).epsilon(1e-12));
        } catch (const DomainError&) {
        }
    }
}

TEST_CASE("parsing is total on fuzzed input") {
    const std::string alphabet = "x0123456789.e+-*/^() \tsincoexplqrtabhgy,";
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> ch(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> len(0, 24);
    int parsed = 0;
    for (int trial = 0; trial < 20000; ++trial) {
        std::string s;
        for (int i = len(rng); i > 0; --i) s += alphabet[ch(rng)];
        try {
            const expr::Expr e = parse(s);
            ++parsed;
            try {
                (void)e(0.7);
                (void)expr::differentiate(e)(0.7);
            } catch (const DomainError&) {
            }
        } catch (const ParseError& e) {
            CHECK(e.position() <= s.size());
        }
    }
    CHECK(parsed > 0);
}

TEST_CASE("deep nesting is refused rather than overflowing") {
    const std::string deep = std::string(100000, '(') + "x" + std::string(100000, ')');
    CHECK_THROWS_AS(parse(deep), SyntaxError);
    const std::string negs = std::string(100000, '-') + "x";
    CHECK_THROWS_AS(parse(negs), SyntaxError);
}
