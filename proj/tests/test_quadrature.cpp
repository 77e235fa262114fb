#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wkbq/errors.hpp"
#include "wkbq/gauss_legendre.hpp"
#include "wkbq/quadrature.hpp"

using namespace wkbq;

namespace {

const UnitSystem kAtomic = UnitSystem::from_beta(1.0 / std::sqrt(2.0));
const QuadConfig kCfg{};

Potential harmonic() { return make_builtin(builtin::Harmonic{1.0}, kAtomic); }
Potential pt6() { return make_builtin(builtin::HyperbolicWell{std::sqrt(6.0)}, kAtomic); }

}  // namespace

TEST_CASE("Gauss-Legendre rule") {
    const GaussLegendreRule& r3 = gauss_legendre(3);
    CHECK(r3.nodes[0] == doctest::Approx(std::sqrt(0.6)));
    CHECK(r3.nodes[1] == 0.0);
    CHECK(r3.weights[0] == doctest::Approx(5.0 / 9.0));
    CHECK(r3.weights[1] == doctest::Approx(8.0 / 9.0));

    for (int n : {1, 2, 7, 20, 64, 513, 1024, 4096, 65536}) {
        const GaussLegendreRule r = compute_gauss_legendre(n, Execution::serial);
        REQUIRE(r.size() == static_cast<std::size_t>(n));
        double sum = 0.0;
        double moment = 0.0;
        const int p = std::min(2 * n - 2, 40);
        for (std::size_t i = 0; i < r.size(); ++i) {
            sum += r.weights[i];
            moment += r.weights[i] * std::pow(r.nodes[i], p);
            CHECK(r.complement[i] == doctest::Approx(1.0 - std::fabs(r.nodes[i])).epsilon(1e-12));
            CHECK(r.complement[i] > 0.0);
            if (i > 0) CHECK(r.nodes[i] < r.nodes[i - 1]);
            CHECK(r.nodes[i] == -r.nodes[n - 1 - i]);
        }
        INFO("n = " << n);
        CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(moment == doctest::Approx(2.0 / (p + 1)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(compute_gauss_legendre(0), InvalidParameterError);
}

TEST_CASE("Gauss-Legendre edge node keeps full relative accuracy") {
    // High-precision reference values for n = 4096.
    const GaussLegendreRule r = compute_gauss_legendre(4096, Execution::serial);
    CHECK(r.complement[0] == doctest::Approx(1.7231029617915162869e-7).epsilon(1e-14));
    CHECK(r.weights[0] == doctest::Approx(4.4220385139094867252e-7).epsilon(1e-14));
    CHECK(r.complement[5] == doctest::Approx(9.7299548709518884292e-6).epsilon(1e-14));
    CHECK(r.weights[5] == doctest::Approx(3.3817449048579908152e-6).epsilon(1e-14));
}

TEST_CASE("quadrature config validation") {
    CHECK_NOTHROW(kCfg.validate());
    CHECK_THROWS_AS((QuadConfig{4, 10, 1e-10, 1e-3}.validate()), InvalidParameterError);
    CHECK_THROWS_AS((QuadConfig{64, 10, 0.0, 1e-3}.validate()), InvalidParameterError);
    CHECK_THROWS_AS((QuadConfig{64, 10, 1e-10, 0.1}.validate()), InvalidParameterError);
    CHECK_THROWS_AS((QuadConfig{64, -1, 1e-10, 1e-3}.validate()), InvalidParameterError);
}

TEST_CASE("turning points") {
    const TurningPoints h = find_turning_points(harmonic(), 0.5);
    CHECK(h.x_minus == doctest::Approx(-1.0));
    CHECK(h.x_plus == doctest::Approx(1.0));

    const Potential pt = pt6();
    const TurningPoints t = find_turning_points(pt, -2.0);
    const double x = std::acosh(std::sqrt(3.0));
    CHECK(t.x_plus == doctest::Approx(x).epsilon(1e-13));
    CHECK(t.x_minus == doctest::Approx(-x).epsilon(1e-13));
    CHECK(std::fabs(pt(t.x_plus) + 2.0) <= 2e-12);
    CHECK(std::fabs(pt(t.x_minus) + 2.0) <= 2e-12);
    CHECK(t.x_plus == doctest::Approx(1.146216).epsilon(1e-6));

    CHECK_THROWS_AS(find_turning_points(harmonic(), -1.0), NoAllowedRegionError);
    CHECK_THROWS_AS(find_turning_points(pt, 0.1), UnboundEnergyError);
    CHECK_THROWS_AS(find_turning_points(pt, 0.0), UnboundEnergyError);

    const Potential dw = make_from_expression(expr::parse("x^4 - 2*x^2"), {}, kAtomic);
    CHECK_THROWS_AS(find_turning_points(dw, -0.5), MultiWellError);
    CHECK_NOTHROW(find_turning_points(dw, 0.5));

    const Potential c0 = make_builtin(builtin::CoulombCentrifugal{1.0, 0}, kAtomic);
    const TurningPoints tc = find_turning_points(c0, -0.125);
    CHECK(tc.edge_minus);
    CHECK(tc.x_minus == 0.0);
    CHECK(tc.x_plus == doctest::Approx(8.0));
}

TEST_CASE("turning-point residual on random energies") {
    const Potential pots[] = {pt6(), make_builtin(builtin::CoulombCentrifugal{1.0, 2}, kAtomic),
                              make_builtin(builtin::GaussianWell{0.3, 1.5}, kAtomic),
                              make_builtin(builtin::Quartic{1.0}, kAtomic)};
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
    for (const auto& p : pots) {
        const double lo = p.infimum().value;
        const double hi = p.threshold().value_or(lo + 50.0);
        for (int i = 0; i < 50; ++i) {
            const double eps = lo + (hi - lo) * u(rng);
            const TurningPoints t = find_turning_points(p, eps);
            const double tol = 1e-12 * std::max(1.0, std::fabs(eps));
            INFO(p.description() << " eps=" << eps);
            CHECK(t.x_minus < t.x_plus);
            CHECK(std::fabs(p(t.x_minus) - eps) <= tol);
            CHECK(std::fabs(p(t.x_plus) - eps) <= tol);
            for (int k = 1; k < 16; ++k) CHECK(p(t.x_minus + (t.x_plus - t.x_minus) * k / 16.0) < eps);
        }
    }
}

TEST_CASE("action integral") {
    CHECK(action(harmonic(), 0.5, kCfg, kAtomic) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(action(harmonic(), 7.25, kCfg, kAtomic) == doctest::Approx(7.25).epsilon(1e-12));
    CHECK(action(pt6(), -2.0, kCfg, kAtomic) == doctest::Approx(2.0 * std::sqrt(3.0) - 2.0).epsilon(1e-11));
    const double c = action(make_builtin(builtin::CoulombCentrifugal{1.0, 0}, kAtomic), -0.125, kCfg, kAtomic);
    CHECK(c == doctest::Approx(2.0).epsilon(1e-10));

    double prev = 1.0;
    for (double d : {1e-2, 1e-4, 1e-6, 1e-8}) {
        const double s = action(pt6(), -6.0 + d, kCfg, kAtomic);
        CHECK(s < prev);
        prev = s;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("quadrature failure carries the last estimates") {
    const QuadConfig tight{8, 1, 1e-15, 1e-3};
    try {
        action_integral(make_builtin(builtin::GaussianWell{1.0, 1.0}, kAtomic), -0.5, tight);
        FAIL("expected a quadrature failure");
    } catch (const QuadratureFailure& e) {
        CHECK(std::isfinite(e.previous()));
        CHECK(std::isfinite(e.last()));
        CHECK(e.previous() != e.last());
    }
}

TEST_CASE("J integral") {
    const QuadResult jh = j_integral(harmonic(), 0.5, kCfg);
    CHECK_FALSE(jh.diverged);
    CHECK(jh.value == doctest::Approx(std::numbers::sqrt2 * std::numbers::pi * 0.5).epsilon(1e-11));
    CHECK(j_integral_fixed(harmonic(), 0.5, jh.nodes) == doctest::Approx(jh.value).epsilon(1e-14));

    const QuadResult j0 = j_integral(make_builtin(builtin::CoulombCentrifugal{1.0, 0}, kAtomic), -0.1, kCfg);
    CHECK(j0.diverged);
    CHECK(j0.value == INFINITY);

    const QuadResult j1 = j_integral(make_builtin(builtin::CoulombCentrifugal{1.0, 1}, kAtomic), -0.1, kCfg);
    CHECK_FALSE(j1.diverged);
    CHECK(std::isfinite(j1.value));
}

TEST_CASE("second eps-derivative") {
    const auto f = [](double e) { return std::exp(e); };
    const SecondDerivative c = second_eps_derivative(f, 0.0, 1.0, kCfg);
    CHECK_FALSE(c.one_sided);
    CHECK(c.value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(c.fine == doctest::Approx(1.0).epsilon(1e-6));

    const SecondDerivative b = second_eps_derivative(f, 0.0, 1.0, kCfg, 0.001);
    CHECK(b.one_sided);
    CHECK(b.value == doctest::Approx(1.0).epsilon(1e-5));

    const auto cubic = [](double e) { return e * e * e - 2.0 * e; };
    CHECK(second_eps_derivative(cubic, 2.0, 1.0, kCfg).value == doctest::Approx(12.0).epsilon(1e-9));

    // J of the hyperbolic well has constant curvature -3 pi / sqrt(6) (A^2 = 6).
    const Potential pt = pt6();
    for (double eps : {-5.0, -2.0, -0.5}) {
        const QuadResult j = j_integral(pt, eps, kCfg);
        const auto jf = [&](double e) { return j_integral_fixed(pt, e, j.nodes); };
        const SecondDerivative d = second_eps_derivative(jf, eps, eps + 6.0, kCfg, 0.0);
        CHECK(d.value == doctest::Approx(-3.0 * std::numbers::pi / std::sqrt(6.0)).epsilon(1e-8));
    }
}
