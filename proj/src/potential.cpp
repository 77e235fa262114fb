#include "wkbq/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <boost/math/tools/minima.hpp>

#include "wkbq/errors.hpp"

namespace wkbq {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidParameterError(std::string(name) + " must be positive and finite");
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

UnitSystem UnitSystem::from_beta(double beta) {
    require_positive(beta, "beta");
    return UnitSystem(beta);
}

UnitSystem UnitSystem::from_hbar_mass(double hbar, double mass) {
    require_positive(hbar, "hbar");
    require_positive(mass, "mass");
    return UnitSystem(hbar / std::sqrt(2.0 * mass));
}

Potential::Potential(Parts parts) : parts_(std::move(parts)) {
    if (!parts_.value || !parts_.derivative) throw ConstructionError("potential needs V and V'");
    if (!(parts_.domain.lo < parts_.domain.hi)) throw InvalidParameterError("domain must satisfy lo < hi");
}

std::optional<double> Potential::threshold() const {
    std::optional<double> t;
    for (const auto& a : {parts_.asymptote_lo, parts_.asymptote_hi})
        if (a) t = t ? std::min(*t, a->value) : a->value;
    return t;
}

bool Potential::has_exact_spectrum() const {
    if (!parts_.builtin) return false;
    return std::holds_alternative<builtin::Harmonic>(*parts_.builtin) ||
           std::holds_alternative<builtin::HyperbolicWell>(*parts_.builtin) ||
           std::holds_alternative<builtin::CoulombCentrifugal>(*parts_.builtin);
}

std::string describe(const BuiltinKind& kind) {
    return std::visit(
        overloaded{
            [](const builtin::Harmonic& k) { return "harmonic(A=" + fmt(k.A) + ")"; },
            [](const builtin::HyperbolicWell& k) { return "hyperbolic(A2=" + fmt(k.A * k.A) + ")"; },
            [](const builtin::CoulombCentrifugal& k) {
                return "coulomb(Z=" + fmt(k.Z) + ",l=" + std::to_string(k.l) + ")";
            },
            [](const builtin::GaussianWell& k) { return "gaussian(V0=" + fmt(k.V0) + ",width=" + fmt(k.width) + ")"; },
            [](const builtin::Quartic& k) { return "quartic(c=" + fmt(k.c) + ")"; },
        },
        kind);
}

Potential make_builtin(const BuiltinKind& kind, const UnitSystem& units) {
    Potential::Parts p;
    p.description = describe(kind);
    p.builtin = kind;
    const double b2 = units.beta() * units.beta();

    std::visit(overloaded{
                   [&](const builtin::Harmonic& k) {
                       require_positive(k.A, "harmonic A");
                       const double a2 = k.A * k.A;
                       p.value = [a2](double x) { return 0.5 * a2 * x * x; };
                       p.derivative = [a2](double x) { return a2 * x; };
                       p.infimum = {0.0, 0.0};
                   },
                   [&](const builtin::HyperbolicWell& k) {
                       require_positive(k.A, "hyperbolic A");
                       const double a2 = k.A * k.A;
                       p.value = [a2](double x) {
                           const double c = std::cosh(x);
                           return -a2 / (c * c);
                       };
                       p.derivative = [a2](double x) {
                           const double c = std::cosh(x);
                           return 2.0 * a2 * std::tanh(x) / (c * c);
                       };
                       p.asymptote_lo = Asymptote{0.0, 0.0};
                       p.asymptote_hi = Asymptote{0.0, 0.0};
                       p.infimum = {-a2, 0.0};
                   },
                   [&](const builtin::CoulombCentrifugal& k) {
                       require_positive(k.Z, "coulomb Z");
                       if (k.l < 0) throw InvalidParameterError("coulomb l must be a non-negative integer");
                       const double centrifugal = b2 * k.l * (k.l + 1.0);
                       const double Z = k.Z;
                       p.value = [centrifugal, Z](double x) { return (centrifugal / x - Z) / x; };
                       p.derivative = [centrifugal, Z](double x) { return (Z - 2.0 * centrifugal / x) / (x * x); };
                       p.domain = {0.0, kInf};
                       if (k.l == 0) {
                           p.infimum = {-kInf, 0.0};
                           p.asymptote_hi = Asymptote{0.0, 0.0};
                       } else {
                           const double xm = 2.0 * centrifugal / Z;
                           p.infimum = {-Z * Z / (4.0 * centrifugal), xm};
                           p.asymptote_hi = Asymptote{0.0, xm};
                       }
                   },
                   [&](const builtin::GaussianWell& k) {
                       require_positive(k.V0, "gaussian V0");
                       require_positive(k.width, "gaussian width");
                       const double V0 = k.V0;
                       const double w = k.width;
                       p.value = [V0, w](double x) {
                           const double u = x / w;
                           return -V0 * std::exp(-u * u);
                       };
                       p.derivative = [V0, w](double x) {
                           const double u = x / w;
                           return 2.0 * V0 * u / w * std::exp(-u * u);
                       };
                       p.asymptote_lo = Asymptote{0.0, 0.0};
                       p.asymptote_hi = Asymptote{0.0, 0.0};
                       p.infimum = {-V0, 0.0};
                   },
                   [&](const builtin::Quartic& k) {
                       require_positive(k.c, "quartic c");
                       const double c = k.c;
                       p.value = [c](double x) {
                           const double x2 = x * x;
                           return c * x2 * x2;
                       };
                       p.derivative = [c](double x) { return 4.0 * c * x * x * x; };
                       p.infimum = {0.0, 0.0};
                   },
               },
               kind);
    return Potential(std::move(p));
}

namespace {

// Probes V along x_k = origin + direction * start * 2^k. Returns the limit if
// V settles, nullopt if it grows without bound; throws if it falls without bound.
std::optional<Asymptote> probe_tail(const expr::Expr& v, double direction, double start) {
    std::vector<double> xs;
    std::vector<double> vs;
    for (int k = 0; k <= 24; ++k) {
        const double x = direction * start * std::ldexp(1.0, k);
        double val;
        try {
            val = v(x);
        } catch (const DomainError&) {
            break;
        }
        xs.push_back(x);
        vs.push_back(val);
        if (std::fabs(val) > 1e150) break;
    }
    if (vs.size() < 4) return std::nullopt;
    const std::size_t m = vs.size();
    const double last = vs[m - 1];
    const double d1 = vs[m - 1] - vs[m - 2];
    const double d0 = vs[m - 2] - vs[m - 3];
    if (std::fabs(d1) > 1e-6 * std::max(1.0, std::fabs(last))) {
        if (last < vs[0] && d1 < 0.0 && d0 < 0.0) throw ConstructionError("potential is unbounded below at infinity");
        return std::nullopt;
    }
    double limit = last;
    // Aitken extrapolation for algebraic tails such as -1/x.
    if (d0 != 0.0 && d1 != 0.0 && (d0 > 0) == (d1 > 0)) {
        const double r = d1 / d0;
        if (r > 0.0 && r < 1.0) limit = last + d1 * r / (1.0 - r);
    }
    // Tail point: first probe after the last monotonicity violation.
    std::size_t tail = 0;
    for (std::size_t i = 2; i < m; ++i) {
        const double a = vs[i - 1] - vs[i - 2];
        const double b = vs[i] - vs[i - 1];
        if (a != 0.0 && b != 0.0 && (a > 0) != (b > 0)) tail = i - 1;
    }
    return Asymptote{limit, xs[tail]};
}

}  // namespace

Potential make_from_expression(const expr::Expr& ast, Interval domain, const UnitSystem& units,
                               const ExpressionOptions& options) {
    (void)units;
    if (!(domain.lo < domain.hi)) throw InvalidParameterError("domain must satisfy lo < hi");
    if (options.samples < 16) throw InvalidParameterError("expression probing needs at least 16 samples");

    const expr::Expr dv = expr::differentiate(ast);
    Potential::Parts p;
    p.description = ast.to_string();
    p.value = [ast](double x) { return ast(x); };
    p.derivative = [dv](double x) { return dv(x); };
    p.domain = domain;

    const double w_lo = std::isfinite(domain.lo) ? domain.lo : std::min(-options.horizon, domain.hi - options.horizon);
    const double w_hi = std::isfinite(domain.hi) ? domain.hi : std::max(options.horizon, domain.lo + options.horizon);
    const double span = w_hi - w_lo;

    std::vector<double> xs;
    const int n = options.samples;
    for (int i = 0; i < n; ++i) {
        const double x = w_lo + span * i / (n - 1);
        if (domain.contains(x)) xs.push_back(x);
    }
    for (int k = 2; k <= 40; ++k) {
        if (std::isfinite(domain.lo)) xs.push_back(domain.lo + span * std::ldexp(1.0, -k));
        if (std::isfinite(domain.hi)) xs.push_back(domain.hi - span * std::ldexp(1.0, -k));
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<double> vs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        try {
            vs[i] = ast(xs[i]);
        } catch (const DomainError& e) {
            throw DomainError("probing V at x=" + fmt(xs[i]) + ": " + e.what());
        }
    }

    const auto imin = static_cast<std::size_t>(std::min_element(vs.begin(), vs.end()) - vs.begin());
    const bool at_lo_edge = imin == 0 && std::isfinite(domain.lo);
    const bool at_hi_edge = imin + 1 == xs.size() && std::isfinite(domain.hi);
    if ((at_lo_edge || at_hi_edge) && vs[imin] < -1e8) {
        p.infimum = {-kInf, at_lo_edge ? domain.lo : domain.hi};
    } else if (imin == 0 || imin + 1 == xs.size()) {
        p.infimum = {vs[imin], xs[imin]};
    } else {
        auto f = [&ast](double x) { return ast(x); };
        const auto [xm, vm] = boost::math::tools::brent_find_minima(f, xs[imin - 1], xs[imin + 1], 52);
        p.infimum = vm <= vs[imin] ? Infimum{vm, xm} : Infimum{vs[imin], xs[imin]};
    }

    if (!std::isfinite(domain.lo)) p.asymptote_lo = probe_tail(ast, -1.0, options.horizon);
    if (!std::isfinite(domain.hi)) p.asymptote_hi = probe_tail(ast, +1.0, options.horizon);
    return Potential(std::move(p));
}

Potential make_family(const FamilyCoeffs& coeffs, const UnitSystem& units, const FamilyOptions& options) {
    (void)units;
    if (!(coeffs.A >= 0.0)) throw InvalidParameterError("family A must be non-negative");
    if (!(coeffs.sigma(coeffs.s0) > 0.0)) throw ConstructionError("family: sigma(s0) must be positive");

    auto traj = std::make_shared<const RiccatiTrajectory>(coeffs, options);

    // Two refinements must agree: compare against a half-step integration.
    {
        const RiccatiTrajectory check(coeffs, options, 0.5);
        const double lo = std::max(traj->x_min(), check.x_min());
        const double hi = std::min(traj->x_max(), check.x_max());
        for (int i = 1; i < 200; ++i) {
            const double x = lo + (hi - lo) * i / 200.0;
            const double a = traj->s(x);
            if (std::fabs(a) > 1e6) continue;
            const double b = check.s(x);
            if (std::fabs(a - b) > options.verify_tolerance * std::max(1.0, std::fabs(a)))
                throw ConstructionError("family: ODE refinements disagree at x=" + fmt(x));
        }
    }

    Potential::Parts p;
    p.description = "family(A=" + fmt(coeffs.A) + ",B=" + fmt(coeffs.B) + ",C=" + fmt(coeffs.C) +
                    ",a2=" + fmt(coeffs.a2) + ",a1=" + fmt(coeffs.a1) + ",a0=" + fmt(coeffs.a0) +
                    ",s0=" + fmt(coeffs.s0) + ")";
    p.family = coeffs;
    p.value = [traj, coeffs](double x) { return coeffs.value(traj->s(x)); };
    p.derivative = [traj, coeffs](double x) {
        const double s = traj->s(x);
        return (2.0 * coeffs.A * coeffs.A * s + coeffs.B) * coeffs.sigma(s);
    };
    p.domain = {traj->fixed_lo() ? -kInf : traj->x_min(), traj->fixed_hi() ? kInf : traj->x_max()};

    // V is quadratic in s and s is increasing in x.
    const double s_lo = traj->s(traj->x_min());
    const double s_hi = traj->s(traj->x_max());
    double x_inf;
    if (coeffs.A > 0.0 && -coeffs.B / (2.0 * coeffs.A * coeffs.A) > s_lo &&
        -coeffs.B / (2.0 * coeffs.A * coeffs.A) < s_hi) {
        const double sm = -coeffs.B / (2.0 * coeffs.A * coeffs.A);
        double a = traj->x_min();
        double b = traj->x_max();
        for (int i = 0; i < 200 && b - a > 1e-15 * std::max(1.0, std::fabs(a)); ++i) {
            const double mid = 0.5 * (a + b);
            (traj->s(mid) < sm ? a : b) = mid;
        }
        x_inf = 0.5 * (a + b);
        p.infimum = {coeffs.value(sm), x_inf};
    } else {
        const double v_lo = coeffs.value(s_lo);
        const double v_hi = coeffs.value(s_hi);
        x_inf = v_lo < v_hi ? traj->x_min() : traj->x_max();
        p.infimum = {std::min(v_lo, v_hi), x_inf};
    }
    if (traj->fixed_lo()) p.asymptote_lo = Asymptote{coeffs.value(*traj->fixed_lo()), x_inf};
    if (traj->fixed_hi()) p.asymptote_hi = Asymptote{coeffs.value(*traj->fixed_hi()), x_inf};
    return Potential(std::move(p));
}

double exact_level(const Potential& potential, int n, const UnitSystem& units) {
    if (n < 0) throw InvalidParameterError("level index must be non-negative");
    if (!potential.has_exact_spectrum())
        throw NoExactSpectrumError("no closed-form spectrum for " + potential.description());
    const double beta = units.beta();
    return std::visit(
        overloaded{
            [&](const builtin::Harmonic& k) { return std::sqrt(2.0) * k.A * beta * (n + 0.5); },
            [&](const builtin::HyperbolicWell& k) {
                const double u = k.A / beta;
                const double lambda = -0.5 + std::sqrt(0.25 + u * u);
                if (!(n < lambda))
                    throw LevelDoesNotExistError("hyperbolic well has no level n=" + std::to_string(n));
                return -beta * beta * (lambda - n) * (lambda - n);
            },
            [&](const builtin::CoulombCentrifugal& k) {
                const double m = n + k.l + 1.0;
                return -k.Z * k.Z / (4.0 * beta * beta * m * m);
            },
            [&](const auto&) -> double { throw NoExactSpectrumError("no closed-form spectrum"); },
        },
        *potential.builtin());
}

std::optional<int> exact_level_count(const Potential& potential, const UnitSystem& units) {
    if (!potential.has_exact_spectrum())
        throw NoExactSpectrumError("no closed-form spectrum for " + potential.description());
    if (const auto* k = std::get_if<builtin::HyperbolicWell>(&*potential.builtin())) {
        const double u = k->A / units.beta();
        const double lambda = -0.5 + std::sqrt(0.25 + u * u);
        // lambda - n within rounding of 0 is the unnormalizable zero-energy state.
        const double top = lambda - 1e-9 * std::max(1.0, lambda);
        return top <= 0.0 ? 0 : static_cast<int>(std::ceil(top));
    }
    return std::nullopt;
}

double family_delta1_closed_form(const FamilyCoeffs& coeffs, const UnitSystem& units) {
    if (!(coeffs.A >= 0.0)) throw InvalidParameterError("family A must be non-negative");
    if (coeffs.A == 0.0) {
        if (coeffs.a2 == 0.0) throw InvalidParameterError("delta1 undefined for A = 0 and a2 = 0");
        return std::copysign(kInf, coeffs.a2);
    }
    return units.beta() * coeffs.a2 / (8.0 * coeffs.A);
}

}  // namespace wkbq
