#include "wkbq/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "wkbq/errors.hpp"
#include "wkbq/gauss_legendre.hpp"

namespace wkbq {

void QuadConfig::validate() const {
    if (base_nodes < 8) throw InvalidParameterError("base_nodes must be at least 8");
    if (max_refinements < 1 || max_refinements > 16) throw InvalidParameterError("max_refinements must be in [1, 16]");
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw InvalidParameterError("rel_tol must be in (0, 1)");
    if (!(eps_step_fraction > 0.0 && eps_step_fraction < 0.1))
        throw InvalidParameterError("eps_step_fraction must be in (0, 0.1)");
}

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kScanPoints = 256;
constexpr int kTailScanPoints = 64;

// Seed strictly inside the allowed region, as close to the infimum as possible.
double seed_point(const Potential& pot, double eps) {
    const Interval& dom = pot.domain();
    const double loc = pot.infimum().location;
    if (dom.contains(loc) && pot(loc) < eps) return loc;
    for (double edge : {dom.lo, dom.hi}) {
        if (!std::isfinite(edge) || std::fabs(loc - edge) > 1e-12 * std::max(1.0, std::fabs(edge))) continue;
        const double dir = edge == dom.lo ? 1.0 : -1.0;
        double d = 1e-6 * std::max(1.0, std::fabs(edge));
        for (int j = 0; j < 24; ++j, d *= 4.0) {
            const double x = edge + dir * d;
            if (!dom.contains(x)) break;
            if (pot(x) < eps) return x;
        }
    }
    throw NoAllowedRegionError("no point with V < eps near the infimum location");
}

struct Walk {
    double inside;
    double outside;
    bool edge;
};

Walk walk_out(const Potential& pot, double eps, double x0, double dir) {
    const double edge = dir > 0 ? pot.domain().hi : pot.domain().lo;
    double a = x0;
    double step = 1e-3 * std::max(1.0, std::fabs(x0));
    for (int i = 0; i < 2000; ++i) {
        double b = a + dir * step;
        if (std::isfinite(edge) && (dir > 0 ? b >= edge : b <= edge)) {
            for (int j = 0; j < 2000; ++j) {
                b = a + 0.5 * (edge - a);
                if (b == a || b == edge || std::fabs(edge - a) <= 1e-15 * std::max(1.0, std::fabs(edge)))
                    return {a, edge, true};
                if (!(pot(b) < eps)) return {a, b, false};
                a = b;
            }
            return {a, edge, true};
        }
        if (!(pot(b) < eps)) return {a, b, false};
        a = b;
        step *= 2.0;
        if (step > 1e15) break;
    }
    throw UnboundEnergyError("V stays below eps without bound");
}

double bisect_crossing(const Potential& pot, double eps, double inside, double outside) {
    double a = inside;
    double b = outside;
    for (int i = 0; i < 2000; ++i) {
        const double m = a + 0.5 * (b - a);
        if (m == a || m == b) break;
        if (std::fabs(b - a) <= 1e-14 * std::max(std::fabs(a), std::fabs(b))) break;
        (pot(m) < eps ? a : b) = m;
    }
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    double x = std::fabs(pot(a) - eps) <= std::fabs(pot(b) - eps) ? a : b;
    double r = std::fabs(pot(x) - eps);
    for (int i = 0; i < 4 && r > 0.0; ++i) {
        const double dv = pot.derivative(x);
        if (!(dv != 0.0) || !std::isfinite(dv)) break;
        const double x1 = x - (pot(x) - eps) / dv;
        if (!(x1 >= lo && x1 <= hi)) break;
        const double r1 = std::fabs(pot(x1) - eps);
        if (!(r1 < r)) break;
        x = x1;
        r = r1;
    }
    return x;
}

enum class Kind { action, j };

// sqrt(eps - V) or V'^2 / sqrt(eps - V). Close to a turning point eps - V is
// taken as the integral of V' from the node to the turning point.
class Integrand {
public:
    Integrand(const Potential& pot, double eps, Kind kind) : pot_(pot), eps_(eps), kind_(kind) {}

    // `offset` is the signed distance from the anchor (turning point or edge) to x;
    // using it instead of x - anchor keeps the rounding of x out of the gap.
    double at(double x, double anchor, double offset, bool near_turning_point) const {
        const double v = pot_(x);
        double gap = eps_ - v;
        if (near_turning_point && std::fabs(gap) < 0.125 * std::max(std::fabs(eps_), std::fabs(v)))
            gap = rise(anchor, offset);
        if (!(gap > 0.0)) return 0.0;
        if (kind_ == Kind::action) return std::sqrt(gap);
        const double dv = pot_.derivative(x);
        return dv * dv / std::sqrt(gap);
    }

private:
    // V(anchor) - V(anchor + offset) as the integral of V' over the offset.
    double rise(double anchor, double offset) const {
        static const GaussLegendreRule& gl = gauss_legendre(20);
        const double half = 0.5 * offset;
        double s = 0.0;
        for (std::size_t i = 0; i < gl.size(); ++i) s += gl.weights[i] * pot_.derivative(anchor + half * (1.0 + gl.nodes[i]));
        return -s * half;
    }

    const Potential& pot_;
    double eps_;
    Kind kind_;
};

double neumaier_sum(const std::vector<double>& v) {
    double s = 0.0;
    double c = 0.0;
    for (double x : v) {
        const double t = s + x;
        c += std::fabs(s) >= std::fabs(x) ? (s - t) + x : (x - t) + s;
        s = t;
    }
    return s + c;
}

double integrate_fixed(const Potential& pot, const TurningPoints& tp, double eps, Kind kind, int n, Execution exec) {
    const GaussLegendreRule& rule = gauss_legendre(n);
    const Integrand f(pot, eps, kind);
    const double hw = 0.5 * (tp.x_plus - tp.x_minus);
    const std::size_t m = rule.size();

    if (!tp.edge_minus && !tp.edge_plus) {
        // x = mid + hw sin(pi t / 2), nodes measured from the nearer turning point.
        std::vector<double> terms(m);
        detail::parallel_for(
            static_cast<std::ptrdiff_t>(m),
            [&](std::ptrdiff_t k) {
                const auto i = static_cast<std::size_t>(k);
                const double phi = 0.5 * kPi * rule.complement[i];
                const double s = std::sin(0.5 * phi);
                const double d = 2.0 * hw * s * s;
                const double jac = hw * std::sin(phi) * 0.5 * kPi;
                const bool right = rule.nodes[i] >= 0.0;
                const double anchor = right ? tp.x_plus : tp.x_minus;
                const double offset = right ? -d : d;
                terms[i] = rule.weights[i] * jac * f.at(anchor + offset, anchor, offset, true);
            },
            exec, 64);
        return neumaier_sum(terms);
    }

    // Split at the midpoint. A turning-point half uses a quarter-sine map; an
    // edge half uses x = edge -/+ u^2, which absorbs power-law edge singularities.
    std::vector<double> terms(2 * m);
    detail::parallel_for(
        static_cast<std::ptrdiff_t>(2 * m),
        [&](std::ptrdiff_t k) {
            const auto i = static_cast<std::size_t>(k) % m;
            const bool right = static_cast<std::size_t>(k) < m;
            const double dir = right ? -1.0 : 1.0;  // from the anchor towards mid
            const double anchor = right ? tp.x_plus : tp.x_minus;
            const bool edge = right ? tp.edge_plus : tp.edge_minus;
            const double t = rule.nodes[i];
            if (edge) {
                const double one_plus_t = t < 0.0 ? rule.complement[i] : 1.0 + t;
                const double root = std::sqrt(hw);
                const double u = 0.5 * root * one_plus_t;
                const double offset = dir * u * u;
                terms[k] = rule.weights[i] * u * root * f.at(anchor + offset, anchor, offset, false);
            } else {
                const double one_minus_t = t >= 0.0 ? rule.complement[i] : 1.0 - t;
                const double phi = 0.25 * kPi * one_minus_t;
                const double s = std::sin(0.5 * phi);
                const double d = 2.0 * hw * s * s;
                const double jac = hw * std::sin(phi) * 0.25 * kPi;
                terms[k] = rule.weights[i] * jac * f.at(anchor + dir * d, anchor, dir * d, true);
            }
        },
        exec, 64);
    return neumaier_sum(terms);
}

QuadResult refine(const Potential& pot, double eps, Kind kind, const QuadConfig& cfg, Execution exec) {
    cfg.validate();
    const TurningPoints tp = find_turning_points(pot, eps);
    int n = cfg.base_nodes;
    double prev = integrate_fixed(pot, tp, eps, kind, n, exec);
    int growth = 0;
    for (int k = 1; k <= cfg.max_refinements; ++k) {
        n *= 2;
        const double cur = integrate_fixed(pot, tp, eps, kind, n, exec);
        if (std::fabs(cur - prev) <= cfg.rel_tol * std::fabs(cur)) return {cur, n, false};
        if (kind == Kind::j) {
            const bool grew = (cur > 0.0) == (prev > 0.0) && std::fabs(cur) > 1.1 * std::fabs(prev);
            growth = grew ? growth + 1 : 0;
            if (growth >= 3) return {std::copysign(kInf, cur), n, true};
        }
        if (k == cfg.max_refinements)
            throw QuadratureFailure(kind == Kind::action ? "action integral did not converge"
                                                         : "J integral did not converge",
                                    prev, cur);
        prev = cur;
    }
    throw QuadratureFailure("quadrature did not converge", prev, prev);
}

}  // namespace

TurningPoints find_turning_points(const Potential& pot, double eps) {
    if (!std::isfinite(eps)) throw InvalidParameterError("energy must be finite");
    if (!(eps > pot.infimum().value)) throw NoAllowedRegionError("eps is not above V_min");
    if (const auto thr = pot.threshold(); thr && !(eps < *thr))
        throw UnboundEnergyError("eps is at or above the dissociation threshold");

    const double x0 = seed_point(pot, eps);
    const Walk right = walk_out(pot, eps, x0, 1.0);
    const Walk left = walk_out(pot, eps, x0, -1.0);

    TurningPoints tp{left.outside, right.outside, left.edge, right.edge};
    if (!left.edge) tp.x_minus = bisect_crossing(pot, eps, left.inside, left.outside);
    if (!right.edge) tp.x_plus = bisect_crossing(pot, eps, right.inside, right.outside);
    if (!(tp.x_minus < tp.x_plus)) throw NoAllowedRegionError("allowed region is empty at this energy");

    const double width = tp.x_plus - tp.x_minus;
    for (int i = 0; i < kScanPoints; ++i) {
        const double x = tp.x_minus + width * (i + 0.5) / kScanPoints;
        if (!(pot(x) < eps)) throw MultiWellError("V - eps changes sign more than twice; multi-well potentials are not supported");
    }
    const Interval& dom = pot.domain();
    for (int i = 1; i <= kTailScanPoints; ++i) {
        const double d = 2.0 * width * i / kTailScanPoints;
        for (const auto& [x, edge] : {std::pair{tp.x_plus + d, tp.edge_plus}, std::pair{tp.x_minus - d, tp.edge_minus}}) {
            if (edge || !dom.contains(x)) continue;
            if (pot(x) < eps) throw MultiWellError("V - eps changes sign more than twice; multi-well potentials are not supported");
        }
    }
    return tp;
}

QuadResult action_integral(const Potential& potential, double eps, const QuadConfig& cfg, Execution exec) {
    return refine(potential, eps, Kind::action, cfg, exec);
}

double action(const Potential& potential, double eps, const QuadConfig& cfg, const UnitSystem& units,
              Execution exec) {
    return action_integral(potential, eps, cfg, exec).value / (kPi * units.beta());
}

QuadResult j_integral(const Potential& potential, double eps, const QuadConfig& cfg, Execution exec) {
    return refine(potential, eps, Kind::j, cfg, exec);
}

double j_integral_fixed(const Potential& potential, double eps, int nodes, Execution exec) {
    if (nodes < 1) throw InvalidParameterError("node count must be positive");
    const TurningPoints tp = find_turning_points(potential, eps);
    return integrate_fixed(potential, tp, eps, Kind::j, nodes, exec);
}

SecondDerivative second_eps_derivative(const std::function<double(double)>& f, double eps, double scale,
                                       const QuadConfig& cfg, std::optional<double> upper, Execution exec) {
    cfg.validate();
    const double h = cfg.eps_step_fraction * std::fabs(scale);
    if (!(h > 0.0) || !std::isfinite(h)) throw InvalidParameterError("derivative step must be positive and finite");
    const bool one_sided = upper && !(eps + 2.0 * h < *upper);

    static constexpr std::array<int, 5> centred{-2, -1, 0, 1, 2};
    static constexpr std::array<int, 6> backward{0, -1, -2, -3, -4, -6};
    const int* offsets = one_sided ? backward.data() : centred.data();
    const std::size_t count = one_sided ? backward.size() : centred.size();

    std::vector<double> v(count);
    detail::parallel_for(
        static_cast<std::ptrdiff_t>(count), [&](std::ptrdiff_t i) { v[i] = f(eps + offsets[i] * h); }, exec);

    SecondDerivative r{};
    r.one_sided = one_sided;
    if (!one_sided) {
        r.fine = (v[3] - 2.0 * v[2] + v[1]) / (h * h);
        r.coarse = (v[4] - 2.0 * v[2] + v[0]) / (4.0 * h * h);
    } else {
        r.fine = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / (h * h);
        r.coarse = (2.0 * v[0] - 5.0 * v[2] + 4.0 * v[4] - v[5]) / (4.0 * h * h);
    }
    r.value = (4.0 * r.fine - r.coarse) / 3.0;
    return r;
}

}  // namespace wkbq
