// Taylor-series integration of ds/dx = a2 s^2 + a1 s + a0.
//
// The right-hand side is a polynomial in s, so the Taylor coefficients of s
// around any point follow from a Cauchy-product recursion. Each step keeps its
// polynomial; evaluating s(x) inside a step is a Horner sum on that polynomial,
// which makes the dense output as accurate as the step itself.

#include <algorithm>
#include <cmath>

#include "wkbq/errors.hpp"
#include "wkbq/potential.hpp"

namespace wkbq {

namespace {

constexpr double kBlowUp = 1e10;
constexpr double kMaxStep = 0.5;
constexpr int kMaxSteps = 200000;

std::vector<double> taylor_coefficients(const FamilyCoeffs& c, double s, int order) {
    std::vector<double> t(static_cast<std::size_t>(order) + 1, 0.0);
    t[0] = s;
    for (int k = 0; k < order; ++k) {
        double conv = 0.0;
        for (int i = 0; i <= k; ++i) conv += t[i] * t[k - i];
        double rhs = c.a2 * conv + c.a1 * t[k];
        if (k == 0) rhs += c.a0;
        t[k + 1] = rhs / (k + 1);
    }
    return t;
}

double horner(const std::vector<double>& t, double h) {
    double acc = 0.0;
    for (auto it = t.rbegin(); it != t.rend(); ++it) acc = acc * h + *it;
    return acc;
}

// Jorba-Zou step: the last two coefficients bound the truncation error.
double step_size(const std::vector<double>& t, double scale) {
    const int order = static_cast<int>(t.size()) - 1;
    const double tol = 1e-16 * std::max(1.0, std::fabs(t[0]));
    double h = kMaxStep;
    for (int k : {order - 1, order}) {
        const double ck = std::fabs(t[k]);
        if (ck > 0.0) h = std::min(h, std::pow(tol / ck, 1.0 / k));
    }
    return h * scale;
}

// Root of sigma closest to s; used as the saturation value.
double nearest_sigma_root(const FamilyCoeffs& c, double s) {
    if (c.a2 != 0.0) {
        const double disc = c.a1 * c.a1 - 4.0 * c.a2 * c.a0;
        if (disc >= 0.0) {
            const double q = -0.5 * (c.a1 + std::copysign(std::sqrt(disc), c.a1));
            const double r1 = q / c.a2;
            const double r2 = q != 0.0 ? c.a0 / q : r1;
            return std::fabs(r1 - s) < std::fabs(r2 - s) ? r1 : r2;
        }
        return s;
    }
    if (c.a1 != 0.0) return -c.a0 / c.a1;
    return s;
}

}  // namespace

RiccatiTrajectory::RiccatiTrajectory(const FamilyCoeffs& coeffs, const FamilyOptions& options, double step_scale)
    : coeffs_(coeffs), options_(options) {
    if (!(coeffs.sigma(coeffs.s0) > 0.0))
        throw ConstructionError("family: sigma(s0) must be positive");
    if (!(options.horizon > 0.0)) throw InvalidParameterError("family: horizon must be positive");
    if (options.taylor_order < 4) throw InvalidParameterError("family: Taylor order too small");
    integrate(+1.0, step_scale);
    integrate(-1.0, step_scale);
    std::sort(segments_.begin(), segments_.end(), [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
}

void RiccatiTrajectory::integrate(double direction, double step_scale) {
    double x = 0.0;
    double s = coeffs_.s0;
    for (int step = 0;; ++step) {
        if (step > kMaxSteps) throw ConstructionError("family: ODE step limit exceeded");
        if (std::fabs(x) >= options_.horizon) break;

        std::vector<double> t = taylor_coefficients(coeffs_, s, options_.taylor_order);
        double h = std::min(step_size(t, step_scale), options_.horizon - std::fabs(x));
        double s_new = horner(t, direction * h);
        if (!std::isfinite(s_new)) throw ConstructionError("family: ODE step produced a non-finite value");

        if (!(coeffs_.sigma(s_new) > 0.0) || s_new == s) {
            // Saturated on a root of sigma: constant continuation beyond x.
            const double root = nearest_sigma_root(coeffs_, s);
            (direction > 0 ? fixed_hi_ : fixed_lo_) = root;
            break;
        }

        const double x_new = x + direction * h;
        segments_.push_back({x, std::min(x, x_new), std::max(x, x_new), std::move(t)});
        x = x_new;
        s = s_new;
        if (std::fabs(s) > kBlowUp) break;
    }
    (direction > 0 ? x_max_ : x_min_) = x;
}

double RiccatiTrajectory::s(double x) const {
    if (x <= x_min_) {
        if (fixed_lo_ && x < x_min_) return *fixed_lo_;
        if (x < x_min_) throw DomainError("family: x below the integrated trajectory");
    }
    if (x >= x_max_) {
        if (fixed_hi_ && x > x_max_) return *fixed_hi_;
        if (x > x_max_) throw DomainError("family: x above the integrated trajectory");
    }
    if (segments_.empty()) return coeffs_.s0;
    auto it = std::upper_bound(segments_.begin(), segments_.end(), x,
                               [](double v, const Segment& seg) { return v < seg.lo; });
    if (it != segments_.begin()) --it;
    return horner(it->coeffs, x - it->x0);
}

}  // namespace wkbq
