#include "wkbq/gauss_legendre.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "wkbq/errors.hpp"

namespace wkbq {

namespace {

struct Node {
    double t;
    double comp;
    double w;
};

constexpr int kAsymptoticMinNodes = 1024;
constexpr double kAsymptoticMinScale = 60.0;  // n sin(phi) where the interior expansion takes over
constexpr int kAsymptoticMaxTerms = 40;

struct Eval {
    double p;     // P_n(cos phi)
    double dphi;  // dP_n / dphi
};

// Three-term recurrence in u = 1 - t = 2 sin^2(phi/2) on the differences
// D_j = P_j - P_{j-1}, which keeps full relative accuracy near t = 1.
Eval recurrence(int n, double phi) {
    const double half = std::sin(0.5 * phi);
    const double u = 2.0 * half * half;
    double p = 1.0;
    double d = -u;
    p += d;
    for (int j = 2; j <= n; ++j) {
        d = ((j - 1.0) * d - (2.0 * j - 1.0) * u * p) / j;
        p += d;
    }
    // dP/dphi = -n (P_{n-1} - t P_n) / sin(phi) = -n (u P_n - D_n) / sin(phi)
    return {p, -n * (u * p - d) / std::sin(phi)};
}

// P_n(cos phi) = C_n sum_m h_m cos((n+m+1/2) phi - (m+1/2) pi/2) / (2 sin phi)^(m+1/2),
// h_0 = 1, h_m = h_{m-1} (m-1/2)^2 / (m (n+m+1/2)), C_n = (4/pi) prod_j j / (j+1/2).
Eval interior(int n, double phi, double cn) {
    const double pi = std::numbers::pi;
    const double two_s = 2.0 * std::sin(phi);
    const double two_c = 2.0 * std::cos(phi);
    double h = 1.0;
    double scale = 1.0 / std::sqrt(two_s);
    double p = 0.0;
    double d = 0.0;
    for (int m = 0; m < kAsymptoticMaxTerms; ++m) {
        const double a = n + m + 0.5;
        const double ph = a * phi - (m + 0.5) * 0.5 * pi;
        const double c = std::cos(ph);
        const double term = h * scale;
        p += term * c;
        d -= term * (a * std::sin(ph) + (m + 0.5) * two_c * c / two_s);
        if (std::fabs(term) <= 1e-18) break;
        h *= (m + 0.5) * (m + 0.5) / ((m + 1.0) * (n + m + 1.5));
        scale /= two_s;
    }
    return {cn * p, cn * d};
}

// k-th root (descending) of P_n, refined in phi where t = cos phi. `cn` is
// zero when the rule is small enough for the three-term recurrence throughout.
Node legendre_root(int n, int k, double cn) {
    const double pi = std::numbers::pi;
    if (2 * k + 1 == n) {
        double p0 = 1.0;
        double p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = -(j - 1.0) * p2 / j;
        }
        // P_n'(0) = n P_{n-1}(0)
        const double dp = n * p1;
        return {0.0, 1.0, 2.0 / (dp * dp)};
    }
    double phi = pi * (4.0 * k + 3.0) / (4.0 * n + 2.0);
    phi += 1.0 / (8.0 * n * n * std::tan(phi));
    const bool asymptotic = cn > 0.0 && n * std::sin(phi) >= kAsymptoticMinScale;
    const auto eval = [&](double x) { return asymptotic ? interior(n, x, cn) : recurrence(n, x); };
    for (int it = 0; it < 100; ++it) {
        const Eval e = eval(phi);
        const double step = -e.p / e.dphi;
        phi += step;
        if (std::fabs(step) <= 1e-14 * phi) break;
    }
    const Eval e = eval(phi);
    const double half = std::sin(0.5 * phi);
    return {std::cos(phi), 2.0 * half * half, 2.0 / (e.dphi * e.dphi)};
}

double asymptotic_constant(int n) {
    if (n < kAsymptoticMinNodes) return 0.0;
    long double prod = 4.0L / std::numbers::pi_v<long double>;
    for (int j = 1; j <= n; ++j) prod *= static_cast<long double>(j) / (j + 0.5L);
    return static_cast<double>(prod);
}

}  // namespace

GaussLegendreRule compute_gauss_legendre(int n, Execution exec) {
    if (n < 1) throw InvalidParameterError("Gauss-Legendre rule needs at least one node");
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.complement.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    const double cn = asymptotic_constant(n);
    detail::parallel_for(
        half,
        [&](std::ptrdiff_t k) {
            const Node node = legendre_root(n, static_cast<int>(k), cn);
            const std::size_t i = static_cast<std::size_t>(k);
            const std::size_t j = static_cast<std::size_t>(n - 1 - k);
            rule.nodes[i] = node.t;
            rule.complement[i] = node.comp;
            rule.weights[i] = node.w;
            rule.nodes[j] = -node.t;
            rule.complement[j] = node.comp;
            rule.weights[j] = node.w;
        },
        exec, 64);
    return rule;
}

const GaussLegendreRule& gauss_legendre(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<const GaussLegendreRule>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<const GaussLegendreRule>(compute_gauss_legendre(n));
    return *slot;
}

}  // namespace wkbq
