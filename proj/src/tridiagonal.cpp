#include "wkbq/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wkbq/errors.hpp"

namespace wkbq {

namespace {

struct Prepared {
    const std::vector<double>& diag;
    std::vector<double> off2;
    double pivmin;
};

Prepared prepare(const SymTridiagonal& t) {
    if (t.diag.empty()) throw InvalidParameterError("empty matrix");
    if (t.off.size() + 1 != t.diag.size()) throw InvalidParameterError("off-diagonal must have n - 1 entries");
    Prepared p{t.diag, std::vector<double>(t.off.size()), 0.0};
    double m = 1.0;
    for (std::size_t i = 0; i < t.off.size(); ++i) {
        p.off2[i] = t.off[i] * t.off[i];
        m = std::max(m, p.off2[i]);
    }
    p.pivmin = std::numeric_limits<double>::min() * m;
    return p;
}

int count_below(const Prepared& p, double x) {
    const std::size_t n = p.diag.size();
    int count = 0;
    double q = p.diag[0] - x;
    if (std::fabs(q) < p.pivmin) q = -p.pivmin;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        q = p.diag[i] - x - p.off2[i - 1] / q;
        if (std::fabs(q) < p.pivmin) q = -p.pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

}  // namespace

int sturm_count(const SymTridiagonal& t, double x) { return count_below(prepare(t), x); }

std::vector<double> lowest_eigenvalues(const SymTridiagonal& t, int count, Execution exec) {
    const Prepared p = prepare(t);
    const std::size_t n = t.diag.size();
    const int m = std::min<int>(count, static_cast<int>(n));
    if (m <= 0) return {};

    double lo = std::numeric_limits<double>::max();
    double hi = -std::numeric_limits<double>::max();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::fabs(t.off[i - 1]) : 0.0) + (i + 1 < n ? std::fabs(t.off[i]) : 0.0);
        lo = std::min(lo, t.diag[i] - r);
        hi = std::max(hi, t.diag[i] + r);
    }
    const double pad = 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(lo), std::fabs(hi)) + p.pivmin;
    lo -= pad;
    hi += pad;

    std::vector<double> out(static_cast<std::size_t>(m));
    detail::parallel_for(
        m,
        [&](std::ptrdiff_t k) {
            // k-th eigenvalue: the smallest x with count_below(x) > k.
            double a = lo;
            double b = hi;
            for (int it = 0; it < 200; ++it) {
                const double mid = a + 0.5 * (b - a);
                if (mid == a || mid == b) break;
                if (b - a <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(a), std::fabs(b)))
                    break;
                (count_below(p, mid) > k ? b : a) = mid;
            }
            out[static_cast<std::size_t>(k)] = a + 0.5 * (b - a);
        },
        exec, 2, true);
    return out;
}

}  // namespace wkbq
