#include "wkbq/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "wkbq/errors.hpp"
#include "wkbq/tridiagonal.hpp"

namespace wkbq {

void GridConfig::validate() const {
    if (points < 200) throw InvalidParameterError("grid needs at least 200 points");
    if (!(x_lo < x_hi) || !std::isfinite(x_lo) || !std::isfinite(x_hi))
        throw InvalidParameterError("grid box must satisfy x_lo < x_hi, both finite");
    if (richardson_levels < 1 || richardson_levels > 2) throw InvalidParameterError("richardson_levels must be 1 or 2");
}

namespace {

constexpr double kMinMargin = 5.0;
constexpr double kMinDecay = 20.0;
// Box doublings without a new level before the level count is taken as final.
constexpr int kPatience = 5;

struct Grid {
    double x_lo;
    double h;
    std::vector<double> v;
};

Grid sample(const Potential& pot, double lo, double hi, std::size_t n, Execution exec) {
    Grid g{lo, (hi - lo) / static_cast<double>(n + 1), std::vector<double>(n)};
    detail::parallel_for(
        static_cast<std::ptrdiff_t>(n),
        [&](std::ptrdiff_t i) { g.v[i] = pot(lo + static_cast<double>(i + 1) * g.h); }, exec, 4096);
    return g;
}

SymTridiagonal hamiltonian(const Grid& g, double beta) {
    const double k = beta * beta / (g.h * g.h);
    SymTridiagonal t;
    t.diag.resize(g.v.size());
    for (std::size_t i = 0; i < g.v.size(); ++i) t.diag[i] = 2.0 * k + g.v[i];
    t.off.assign(g.v.size() - 1, -k);
    return t;
}

std::vector<double> grid_eigenvalues(const Grid& g, double beta, int count, Execution exec) {
    return lowest_eigenvalues(hamiltonian(g, beta), count, exec);
}

struct SideCheck {
    bool ok = true;
    double extra = 0.0;  // estimated extension needed
};

// Walks inward from one box edge over the forbidden region of level energy e.
SideCheck check_side(const Grid& g, double e, double beta, bool left, double box_length) {
    const std::size_t n = g.v.size();
    double decay = 0.0;
    std::size_t steps = 0;
    for (; steps < n; ++steps) {
        const double v = g.v[left ? steps : n - 1 - steps];
        if (!(v > e)) break;
        decay += g.h * std::sqrt(v - e) / beta;
    }
    const double distance = g.h * static_cast<double>(steps);
    SideCheck c;
    c.ok = distance >= kMinMargin && decay >= kMinDecay;
    if (c.ok) return c;
    const double v_edge = g.v[left ? 0 : n - 1];
    double need = 0.25 * box_length;
    if (v_edge > e) {
        const double kappa = std::sqrt(v_edge - e) / beta;
        need = std::max(need, std::max(kMinMargin - distance, (kMinDecay - decay) / kappa));
    }
    c.extra = 1.25 * need;
    return c;
}

struct Pass {
    std::vector<OracleLevel> levels;
    SideCheck left;
    SideCheck right;
    int dropped = 0;
};

Pass run_pass(const Potential& pot, const GridConfig& grid, int count, const UnitSystem& units, Execution exec) {
    grid.validate();
    const Interval& dom = pot.domain();
    if (grid.x_lo < dom.lo || grid.x_hi > dom.hi) throw InvalidParameterError("grid box leaves the potential's domain");
    const double beta = units.beta();
    const auto thr = pot.threshold();

    std::vector<std::vector<double>> raw;
    Grid finest{};
    std::size_t n = static_cast<std::size_t>(grid.points);
    for (int level = 0; level <= grid.richardson_levels; ++level) {
        Grid g = sample(pot, grid.x_lo, grid.x_hi, n, exec);
        raw.push_back(grid_eigenvalues(g, beta, count, exec));
        finest = std::move(g);
        n = 2 * n + 1;
    }

    Pass pass;
    const std::size_t available = raw.back().size();
    for (std::size_t k = 0; k < available; ++k) {
        bool bound = true;
        for (const auto& r : raw) bound = bound && k < r.size() && (!thr || r[k] < *thr);
        if (!bound) break;
        OracleLevel lv;
        lv.n = static_cast<int>(k);
        for (const auto& r : raw) lv.grid_energies.push_back(r[k]);
        const auto& e = lv.grid_energies;
        if (grid.richardson_levels == 1) {
            lv.energy = (4.0 * e[1] - e[0]) / 3.0;
            lv.est_error = std::fabs(lv.energy - e[1]);
        } else {
            const double r1 = (4.0 * e[1] - e[0]) / 3.0;
            const double r1_fine = (4.0 * e[2] - e[1]) / 3.0;
            lv.energy = (16.0 * r1_fine - r1) / 15.0;
            lv.est_error = std::fabs(lv.energy - r1_fine);
        }
        pass.levels.push_back(std::move(lv));
    }
    pass.dropped = count - static_cast<int>(pass.levels.size());

    if (!pass.levels.empty()) {
        const double e_top = pass.levels.back().energy;
        const double length = grid.x_hi - grid.x_lo;
        if (grid.x_lo != dom.lo) pass.left = check_side(finest, e_top, beta, true, length);
        if (grid.x_hi != dom.hi) pass.right = check_side(finest, e_top, beta, false, length);
    }
    return pass;
}

// Allowed region at a reference energy, from a coarse scan around the infimum.
std::pair<double, double> initial_box(const Potential& pot) {
    const Interval& dom = pot.domain();
    const Infimum& inf = pot.infimum();
    const auto thr = pot.threshold();
    double e0;
    if (thr) e0 = std::isfinite(inf.value) ? *thr - 0.5 * (*thr - inf.value) : *thr - 1.0;
    else e0 = inf.value + std::max(1.0, std::fabs(inf.value));

    const double c = std::clamp(inf.location, std::max(dom.lo, -1e300), std::min(dom.hi, 1e300));
    const double a = std::max(dom.lo, c - 50.0);
    const double b = std::min(dom.hi, c + 50.0);
    double lo = c;
    double hi = c;
    constexpr int samples = 4001;
    for (int i = 1; i < samples - 1; ++i) {
        const double x = a + (b - a) * i / (samples - 1);
        if (pot(x) < e0) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }
    lo = std::isfinite(dom.lo) ? dom.lo : lo - kMinMargin;
    hi = std::isfinite(dom.hi) ? dom.hi : hi + kMinMargin;
    return {lo, hi};
}

std::size_t finest_points(std::size_t n, int levels) {
    for (int i = 0; i < levels; ++i) n = 2 * n + 1;
    return n;
}

}  // namespace

std::vector<OracleLevel> eigenvalues_grid(const Potential& potential, const GridConfig& grid, int count,
                                          const UnitSystem& units, Execution exec, std::vector<std::string>* notices) {
    if (count < 1) throw InvalidParameterError("count must be positive");
    Pass pass = run_pass(potential, grid, count, units, exec);
    if (!pass.left.ok || !pass.right.ok)
        throw BoxTooSmallError("grid box leaves too little decay margin beyond the turning points of level " +
                               std::to_string(pass.levels.back().n));
    if (pass.dropped > 0 && notices)
        notices->push_back("only " + std::to_string(pass.levels.size()) + " bound levels below the threshold");
    return std::move(pass.levels);
}

ConvergeResult converge(const Potential& potential, int count, double target, const UnitSystem& units,
                        const ConvergeOptions& options, Execution exec) {
    if (count < 1) throw InvalidParameterError("count must be positive");
    if (!(target >= 1e-10)) throw InvalidParameterError("target must be at least 1e-10");
    if (options.initial_points < 200) throw InvalidParameterError("initial_points must be at least 200");

    const Interval& dom = potential.domain();
    auto [lo, hi] = initial_box(potential);
    double h = (hi - lo) / (options.initial_points + 1);

    ConvergeResult result;
    const double beta = units.beta();
    const auto thr = potential.threshold();
    int wanted = count;
    bool searched = false;
    for (int iter = 0; iter < 400; ++iter) {
        const auto n = static_cast<std::size_t>(std::max(200.0, std::round((hi - lo) / h) - 1.0));
        if (finest_points(n, options.richardson_levels) > options.max_points) {
            result.notices.push_back(result.levels.empty() ? "point cap reached before any level was found"
                                                           : "point cap reached; est_error above target");
            return result;
        }
        const GridConfig grid{lo, hi, static_cast<int>(n), options.richardson_levels};
        Pass pass = run_pass(potential, grid, wanted, units, exec);

        if (!pass.left.ok || !pass.right.ok) {
            lo = pass.left.ok ? lo : std::max(dom.lo, lo - pass.left.extra);
            hi = pass.right.ok ? hi : std::min(dom.hi, hi + pass.right.extra);
            continue;
        }
        const int found = static_cast<int>(pass.levels.size());
        if (found < wanted && thr && !searched) {
            // Widen on a single grid, counting levels below the threshold, until
            // the count stops growing or the box reaches the domain or the cap.
            searched = true;
            int best = found;
            int stale = 0;
            double wlo = lo;
            double whi = hi;
            while (stale < kPatience && best < wanted) {
                const double grow = 0.5 * (whi - wlo);
                const double nlo = std::isfinite(dom.lo) && wlo == dom.lo ? wlo : std::max(dom.lo, wlo - grow);
                const double nhi = std::isfinite(dom.hi) && whi == dom.hi ? whi : std::min(dom.hi, whi + grow);
                if (nlo == wlo && nhi == whi) break;
                const auto m = static_cast<std::size_t>(std::round((nhi - nlo) / h) - 1.0);
                if (finest_points(m, options.richardson_levels) > options.max_points) break;
                wlo = nlo;
                whi = nhi;
                const int c = sturm_count(hamiltonian(sample(potential, wlo, whi, m, exec), beta), *thr);
                if (c > best) {
                    best = c;
                    stale = 0;
                    lo = wlo;
                    hi = whi;
                } else {
                    ++stale;
                }
            }
            if (best > found) {
                wanted = std::min(wanted, best);
                continue;
            }
        }
        if (found < wanted) {
            wanted = found;
            if (found == 0) {
                result.notices.push_back("no bound levels below the threshold");
                return result;
            }
        }
        if (wanted < count && result.levels.empty())
            result.notices.push_back("only " + std::to_string(wanted) + " bound levels below the threshold");

        result.levels = std::move(pass.levels);
        result.grid = grid;
        const bool done = std::all_of(result.levels.begin(), result.levels.end(),
                                      [&](const OracleLevel& l) { return l.est_error <= target; });
        if (done) {
            result.converged = true;
            return result;
        }
        h *= 0.5;
    }
    result.notices.push_back("iteration limit reached");
    return result;
}

}  // namespace wkbq
