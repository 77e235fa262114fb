#include "wkbq/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wkbq/errors.hpp"

namespace wkbq {

namespace {

constexpr double kDivergenceLimit = 1e12;

// Energy scale of the well: depth below the threshold, or |V_min| for confining wells.
double depth_scale(const Potential& pot) {
    const double vmin = pot.infimum().value;
    const auto thr = pot.threshold();
    if (thr && std::isfinite(vmin)) return *thr - vmin;
    if (thr) return std::max(1.0, std::fabs(*thr));
    return std::isfinite(vmin) ? std::max(1.0, std::fabs(vmin)) : 1.0;
}

// Scale for the eps-derivative steps: eps - V_min, or |eps| when V_min = -inf.
double stencil_scale(const Potential& pot, double eps) {
    const double vmin = pot.infimum().value;
    const double s = std::isfinite(vmin) ? eps - vmin : std::fabs(eps);
    if (!(s > 0.0)) throw NoAllowedRegionError("eps is not above V_min");
    return s;
}

struct PhiValue {
    double phi;
    double shift;
    std::optional<CorrectionResult> correction;
};

PhiValue quantization_mismatch(const Potential& pot, int n, QuantizationMode mode, const QuadConfig& cfg,
                               const UnitSystem& units, double eps, Execution exec) {
    PhiValue r{0.0, 0.0, std::nullopt};
    const double s = action(pot, eps, cfg, units, exec);
    if (mode != QuantizationMode::leading) {
        const double d1 = delta1(pot, eps, cfg, units, exec);
        const CorrectionResult c = delta_map(d1);
        if (mode == QuantizationMode::first_order) {
            if (!std::isfinite(d1)) throw DivergentCorrectionError("delta1 diverges; first-order mode has no finite shift");
            r.shift = d1;
        } else {
            r.shift = c.delta;
        }
        r.correction = c;
    }
    r.phi = s - n - 0.5 - r.shift;
    return r;
}

}  // namespace

std::string_view to_string(QuantizationMode mode) {
    switch (mode) {
        case QuantizationMode::leading: return "leading";
        case QuantizationMode::first_order: return "first_order";
        case QuantizationMode::resummed: return "resummed";
    }
    return "unknown";
}

std::optional<QuantizationMode> parse_mode(std::string_view text) {
    if (text == "leading") return QuantizationMode::leading;
    if (text == "first_order" || text == "first-order") return QuantizationMode::first_order;
    if (text == "resummed") return QuantizationMode::resummed;
    return std::nullopt;
}

CorrectionResult delta_map(double d1) {
    if (std::isnan(d1)) throw InvalidParameterError("delta1 is NaN");
    if (!std::isfinite(d1) || std::fabs(d1) > kDivergenceLimit) return {d1, std::copysign(0.5, d1), std::nullopt, true};
    return {d1, 2.0 * d1 / (1.0 + std::sqrt(1.0 + 16.0 * d1 * d1)), std::nullopt, false};
}

double delta1_fixed(const Potential& potential, double eps, int nodes, const QuadConfig& cfg,
                    const UnitSystem& units, Execution exec) {
    const auto j = [&](double e) { return j_integral_fixed(potential, e, nodes, exec); };
    const SecondDerivative d2 =
        second_eps_derivative(j, eps, stencil_scale(potential, eps), cfg, potential.threshold(), exec);
    return units.beta() / (24.0 * std::numbers::pi) * d2.value;
}

double delta1(const Potential& potential, double eps, const QuadConfig& cfg, const UnitSystem& units,
              Execution exec) {
    const QuadResult j = j_integral(potential, eps, cfg, exec);
    if (j.diverged) return j.value;
    return delta1_fixed(potential, eps, j.nodes, cfg, units, exec);
}

double gamma(const Potential& potential, double eps, const QuadConfig& cfg, const UnitSystem& units,
             Execution exec) {
    const QuadResult j = j_integral(potential, eps, cfg, exec);
    if (j.diverged) throw GammaUndefinedError("delta1 diverges at eps");
    const double h = cfg.eps_step_fraction * stencil_scale(potential, eps);
    const auto d1 = [&](double e) {
        const double v = delta1_fixed(potential, e, j.nodes, cfg, units, exec);
        if (!std::isfinite(v)) throw GammaUndefinedError("delta1 diverges at a stencil point");
        return v;
    };
    const auto thr = potential.threshold();
    if (!thr || eps + h < *thr) return (d1(eps + h) - d1(eps - h)) / (2.0 * h);
    return (3.0 * d1(eps) - 4.0 * d1(eps - h) + d1(eps - 2.0 * h)) / (2.0 * h);
}

EnergyLevel solve_level(const Potential& potential, int n, QuantizationMode mode, const QuadConfig& cfg,
                        const UnitSystem& units, Execution exec) {
    cfg.validate();
    if (n < 0) throw InvalidParameterError("level index must be non-negative");
    const double vmin = potential.infimum().value;
    const auto thr = potential.threshold();
    const double depth = depth_scale(potential);

    int evaluations = 0;
    const auto phi = [&](double e) {
        ++evaluations;
        return quantization_mismatch(potential, n, mode, cfg, units, e, exec);
    };
    const auto make_level = [&](double e, const PhiValue& f, bool shallow) {
        EnergyLevel level;
        level.n = n;
        level.energy = e;
        level.mode = mode;
        level.correction = f.correction;
        level.shift = f.shift;
        level.residual = f.phi;
        level.iterations = evaluations;
        level.shallow = shallow;
        return level;
    };

    double lo;
    PhiValue flo{};
    if (std::isfinite(vmin)) {
        // The stencil is rounding-dominated right at the bottom, so a
        // non-negative Phi there only counts once a few higher edges agree.
        const double edge = vmin + 1e-12 * depth;
        const PhiValue f_edge = phi(edge);
        lo = edge;
        flo = f_edge;
        for (double offset : {1e-9, 1e-6, 1e-3}) {
            if (flo.phi < 0.0) break;
            lo = vmin + offset * depth;
            flo = phi(lo);
        }
        if (flo.phi >= 0.0) return make_level(edge, f_edge, true);
    } else {
        const double ref = thr ? *thr : 0.0;
        bool found = false;
        for (int k = 0; k <= 200 && !found; ++k) {
            lo = ref - depth * std::ldexp(1.0, k);
            flo = phi(lo);
            found = flo.phi < 0.0;
        }
        if (!found) throw LevelNotFoundError("no energy below level " + std::to_string(n));
    }

    double hi = lo;
    PhiValue fhi{};
    bool bracketed = false;
    for (int k = thr ? 1 : 0; k <= 200 && !bracketed; ++k) {
        const double e = thr ? *thr - depth * std::ldexp(1.0, -k) : (std::isfinite(vmin) ? vmin : 0.0) + depth * std::ldexp(1.0, k);
        if (!(e > lo)) continue;
        if (thr && !(e < *thr)) break;
        PhiValue f;
        try {
            f = phi(e);
        } catch (const QuadratureFailure&) {
            continue;
        }
        if (f.phi > 0.0) {
            hi = e;
            fhi = f;
            bracketed = true;
        } else {
            lo = e;
            flo = f;
        }
    }
    if (!bracketed) throw LevelNotFoundError("no sign change of the quantization condition for level " + std::to_string(n));

    for (int it = 0; it < 300; ++it) {
        if (hi - lo <= 1e-12 * std::max(std::fabs(lo), std::fabs(hi))) break;
        const double mid = lo + 0.5 * (hi - lo);
        if (mid == lo || mid == hi) break;
        const PhiValue f = phi(mid);
        if (f.phi > 0.0) {
            hi = mid;
            fhi = f;
        } else {
            lo = mid;
            flo = f;
        }
    }
    const double mid = lo + 0.5 * (hi - lo);
    const PhiValue fmid = phi(mid);
    if (std::fabs(fmid.phi) <= std::min(std::fabs(flo.phi), std::fabs(fhi.phi))) return make_level(mid, fmid, false);
    return std::fabs(flo.phi) <= std::fabs(fhi.phi) ? make_level(lo, flo, false) : make_level(hi, fhi, false);
}

std::optional<int> count_levels(const Potential& potential, QuantizationMode mode, const QuadConfig& cfg,
                                const UnitSystem& units, Execution exec) {
    cfg.validate();
    const auto thr = potential.threshold();
    if (!thr) return std::nullopt;
    const double depth = depth_scale(potential);
    const double e_far = *thr - 1e-4 * depth;
    const double e_near = *thr - 1e-8 * depth;
    double s_far;
    double s_near;
    try {
        s_far = action(potential, e_far, cfg, units, exec);
        s_near = action(potential, e_near, cfg, units, exec);
    } catch (const QuadratureFailure&) {
        return std::nullopt;
    }
    if (s_near > 1.5 * s_far) return std::nullopt;
    const PhiValue f = quantization_mismatch(potential, 0, mode, cfg, units, e_near, exec);
    // Phi_n(e_near) = f.phi - n > 0 for n < f.phi.
    return f.phi > 0.0 ? static_cast<int>(std::ceil(f.phi)) : 0;
}

bool SpectrumReport::all_ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const SpectrumRow& r) { return r.level.has_value(); });
}

void SpectrumReport::update_errors() {
    for (auto& row : rows) {
        row.abs_error.reset();
        row.rel_error.reset();
        const std::optional<double> ref = row.exact ? row.exact : row.oracle;
        if (!row.level || !ref) continue;
        row.abs_error = std::fabs(row.level->energy - *ref);
        if (*ref != 0.0) row.rel_error = *row.abs_error / std::fabs(*ref);
    }
}

void SpectrumReport::attach_oracle(const std::vector<double>& energies) {
    for (auto& row : rows)
        if (row.n >= 0 && static_cast<std::size_t>(row.n) < energies.size()) row.oracle = energies[row.n];
    update_errors();
}

SpectrumReport solve_spectrum(const Potential& potential, QuantizationMode mode, const QuadConfig& cfg,
                              const UnitSystem& units, const SpectrumRequest& request, Execution exec) {
    cfg.validate();
    if (request.n_min < 0) throw InvalidParameterError("n_min must be non-negative");
    const std::optional<int> count = count_levels(potential, mode, cfg, units, exec);
    if (!count && !request.n_max) throw InvalidParameterError("n_max is required when the level count is unbounded");
    int n_hi = request.n_max ? *request.n_max : *count - 1;
    if (count) n_hi = std::min(n_hi, *count - 1);

    SpectrumReport report;
    report.potential = potential.description();
    report.mode = mode;
    report.beta = units.beta();
    for (int n = request.n_min; n <= n_hi; ++n) {
        SpectrumRow row;
        row.n = n;
        report.rows.push_back(std::move(row));
    }

    detail::parallel_for(
        static_cast<std::ptrdiff_t>(report.rows.size()),
        [&](std::ptrdiff_t i) {
            SpectrumRow& row = report.rows[i];
            try {
                row.level = solve_level(potential, row.n, mode, cfg, units, exec);
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            if (potential.has_exact_spectrum()) {
                try {
                    row.exact = exact_level(potential, row.n, units);
                } catch (const Error&) {
                }
            }
        },
        exec, 2, true);
    report.update_errors();
    return report;
}

double hyperbolic_delta_closed_form(double A, const UnitSystem& units) {
    if (!(A > 0.0) || !std::isfinite(A)) throw InvalidParameterError("A must be positive and finite");
    const double u = A / units.beta();
    // u - sqrt(u^2 + 1/4) without cancellation
    return -0.25 / (u + std::sqrt(u * u + 0.25));
}

}  // namespace wkbq
