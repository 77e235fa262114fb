#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wkbq/parallel.hpp"
#include "wkbq/potential.hpp"
#include "wkbq/quadrature.hpp"

namespace wkbq {

/// leading: shift 0; first_order: shift delta1; resummed: shift delta_map(delta1).
enum class QuantizationMode { leading, first_order, resummed };

std::string_view to_string(QuantizationMode mode);
/// Accepts "leading", "first_order" (or "first-order") and "resummed".
std::optional<QuantizationMode> parse_mode(std::string_view text);

struct CorrectionResult {
    double delta1;  // +-inf when J diverges
    double delta;   // in [-1/2, 1/2]
    std::optional<double> gamma;
    bool diverged = false;
};

/// delta = 2 delta1 / (1 + sqrt(1 + 16 delta1^2)); an infinite delta1 or
/// |delta1| > 1e12 gives delta = sgn(delta1) / 2 with `diverged` set.
CorrectionResult delta_map(double delta1);

/// delta1 = (beta / 24 pi) d^2 J / d eps^2, or a signed infinity when J diverges.
double delta1(const Potential& potential, double eps, const QuadConfig& cfg, const UnitSystem& units,
              Execution exec = Execution::parallel);

/// delta1 with every J evaluation on a fixed `nodes`-point rule.
double delta1_fixed(const Potential& potential, double eps, int nodes, const QuadConfig& cfg,
                    const UnitSystem& units, Execution exec = Execution::parallel);

/// d delta1 / d eps by a central difference with step eps_step_fraction * (eps - V_min).
/// Throws GammaUndefinedError when delta1 diverges at a stencil point.
double gamma(const Potential& potential, double eps, const QuadConfig& cfg, const UnitSystem& units,
             Execution exec = Execution::parallel);

struct EnergyLevel {
    int n = 0;
    double energy = 0.0;
    QuantizationMode mode = QuantizationMode::leading;
    std::optional<CorrectionResult> correction;  // absent in leading mode
    double shift = 0.0;                          // the delta actually applied
    double residual = 0.0;
    int iterations = 0;
    bool shallow = false;  // root pinned to the lower bracket edge
};

/// Solves action(eps) = n + 1/2 + shift(eps) by bisection on a verified sign change.
EnergyLevel solve_level(const Potential& potential, int n, QuantizationMode mode, const QuadConfig& cfg,
                        const UnitSystem& units, Execution exec = Execution::parallel);

/// Number of bound levels, or nullopt for an unbounded count (confining well,
/// or an action that diverges at the threshold).
std::optional<int> count_levels(const Potential& potential, QuantizationMode mode, const QuadConfig& cfg,
                                const UnitSystem& units, Execution exec = Execution::parallel);

struct SpectrumRow {
    int n = 0;
    std::optional<EnergyLevel> level;
    std::string error;  // why `level` is absent
    std::optional<double> exact;
    std::optional<double> oracle;
    std::optional<double> abs_error;  // against exact, else oracle
    std::optional<double> rel_error;
};

struct SpectrumReport {
    std::string potential;
    QuantizationMode mode = QuantizationMode::leading;
    double beta = 1.0;
    std::vector<SpectrumRow> rows;

    bool all_ok() const;
    /// Attaches oracle energies by level index and refreshes the error columns.
    void attach_oracle(const std::vector<double>& energies);
    void update_errors();
};

struct SpectrumRequest {
    int n_min = 0;
    std::optional<int> n_max;  // required when the level count is unbounded
};

/// Levels n_min..min(n_max, count - 1), solved concurrently. Per-level failures
/// are recorded in the row.
SpectrumReport solve_spectrum(const Potential& potential, QuantizationMode mode, const QuadConfig& cfg,
                              const UnitSystem& units, const SpectrumRequest& request = {},
                              Execution exec = Execution::parallel);

/// Exact delta of the hyperbolic well, A / beta - sqrt(A^2 / beta^2 + 1/4).
double hyperbolic_delta_closed_form(double A, const UnitSystem& units);

}  // namespace wkbq
