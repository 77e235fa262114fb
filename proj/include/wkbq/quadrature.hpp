#pragma once

#include <functional>
#include <optional>

#include "wkbq/parallel.hpp"
#include "wkbq/potential.hpp"

namespace wkbq {

struct QuadConfig {
    int base_nodes = 64;
    int max_refinements = 10;
    double rel_tol = 1e-10;
    double eps_step_fraction = 1e-3;  // relative to (eps - V_min)

    /// Throws InvalidParameterError when a field is out of range.
    void validate() const;
};

/// Ends of the classically allowed region at one energy. An `edge_*` flag
/// means that end is a domain edge where V stays below eps (e.g. Coulomb l = 0).
struct TurningPoints {
    double x_minus;
    double x_plus;
    bool edge_minus = false;
    bool edge_plus = false;
};

TurningPoints find_turning_points(const Potential& potential, double eps);

struct QuadResult {
    double value;
    int nodes;              // node count of the accepted estimate (per half when split)
    bool diverged = false;  // J only: value is then a signed infinity
};

/// Raw integral of sqrt(eps - V) between the turning points, with node doubling.
QuadResult action_integral(const Potential& potential, double eps, const QuadConfig& cfg,
                           Execution exec = Execution::parallel);

/// Dimensionless action (1 / pi beta) * integral of sqrt(eps - V).
double action(const Potential& potential, double eps, const QuadConfig& cfg, const UnitSystem& units,
              Execution exec = Execution::parallel);

/// J(eps) = integral of V'^2 / sqrt(eps - V). Divergence under refinement is
/// reported through `diverged` rather than thrown.
QuadResult j_integral(const Potential& potential, double eps, const QuadConfig& cfg,
                      Execution exec = Execution::parallel);

/// J(eps) with a fixed rule of `nodes` points and no refinement.
double j_integral_fixed(const Potential& potential, double eps, int nodes, Execution exec = Execution::parallel);

struct SecondDerivative {
    double value;   // Richardson combination of the two estimates
    double fine;    // step h
    double coarse;  // step 2h
    bool one_sided = false;
};

/// d^2 f / d eps^2 from second differences at steps h and 2h, h = eps_step_fraction * scale.
/// Centred by default; if eps + 2h would reach `upper`, switches to the backward
/// four-point formula. Stencil points may be evaluated concurrently.
SecondDerivative second_eps_derivative(const std::function<double(double)>& f, double eps, double scale,
                                       const QuadConfig& cfg, std::optional<double> upper = std::nullopt,
                                       Execution exec = Execution::parallel);

}  // namespace wkbq
