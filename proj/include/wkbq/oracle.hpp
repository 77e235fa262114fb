#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wkbq/parallel.hpp"
#include "wkbq/potential.hpp"

namespace wkbq {

/// Box [x_lo, x_hi] with `points` interior nodes and Dirichlet ends.
struct GridConfig {
    double x_lo = -10.0;
    double x_hi = 10.0;
    int points = 4000;
    int richardson_levels = 2;  // 1: grids h, h/2; 2: h, h/2, h/4

    void validate() const;
};

struct OracleLevel {
    int n = 0;
    double energy = 0.0;
    double est_error = 0.0;
    std::vector<double> grid_energies;  // raw eigenvalue on h, h/2 (, h/4)
};

/// Lowest `count` bound eigenvalues of -beta^2 d^2/dx^2 + V by three-point
/// finite differences and Richardson extrapolation. Levels at or above the
/// threshold are dropped and reported in `notices`. Throws BoxTooSmallError
/// when the box does not enclose the highest level with enough decay margin.
std::vector<OracleLevel> eigenvalues_grid(const Potential& potential, const GridConfig& grid, int count,
                                          const UnitSystem& units, Execution exec = Execution::parallel,
                                          std::vector<std::string>* notices = nullptr);

struct ConvergeOptions {
    int initial_points = 400;
    std::size_t max_points = std::size_t{1} << 22;  // cap on the finest grid
    int richardson_levels = 2;
};

struct ConvergeResult {
    std::vector<OracleLevel> levels;
    GridConfig grid;  // coarsest grid of the final pass
    bool converged = false;
    std::vector<std::string> notices;
};

/// Chooses the box, then halves h until every level's est_error <= target or
/// the point cap is reached (best result returned with a notice).
ConvergeResult converge(const Potential& potential, int count, double target, const UnitSystem& units,
                        const ConvergeOptions& options = {}, Execution exec = Execution::parallel);

}  // namespace wkbq
