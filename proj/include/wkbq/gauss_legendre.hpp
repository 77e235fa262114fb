#pragma once

#include <cstddef>
#include <vector>

#include "wkbq/parallel.hpp"

namespace wkbq {

/// n-point Gauss-Legendre rule on [-1, 1]. Nodes are in descending order and
/// `complement[i]` holds 1 - |nodes[i]| without cancellation.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> complement;
    std::vector<double> weights;
    std::size_t size() const noexcept { return nodes.size(); }
};

/// Computes the rule from scratch by Newton iteration in the angle t = cos phi.
/// P_n comes from the three-term recurrence, or from its interior asymptotic
/// expansion away from the ends once n >= 1024.
GaussLegendreRule compute_gauss_legendre(int n, Execution exec = Execution::parallel);

/// Cached rule; the reference stays valid for the lifetime of the process.
const GaussLegendreRule& gauss_legendre(int n);

}  // namespace wkbq
