#pragma once

#include <vector>

#include "wkbq/parallel.hpp"

namespace wkbq {

/// Symmetric tridiagonal matrix: `diag` of size n and `off` of size n - 1.
struct SymTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;
};

/// Number of eigenvalues strictly below x (Sturm sequence / LDL^T inertia).
int sturm_count(const SymTridiagonal& t, double x);

/// Lowest min(count, n) eigenvalues in increasing order, each by Sturm
/// bisection to machine precision. Indices are solved concurrently.
std::vector<double> lowest_eigenvalues(const SymTridiagonal& t, int count, Execution exec = Execution::parallel);

}  // namespace wkbq
