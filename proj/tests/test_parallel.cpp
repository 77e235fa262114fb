#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "wkbq/gauss_legendre.hpp"
#include "wkbq/oracle.hpp"
#include "wkbq/parallel.hpp"
#include "wkbq/quadrature.hpp"
#include "wkbq/tridiagonal.hpp"
#include "wkbq/wkb.hpp"

using namespace wkbq;

namespace {

const UnitSystem kAtomic = UnitSystem::from_beta(1.0 / std::sqrt(2.0));
const QuadConfig kCfg{};

// Runs with several threads even on a single core so the parallel path is exercised.
struct Threads {
    Threads() {
#if defined(_OPENMP)
        saved = omp_get_max_threads();
        omp_set_num_threads(4);
#endif
    }
    ~Threads() {
#if defined(_OPENMP)
        omp_set_num_threads(saved);
#endif
    }
    int saved = 1;
};

}  // namespace

TEST_CASE("parallel_for covers every index once and rethrows the lowest failure") {
    Threads t;
    for (auto exec : {Execution::serial, Execution::parallel}) {
        std::vector<int> hits(1000, 0);
        detail::parallel_for(1000, [&](std::ptrdiff_t i) { ++hits[i]; }, exec);
        for (int h : hits) CHECK(h == 1);

        try {
            detail::parallel_for(
                100,
                [](std::ptrdiff_t i) {
                    if (i == 37 || i == 81) throw std::runtime_error(std::to_string(i));
                },
                exec, 2, true);
            FAIL("expected an exception");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()) == "37");
        }
    }
}

TEST_CASE("Gauss-Legendre rules are identical on both paths") {
    Threads t;
    for (int n : {3, 64, 1000, 4097}) {
        const auto s = compute_gauss_legendre(n, Execution::serial);
        const auto p = compute_gauss_legendre(n, Execution::parallel);
        CHECK(s.nodes == p.nodes);
        CHECK(s.weights == p.weights);
        CHECK(s.complement == p.complement);
    }
}

TEST_CASE("quadrature is bitwise identical on both paths") {
    Threads t;
    const Potential pots[] = {make_builtin(builtin::HyperbolicWell{std::sqrt(6.0)}, kAtomic),
                              make_builtin(builtin::CoulombCentrifugal{1.0, 1}, kAtomic),
                              make_builtin(builtin::GaussianWell{0.05, 1.0}, kAtomic)};
    for (const auto& p : pots) {
        const double eps = p.infimum().value * 0.4;
        CHECK(action(p, eps, kCfg, kAtomic, Execution::serial) == action(p, eps, kCfg, kAtomic, Execution::parallel));
        const QuadResult js = j_integral(p, eps, kCfg, Execution::serial);
        const QuadResult jp = j_integral(p, eps, kCfg, Execution::parallel);
        CHECK(js.value == jp.value);
        CHECK(js.nodes == jp.nodes);
        CHECK(delta1(p, eps, kCfg, kAtomic, Execution::serial) == delta1(p, eps, kCfg, kAtomic, Execution::parallel));
    }
}

TEST_CASE("spectra are bitwise identical on both paths") {
    Threads t;
    const Potential q = make_builtin(builtin::Quartic{1.0}, kAtomic);
    const auto s = solve_spectrum(q, QuantizationMode::resummed, kCfg, kAtomic, SpectrumRequest{0, 7}, Execution::serial);
    const auto p = solve_spectrum(q, QuantizationMode::resummed, kCfg, kAtomic, SpectrumRequest{0, 7}, Execution::parallel);
    REQUIRE(s.rows.size() == p.rows.size());
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        CHECK(s.rows[i].level->energy == p.rows[i].level->energy);
        CHECK(s.rows[i].level->iterations == p.rows[i].level->iterations);
    }
}

TEST_CASE("eigenvalues are bitwise identical on both paths") {
    Threads t;
    const int n = 20000;
    SymTridiagonal m;
    for (int i = 0; i < n; ++i) m.diag.push_back(2.0 + std::sin(0.01 * i));
    m.off.assign(n - 1, -1.0);
    CHECK(lowest_eigenvalues(m, 16, Execution::serial) == lowest_eigenvalues(m, 16, Execution::parallel));

    const Potential g = make_builtin(builtin::GaussianWell{2.0, 1.0}, kAtomic);
    const GridConfig grid{-25.0, 25.0, 3000, 2};
    const auto a = eigenvalues_grid(g, grid, 1, kAtomic, Execution::serial);
    const auto b = eigenvalues_grid(g, grid, 1, kAtomic, Execution::parallel);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].grid_energies == b[i].grid_energies);
}
