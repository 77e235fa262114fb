#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wkbq/expr.hpp"

namespace wkbq {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// All physics is expressed through beta, with beta^2 = hbar^2 / 2m.
class UnitSystem {
public:
    static UnitSystem from_beta(double beta);
    static UnitSystem from_hbar_mass(double hbar, double mass);
    double beta() const noexcept { return beta_; }

private:
    explicit UnitSystem(double beta) : beta_(beta) {}
    double beta_;
};

/// Open interval (lo, hi); either end may be infinite.
struct Interval {
    double lo = -kInf;
    double hi = kInf;
    bool contains(double x) const noexcept { return x > lo && x < hi; }
};

struct Infimum {
    double value;     // may be -inf (Coulomb l = 0 at the origin)
    double location;  // may sit on a domain edge when the infimum is not attained
};

/// Limiting value of V beyond `tail_point` (monotone approach).
struct Asymptote {
    double value;
    double tail_point;
};

namespace builtin {
struct Harmonic {
    double A;  // V = A^2 x^2 / 2
};
struct HyperbolicWell {
    double A;  // V = -A^2 sech^2 x
};
struct CoulombCentrifugal {
    double Z;  // V = beta^2 l(l+1) / x^2 - Z / x on x > 0
    int l;
};
struct GaussianWell {
    double V0;  // V = -V0 exp(-(x / width)^2)
    double width;
};
struct Quartic {
    double c;  // V = c x^4
};
}  // namespace builtin

using BuiltinKind = std::variant<builtin::Harmonic, builtin::HyperbolicWell, builtin::CoulombCentrifugal,
                                 builtin::GaussianWell, builtin::Quartic>;

/// V = A^2 s^2 + B s + C with ds/dx = a2 s^2 + a1 s + a0 and s(0) = s0.
struct FamilyCoeffs {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double a2 = 0.0;
    double a1 = 0.0;
    double a0 = 0.0;
    double s0 = 0.0;

    double sigma(double s) const noexcept { return (a2 * s + a1) * s + a0; }
    double value(double s) const noexcept { return (A * A * s + B) * s + C; }
};

struct FamilyOptions {
    double horizon = 50.0;
    int taylor_order = 24;
    double verify_tolerance = 1e-10;
};

/// Evaluable potential with its derivative and the metadata the solvers need.
/// Immutable and safe to evaluate concurrently.
class Potential {
public:
    struct Parts {
        std::string description;
        std::function<double(double)> value;
        std::function<double(double)> derivative;
        Interval domain;
        std::optional<Asymptote> asymptote_lo;
        std::optional<Asymptote> asymptote_hi;
        Infimum infimum{0.0, 0.0};
        std::optional<BuiltinKind> builtin;
        std::optional<FamilyCoeffs> family;
    };

    explicit Potential(Parts parts);

    double value(double x) const { return parts_.value(x); }
    double derivative(double x) const { return parts_.derivative(x); }
    double operator()(double x) const { return parts_.value(x); }

    const std::string& description() const noexcept { return parts_.description; }
    const Interval& domain() const noexcept { return parts_.domain; }
    const std::optional<Asymptote>& asymptote_lo() const noexcept { return parts_.asymptote_lo; }
    const std::optional<Asymptote>& asymptote_hi() const noexcept { return parts_.asymptote_hi; }
    const Infimum& infimum() const noexcept { return parts_.infimum; }
    const std::optional<BuiltinKind>& builtin() const noexcept { return parts_.builtin; }
    const std::optional<FamilyCoeffs>& family() const noexcept { return parts_.family; }

    /// Dissociation threshold: the lowest finite asymptote, if any.
    std::optional<double> threshold() const;
    bool confining() const { return !threshold().has_value(); }
    bool has_exact_spectrum() const;

private:
    Parts parts_;
};

Potential make_builtin(const BuiltinKind& kind, const UnitSystem& units);

struct ExpressionOptions {
    double horizon = 50.0;
    int samples = 4001;
};

Potential make_from_expression(const expr::Expr& ast, Interval domain, const UnitSystem& units,
                               const ExpressionOptions& options = {});

Potential make_family(const FamilyCoeffs& coeffs, const UnitSystem& units, const FamilyOptions& options = {});

/// Closed-form energy of level n for built-ins with a known spectrum.
double exact_level(const Potential& potential, int n, const UnitSystem& units);

/// Number of bound levels of the closed-form spectrum, or nullopt when infinite.
std::optional<int> exact_level_count(const Potential& potential, const UnitSystem& units);

/// delta1 = beta a2 / (8 A) for the shape-invariant family. A = 0 yields a
/// signed infinity (the divergent limit).
double family_delta1_closed_form(const FamilyCoeffs& coeffs, const UnitSystem& units);

std::string describe(const BuiltinKind& kind);

/// Trajectory s(x) of the family Riccati equation, stored as Taylor segments.
class RiccatiTrajectory {
public:
    RiccatiTrajectory(const FamilyCoeffs& coeffs, const FamilyOptions& options, double step_scale = 1.0);

    double s(double x) const;
    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    /// Fixed point reached on each side (the trajectory is constant beyond), if any.
    const std::optional<double>& fixed_lo() const noexcept { return fixed_lo_; }
    const std::optional<double>& fixed_hi() const noexcept { return fixed_hi_; }
    std::size_t segments() const noexcept { return segments_.size(); }

private:
    struct Segment {
        double x0;  // expansion point
        double lo;
        double hi;
        std::vector<double> coeffs;
    };

    void integrate(double direction, double step_scale);

    FamilyCoeffs coeffs_;
    FamilyOptions options_;
    std::vector<Segment> segments_;  // sorted by lo after construction
    double x_min_ = 0.0;
    double x_max_ = 0.0;
    std::optional<double> fixed_lo_;
    std::optional<double> fixed_hi_;
};

}  // namespace wkbq
