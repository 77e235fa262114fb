#include "wkbq/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "wkbq/errors.hpp"
#include "wkbq/expr.hpp"
#include "wkbq/oracle.hpp"
#include "wkbq/potential.hpp"
#include "wkbq/quadrature.hpp"
#include "wkbq/report.hpp"
#include "wkbq/wkb.hpp"

namespace wkbq {

namespace {

struct PotentialArgs {
    std::string builtin;
    std::string expression;
    std::string domain;
    std::vector<double> family;
    std::optional<double> A;
    std::optional<double> A2;
    std::optional<double> Z;
    std::optional<int> l;
    std::optional<double> V0;
    std::optional<double> width;
    std::optional<double> c;
    double horizon = 50.0;
};

struct Args {
    PotentialArgs potential;
    std::optional<double> beta;
    std::optional<double> hbar;
    std::optional<double> mass;
    std::vector<std::string> modes;
    std::string n_range;
    bool oracle = false;
    double target = 1e-7;
    std::optional<int> base_nodes;
    std::optional<int> max_refinements;
    std::optional<double> rel_tol;
    std::optional<double> eps_step;
    std::optional<double> x_lo;
    std::optional<double> x_hi;
    std::optional<int> points;
    int richardson = 2;
    std::string format = "csv";
    std::string output;
    bool serial = false;
    // sweep
    std::string parameter;
    std::vector<std::string> values;
    // oracle
    std::optional<int> count;
    // delta1
    std::vector<std::string> energies;
};

double parse_real(const std::string& text, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || std::isnan(v))
        throw ConfigError(what + ": '" + text + "' is not a number");
    return v;
}

int parse_int(const std::string& text, const std::string& what) {
    const double v = parse_real(text, what);
    if (v != std::floor(v) || std::fabs(v) > 1e9) throw ConfigError(what + ": '" + text + "' is not an integer");
    return static_cast<int>(v);
}

struct Range {
    int lo = 0;
    std::optional<int> hi;
};

Range parse_range(const std::string& text) {
    if (text.empty()) return {};
    const auto dots = text.find("..");
    Range r;
    if (dots == std::string::npos) {
        r.lo = parse_int(text, "--n");
        r.hi = r.lo;
    } else {
        r.lo = parse_int(text.substr(0, dots), "--n");
        r.hi = parse_int(text.substr(dots + 2), "--n");
    }
    if (r.lo < 0 || *r.hi < r.lo) throw ConfigError("--n must be a..b with 0 <= a <= b");
    return r;
}

UnitSystem make_units(const Args& a) {
    if (a.beta && (a.hbar || a.mass)) throw ConfigError("give --beta or --hbar/--mass, not both");
    if (a.hbar || a.mass) {
        if (!a.hbar || !a.mass) throw ConfigError("--hbar and --mass go together");
        return UnitSystem::from_hbar_mass(*a.hbar, *a.mass);
    }
    return UnitSystem::from_beta(a.beta.value_or(1.0));
}

void reject(bool present, const char* flag, const std::string& kind) {
    if (present) throw ConfigError(std::string(flag) + " does not apply to " + kind);
}

Potential make_potential(const PotentialArgs& p, const UnitSystem& units) {
    const int sources = !p.builtin.empty() + !p.expression.empty() + !p.family.empty();
    if (sources != 1) throw ConfigError("give exactly one of --builtin, --expr, --family");

    if (!p.builtin.empty()) {
        const std::string& k = p.builtin;
        if (!p.domain.empty()) throw ConfigError("--domain applies to --expr only");
        if (k == "harmonic") {
            reject(p.A2 || p.Z || p.l || p.V0 || p.width || p.c, "a parameter other than --A", k);
            return make_builtin(builtin::Harmonic{p.A.value_or(1.0)}, units);
        }
        if (k == "hyperbolic") {
            reject(p.Z || p.l || p.V0 || p.width || p.c, "a parameter other than --A/--A2", k);
            if (p.A && p.A2) throw ConfigError("give --A or --A2, not both");
            if (!p.A && !p.A2) throw ConfigError("hyperbolic needs --A or --A2");
            if (p.A2 && !(*p.A2 > 0.0)) throw ConfigError("--A2 must be positive");
            return make_builtin(builtin::HyperbolicWell{p.A ? *p.A : std::sqrt(*p.A2)}, units);
        }
        if (k == "coulomb") {
            reject(p.A || p.A2 || p.V0 || p.width || p.c, "a parameter other than --Z/--l", k);
            return make_builtin(builtin::CoulombCentrifugal{p.Z.value_or(1.0), p.l.value_or(0)}, units);
        }
        if (k == "gaussian") {
            reject(p.A || p.A2 || p.Z || p.l || p.c, "a parameter other than --V0/--width", k);
            return make_builtin(builtin::GaussianWell{p.V0.value_or(1.0), p.width.value_or(1.0)}, units);
        }
        if (k == "quartic") {
            reject(p.A || p.A2 || p.Z || p.l || p.V0 || p.width, "a parameter other than --c", k);
            return make_builtin(builtin::Quartic{p.c.value_or(1.0)}, units);
        }
        throw ConfigError("unknown builtin '" + k + "' (harmonic, hyperbolic, coulomb, gaussian, quartic)");
    }
    if (p.A || p.A2 || p.Z || p.l || p.V0 || p.width || p.c)
        throw ConfigError("builtin parameters need --builtin");

    if (!p.expression.empty()) {
        Interval dom;
        if (!p.domain.empty()) {
            const auto comma = p.domain.find(',');
            if (comma == std::string::npos) throw ConfigError("--domain must be lo,hi");
            dom.lo = parse_real(p.domain.substr(0, comma), "--domain");
            dom.hi = parse_real(p.domain.substr(comma + 1), "--domain");
        }
        return make_from_expression(expr::parse(p.expression), dom, units, ExpressionOptions{.horizon = p.horizon});
    }

    if (!p.domain.empty()) throw ConfigError("--domain applies to --expr only");
    if (p.family.size() != 7) throw ConfigError("--family takes 7 numbers: A,B,C,a2,a1,a0,s0");
    const FamilyCoeffs f{p.family[0], p.family[1], p.family[2], p.family[3], p.family[4], p.family[5], p.family[6]};
    return make_family(f, units, FamilyOptions{.horizon = p.horizon});
}

QuadConfig make_quad(const Args& a) {
    QuadConfig q;
    if (a.base_nodes) q.base_nodes = *a.base_nodes;
    if (a.max_refinements) q.max_refinements = *a.max_refinements;
    if (a.rel_tol) q.rel_tol = *a.rel_tol;
    if (a.eps_step) q.eps_step_fraction = *a.eps_step;
    q.validate();
    return q;
}

std::vector<QuantizationMode> make_modes(const Args& a, std::vector<QuantizationMode> fallback) {
    if (a.modes.empty()) return fallback;
    std::vector<QuantizationMode> out;
    for (const auto& m : a.modes) {
        const auto mode = parse_mode(m);
        if (!mode) throw ConfigError("unknown mode '" + m + "' (leading, first_order, resummed)");
        if (std::find(out.begin(), out.end(), *mode) == out.end()) out.push_back(*mode);
    }
    return out;
}

Execution exec_of(const Args& a) { return a.serial ? Execution::serial : Execution::parallel; }

struct OracleRun {
    std::vector<OracleLevel> levels;
    std::vector<std::string> notices;
    bool converged = false;
};

OracleRun run_oracle(const Potential& pot, int count, const Args& a, const UnitSystem& units) {
    OracleRun r;
    if (a.x_lo || a.x_hi || a.points) {
        GridConfig g;
        g.x_lo = a.x_lo.value_or(g.x_lo);
        g.x_hi = a.x_hi.value_or(g.x_hi);
        g.points = a.points.value_or(g.points);
        g.richardson_levels = a.richardson;
        g.validate();
        r.levels = eigenvalues_grid(pot, g, count, units, exec_of(a), &r.notices);
        r.converged = std::all_of(r.levels.begin(), r.levels.end(),
                                  [&](const OracleLevel& l) { return l.est_error <= a.target; });
        return r;
    }
    ConvergeOptions opt;
    opt.richardson_levels = a.richardson;
    ConvergeResult c = converge(pot, count, a.target, units, opt, exec_of(a));
    r.levels = std::move(c.levels);
    r.notices = std::move(c.notices);
    r.converged = c.converged;
    return r;
}

std::optional<double> exact_or_none(const Potential& pot, int n, const UnitSystem& units) {
    if (!pot.has_exact_spectrum()) return std::nullopt;
    try {
        return exact_level(pot, n, units);
    } catch (const Error&) {
        return std::nullopt;
    }
}

void emit(const Report& r, const Args& a, std::ostream& out) {
    std::ofstream file;
    std::ostream* dst = &out;
    if (!a.output.empty()) {
        file.open(a.output);
        if (!file) throw ConfigError("cannot open '" + a.output + "' for writing");
        dst = &file;
    }
    if (a.format == "json") write_json(r, *dst);
    else write_csv(r, *dst);
}

int cmd_spectrum(const Args& a, std::ostream& out, std::ostream& err) {
    const UnitSystem units = make_units(a);
    const Potential pot = make_potential(a.potential, units);
    const auto modes = make_modes(a, {QuantizationMode::resummed});
    if (modes.size() != 1) throw ConfigError("spectrum takes a single --mode");
    const Range range = parse_range(a.n_range);
    SpectrumReport sr =
        solve_spectrum(pot, modes[0], make_quad(a), units, SpectrumRequest{range.lo, range.hi}, exec_of(a));
    if (a.oracle && !sr.rows.empty()) {
        const OracleRun o = run_oracle(pot, sr.rows.back().n + 1, a, units);
        for (const auto& n : o.notices) err << "oracle: " << n << '\n';
        std::vector<double> e;
        for (const auto& l : o.levels) e.push_back(l.energy);
        sr.attach_oracle(e);
    }

    Report r;
    r.fields = {{"potential", sr.potential}, {"mode", std::string(to_string(sr.mode))}, {"beta", sr.beta}};
    r.columns = {"n",     "energy",   "delta1",   "delta",    "shift",     "diverged", "residual", "iterations",
                 "shallow", "exact", "oracle", "abs_error", "rel_error", "error"};
    int failed = 0;
    for (const auto& row : sr.rows) {
        std::vector<Cell> c(r.columns.size());
        c[0] = std::int64_t{row.n};
        if (row.level) {
            const EnergyLevel& l = *row.level;
            c[1] = l.energy;
            if (l.correction) {
                c[2] = l.correction->delta1;
                c[3] = l.correction->delta;
                c[5] = std::int64_t{l.correction->diverged};
            }
            c[4] = l.shift;
            c[6] = l.residual;
            c[7] = std::int64_t{l.iterations};
            c[8] = std::int64_t{l.shallow};
        } else {
            ++failed;
            err << "level " << row.n << ": " << row.error << '\n';
        }
        c[9] = cell(row.exact);
        c[10] = cell(row.oracle);
        c[11] = cell(row.abs_error);
        c[12] = cell(row.rel_error);
        if (!row.error.empty()) c[13] = row.error;
        r.add_row(std::move(c));
    }
    emit(r, a, out);
    return failed ? kExitPartial : kExitOk;
}

int cmd_compare(const Args& a, std::ostream& out, std::ostream& err) {
    const UnitSystem units = make_units(a);
    const Potential pot = make_potential(a.potential, units);
    const auto modes = make_modes(a, {QuantizationMode::leading, QuantizationMode::first_order,
                                      QuantizationMode::resummed});
    const Range range = parse_range(a.n_range);
    const QuadConfig quad = make_quad(a);

    std::map<QuantizationMode, SpectrumReport> reports;
    int n_hi = range.lo - 1;
    for (auto m : modes) {
        reports[m] = solve_spectrum(pot, m, quad, units, SpectrumRequest{range.lo, range.hi}, exec_of(a));
        if (!reports[m].rows.empty()) n_hi = std::max(n_hi, reports[m].rows.back().n);
    }

    const bool exact = pot.has_exact_spectrum();
    std::vector<std::optional<double>> ref(static_cast<std::size_t>(std::max(0, n_hi + 1)));
    if (exact) {
        for (int n = range.lo; n <= n_hi; ++n) ref[n] = exact_or_none(pot, n, units);
    } else if (n_hi >= range.lo) {
        const OracleRun o = run_oracle(pot, n_hi + 1, a, units);
        for (const auto& note : o.notices) err << "oracle: " << note << '\n';
        if (!o.converged) err << "oracle: reference not converged to " << format_number(a.target) << '\n';
        for (const auto& l : o.levels)
            if (l.n <= n_hi) ref[l.n] = l.energy;
    }

    Report r;
    r.fields = {{"potential", pot.description()}, {"beta", units.beta()},
                {"reference", std::string(exact ? "exact" : "oracle")}};
    r.columns = {"n", "leading", "first_order", "resummed", "reference", "err_leading", "err_first", "err_resummed"};
    int failed = 0;
    for (int n = range.lo; n <= n_hi; ++n) {
        std::vector<Cell> c(r.columns.size());
        c[0] = std::int64_t{n};
        c[4] = cell(ref[n]);
        const QuantizationMode order[] = {QuantizationMode::leading, QuantizationMode::first_order,
                                          QuantizationMode::resummed};
        for (int k = 0; k < 3; ++k) {
            const auto it = reports.find(order[k]);
            if (it == reports.end()) continue;
            const auto& rows = it->second.rows;
            const auto row = std::find_if(rows.begin(), rows.end(), [&](const SpectrumRow& x) { return x.n == n; });
            if (row == rows.end()) continue;
            if (!row->level) {
                ++failed;
                err << to_string(order[k]) << " level " << n << ": " << row->error << '\n';
                continue;
            }
            c[1 + k] = row->level->energy;
            if (ref[n]) c[5 + k] = std::fabs(row->level->energy - *ref[n]);
        }
        r.add_row(std::move(c));
    }
    emit(r, a, out);
    return failed ? kExitPartial : kExitOk;
}

const std::vector<std::string>& sweep_parameters() {
    static const std::vector<std::string> names{"V0", "width", "A", "A2", "Z", "l", "c", "beta"};
    return names;
}

int cmd_sweep(const Args& a, std::ostream& out, std::ostream& err) {
    const auto& names = sweep_parameters();
    if (std::find(names.begin(), names.end(), a.parameter) == names.end())
        throw ConfigError("unknown sweep parameter '" + a.parameter + "'");
    if (a.values.empty()) throw ConfigError("sweep needs --values");
    const auto modes = make_modes(a, {QuantizationMode::resummed});
    if (modes.size() != 1) throw ConfigError("sweep takes a single --mode");
    const Range range = parse_range(a.n_range);
    const QuadConfig quad = make_quad(a);

    std::vector<double> values;
    for (const auto& v : a.values) values.push_back(parse_real(v, "--values"));

    Report r;
    r.fields = {{"parameter", a.parameter}, {"mode", std::string(to_string(modes[0]))}};
    r.columns = {"value", "potential", "beta", "n", "energy", "delta1", "delta", "exact", "abs_error", "error"};
    int failed = 0;
    for (double v : values) {
        Args b = a;
        PotentialArgs& p = b.potential;
        if (a.parameter == "V0") p.V0 = v;
        else if (a.parameter == "width") p.width = v;
        else if (a.parameter == "A") p.A = v;
        else if (a.parameter == "A2") p.A2 = v;
        else if (a.parameter == "Z") p.Z = v;
        else if (a.parameter == "c") p.c = v;
        else if (a.parameter == "l") p.l = parse_int(format_number(v), "--values");
        else b.beta = v;
        const UnitSystem units = make_units(b);
        const Potential pot = make_potential(p, units);
        const SpectrumReport sr = solve_spectrum(pot, modes[0], quad, units, SpectrumRequest{range.lo, range.hi},
                                                 exec_of(a));
        if (sr.rows.empty()) {
            ++failed;
            err << a.parameter << '=' << format_number(v) << ": no level in the requested range\n";
            r.add_row({v, sr.potential, units.beta(), {}, {}, {}, {}, {}, {}, std::string("no level in range")});
        }
        for (const auto& row : sr.rows) {
            std::vector<Cell> c(r.columns.size());
            c[0] = v;
            c[1] = sr.potential;
            c[2] = units.beta();
            c[3] = std::int64_t{row.n};
            if (row.level) {
                c[4] = row.level->energy;
                if (row.level->correction) {
                    c[5] = row.level->correction->delta1;
                    c[6] = row.level->correction->delta;
                }
            } else {
                ++failed;
                err << a.parameter << '=' << format_number(v) << " level " << row.n << ": " << row.error << '\n';
            }
            c[7] = cell(row.exact);
            c[8] = cell(row.abs_error);
            if (!row.error.empty()) c[9] = row.error;
            r.add_row(std::move(c));
        }
    }
    emit(r, a, out);
    return failed ? kExitPartial : kExitOk;
}

int cmd_oracle(const Args& a, std::ostream& out, std::ostream& err) {
    const UnitSystem units = make_units(a);
    const Potential pot = make_potential(a.potential, units);
    int count = a.count.value_or(0);
    if (!a.n_range.empty()) {
        if (a.count) throw ConfigError("give --count or --n, not both");
        count = *parse_range(a.n_range).hi + 1;
    }
    if (count < 1) throw ConfigError("oracle needs --count or --n");
    const OracleRun o = run_oracle(pot, count, a, units);
    for (const auto& n : o.notices) err << "oracle: " << n << '\n';

    Report r;
    r.fields = {{"potential", pot.description()},
                {"beta", units.beta()},
                {"target", a.target},
                {"converged", std::int64_t{o.converged}}};
    r.columns = {"n", "energy", "est_error", "exact", "abs_error"};
    const int lo = a.n_range.empty() ? 0 : parse_range(a.n_range).lo;
    for (const auto& l : o.levels) {
        if (l.n < lo) continue;
        const auto ex = exact_or_none(pot, l.n, units);
        r.add_row({std::int64_t{l.n}, l.energy, l.est_error, cell(ex),
                   ex ? Cell{std::fabs(l.energy - *ex)} : Cell{}});
    }
    emit(r, a, out);
    return o.converged && static_cast<int>(o.levels.size()) == count ? kExitOk : kExitPartial;
}

int cmd_delta1(const Args& a, std::ostream& out, std::ostream& err) {
    const UnitSystem units = make_units(a);
    const Potential pot = make_potential(a.potential, units);
    if (a.energies.empty()) throw ConfigError("delta1 needs --eps");
    const QuadConfig quad = make_quad(a);
    std::vector<double> energies;
    for (const auto& e : a.energies) energies.push_back(parse_real(e, "--eps"));

    Report r;
    r.fields = {{"potential", pot.description()}, {"beta", units.beta()}};
    r.columns = {"eps", "delta1", "delta", "gamma", "diverged", "error"};
    int failed = 0;
    for (double e : energies) {
        std::vector<Cell> c(r.columns.size());
        c[0] = e;
        try {
            const double d1 = delta1(pot, e, quad, units, exec_of(a));
            const CorrectionResult cr = delta_map(d1);
            c[1] = d1;
            c[2] = cr.delta;
            c[4] = std::int64_t{cr.diverged};
            try {
                c[3] = gamma(pot, e, quad, units, exec_of(a));
            } catch (const GammaUndefinedError& ex) {
                c[5] = std::string(ex.what());
            }
        } catch (const Error& ex) {
            ++failed;
            err << "eps " << format_number(e) << ": " << ex.what() << '\n';
            c[5] = std::string(ex.what());
        }
        r.add_row(std::move(c));
    }
    emit(r, a, out);
    return failed ? kExitPartial : kExitOk;
}

void add_potential_options(CLI::App& s, Args& a) {
    PotentialArgs& p = a.potential;
    s.add_option("--builtin", p.builtin, "harmonic | hyperbolic | coulomb | gaussian | quartic");
    s.add_option("--expr,--potential-expr", p.expression, "V(x) as an expression in x");
    s.add_option("--domain", p.domain, "lo,hi for --expr (inf allowed)");
    s.add_option("--family", p.family, "A,B,C,a2,a1,a0,s0")->delimiter(',')->expected(7);
    s.add_option("--A", p.A, "harmonic frequency or hyperbolic amplitude");
    s.add_option("--A2", p.A2, "hyperbolic A^2");
    s.add_option("--Z", p.Z, "coulomb charge");
    s.add_option("--l", p.l, "coulomb angular momentum")->check(CLI::NonNegativeNumber);
    s.add_option("--V0", p.V0, "gaussian depth");
    s.add_option("--width", p.width, "gaussian width");
    s.add_option("--c", p.c, "quartic coefficient");
    s.add_option("--horizon", p.horizon, "half-width of unbounded domains")->capture_default_str();
}

void add_common_options(CLI::App& s, Args& a) {
    add_potential_options(s, a);
    s.add_option("--beta", a.beta, "beta, with beta^2 = hbar^2 / 2m (default 1)");
    s.add_option("--hbar", a.hbar, "hbar (with --mass)");
    s.add_option("--mass", a.mass, "mass (with --hbar)");
    s.add_option("--base-nodes", a.base_nodes, "initial Gauss-Legendre nodes");
    s.add_option("--max-refinements", a.max_refinements, "node doublings allowed");
    s.add_option("--rel-tol", a.rel_tol, "quadrature relative tolerance");
    s.add_option("--eps-step", a.eps_step, "eps-derivative step relative to eps - V_min");
    s.add_option("--format", a.format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    s.add_option("--output,-o", a.output, "output file (default stdout)");
    s.add_flag("--serial", a.serial, "use the serial reference kernels");
}

void add_oracle_options(CLI::App& s, Args& a) {
    s.add_option("--target", a.target, "oracle error target")->capture_default_str();
    s.add_option("--x-lo", a.x_lo, "fixed grid box left end (skips convergence)");
    s.add_option("--x-hi", a.x_hi, "fixed grid box right end");
    s.add_option("--points", a.points, "fixed grid interior points");
    s.add_option("--richardson", a.richardson, "Richardson levels (1 or 2)")->check(CLI::Range(1, 2))
        ->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Args a;
    CLI::App app{"Bound-state energies of 1D wells by resummed semiclassical quantization", "wkbq"};
    app.require_subcommand(1);

    auto* spectrum = app.add_subcommand("spectrum", "energy levels in one mode");
    add_common_options(*spectrum, a);
    spectrum->add_option("--mode", a.modes, "leading | first_order | resummed")->expected(1);
    spectrum->add_option("--n", a.n_range, "level range a..b or a single index");
    spectrum->add_flag("--oracle", a.oracle, "attach grid-oracle reference energies");
    add_oracle_options(*spectrum, a);

    auto* compare = app.add_subcommand("compare", "all modes against the exact or oracle spectrum");
    add_common_options(*compare, a);
    compare->add_option("--mode", a.modes, "modes to include (default all)")->delimiter(',');
    compare->add_option("--n", a.n_range, "level range a..b or a single index");
    add_oracle_options(*compare, a);

    auto* sweep = app.add_subcommand("sweep", "spectrum over values of one parameter");
    add_common_options(*sweep, a);
    sweep->add_option("--param", a.parameter, "V0 | width | A | A2 | Z | l | c | beta")->required();
    sweep->add_option("--values", a.values, "comma-separated values")->delimiter(',')->required();
    sweep->add_option("--mode", a.modes, "leading | first_order | resummed")->expected(1);
    sweep->add_option("--n", a.n_range, "level range a..b or a single index");

    auto* oracle = app.add_subcommand("oracle", "finite-difference reference energies");
    add_common_options(*oracle, a);
    oracle->add_option("--count", a.count, "number of lowest levels");
    oracle->add_option("--n", a.n_range, "level range a..b");
    add_oracle_options(*oracle, a);

    auto* d1 = app.add_subcommand("delta1", "first-order correction, its resummation and gamma at given energies");
    add_common_options(*d1, a);
    d1->add_option("--eps", a.energies, "comma-separated energies")->delimiter(',')->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
        app.parse(std::move(rev));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitConfig;
    }

    CLI::App* used = app.get_subcommands().front();
    try {
        if (used == spectrum) return cmd_spectrum(a, out, err);
        if (used == compare) return cmd_compare(a, out, err);
        if (used == sweep) return cmd_sweep(a, out, err);
        if (used == oracle) return cmd_oracle(a, out, err);
        return cmd_delta1(a, out, err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n\n" << used->help();
        return kExitConfig;
    } catch (const InvalidParameterError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ConstructionError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitPartial;
    }
}

int run_cli(int argc, const char* const argv[], std::ostream& out, std::ostream& err) {
    return run_cli(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace wkbq
