/*
   Copyright 2026 The ccpnet Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "ccpnet/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "ccpnet/analytic.hpp"
#include "ccpnet/dataio.hpp"
#include "ccpnet/montecarlo.hpp"

namespace ccpnet::cli {

namespace {

/// Errors in user-supplied flags or inputs (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(fmt::format("{}: '{}' is not a number", what, s));
    }
}

std::pair<std::string, std::string> split_assignment(const std::string& s, const std::string& flag) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == s.size())
        throw ConfigError(fmt::format("{} expects <class>=<value>, got '{}'", flag, s));
    return {s.substr(0, eq), s.substr(eq + 1)};
}

std::map<std::string, double> assignments(const std::vector<std::string>& items, const std::string& flag) {
    std::map<std::string, double> out;
    for (const auto& item : items) {
        auto [k, v] = split_assignment(item, flag);
        out[k] = to_double(v, flag);
    }
    return out;
}

// "lo:hi:count" (inclusive linspace) or "a,b,c".
std::vector<double> parse_grid(const std::string& spec, const std::string& flag) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        for (std::string p; std::getline(ss, p, ':');)
            parts.push_back(p);
        if (parts.size() != 3)
            throw ConfigError(fmt::format("{} expects lo:hi:count, got '{}'", flag, spec));
        const double lo = to_double(parts[0], flag);
        const double hi = to_double(parts[1], flag);
        const double count = to_double(parts[2], flag);
        if (!(count >= 1.0) || count != std::floor(count))
            throw ConfigError(fmt::format("{}: count must be a positive integer", flag));
        const auto n = static_cast<std::size_t>(count);
        for (std::size_t i = 0; i < n; ++i)
            out.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
        if (n > 1)
            out.back() = hi;
    } else {
        std::stringstream ss(spec);
        for (std::string p; std::getline(ss, p, ',');)
            out.push_back(to_double(p, flag));
    }
    if (out.empty())
        throw ConfigError(fmt::format("{}: empty grid", flag));
    return out;
}

struct HomogeneousFlags {
    std::string ce = "bis-2010h1";
    std::vector<std::string> alpha;
    double rho = 0.0;
    std::string cleared;
};

void add_homogeneous_flags(CLI::App* app, HomogeneousFlags& f) {
    app->add_option("--ce", f.ce, "credit exposures: bis-2010h1, equal:K, or a comma list")
        ->capture_default_str();
    app->add_option("--alpha", f.alpha, "risk multiplier override <class>=<value>")->take_all();
    app->add_option("--rho", f.rho, "cross-class correlation")->capture_default_str();
    app->add_option("--cleared", f.cleared, "class cleared by the CCP (default: credit, else last)");
}

HomogeneousSpec homogeneous_spec(const HomogeneousFlags& f) {
    HomogeneousSpec spec = homogeneous_from_ce(f.ce);
    spec.rho = f.rho;
    auto index_of = [&](const std::string& name) -> std::size_t {
        for (std::size_t k = 0; k < spec.class_names.size(); ++k)
            if (spec.class_names[k] == name)
                return k;
        throw ConfigError(fmt::format("unknown class '{}'", name));
    };
    if (!f.cleared.empty())
        spec.cleared_class = index_of(f.cleared);
    for (const auto& [name, a] : assignments(f.alpha, "--alpha"))
        spec.alphas[index_of(name)] = a;
    if (auto report = validate(spec); !report.ok())
        throw ConfigError(report.summary());
    return spec;
}

int cmd_threshold(const HomogeneousFlags& f, std::ostream& out) {
    const auto result = analytic::min_clearing_members(homogeneous_spec(f));
    if (!result.n_star) {
        out << "n_star,never\n";
        return kOk;
    }
    const long n = *result.n_star;
    out << "n_star," << n << "\n";
    out << "members,bilateral_ee,ccp_ee\n";
    for (long m = std::max(2L, n - 1); m <= n + 1; ++m)
        out << fmt::format("{},{},{}\n", m, result.bilateral_ee(m), result.ccp_ee(m));
    return kOk;
}

struct SurfaceFlags {
    HomogeneousFlags base;
    std::string alpha_grid = "1:3:20";
    std::string rho_grid = "0:0.2:20";
    std::string out;
};

int cmd_surface(const SurfaceFlags& f, std::ostream& out) {
    const auto spec = homogeneous_spec(f.base);
    const auto alphas = parse_grid(f.alpha_grid, "--alpha-grid");
    const auto rhos = parse_grid(f.rho_grid, "--rho-grid");
    for (double a : alphas)
        if (!(a > 0.0))
            throw ConfigError("--alpha-grid values must be positive");
    for (double r : rhos)
        if (!(r >= 0.0 && r < 1.0))
            throw ConfigError("--rho-grid values must lie in [0, 1)");
    const auto surface = analytic::threshold_surface(spec, alphas, rhos);
    if (f.out.empty() || f.out == "-") {
        io::write_surface_csv(out, surface);
    } else {
        std::ofstream file(f.out);
        if (!file)
            throw std::runtime_error(fmt::format("cannot write '{}'", f.out));
        io::write_surface_csv(file, surface);
    }
    return kOk;
}

struct ScenarioFlags {
    std::string config;
    std::optional<std::string> notionals;
    std::vector<std::string> beta;
    std::vector<std::string> w;
    std::vector<std::string> marginal;
    std::optional<double> rho;
    std::optional<std::uint64_t> paths;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    std::optional<std::string> out;
    std::optional<bool> mirror;
    std::optional<bool> antisymmetric;
    std::optional<double> level;
    std::uint64_t histogram_paths = 100'000;
    bool check = false;
    bool dump_reductions = false;
};

io::RunConfig run_config(const ScenarioFlags& f) {
    io::RunConfig run = f.config.empty() ? io::RunConfig{} : io::load_run_config(f.config);
    if (f.notionals)
        run.notionals = *f.notionals;
    for (const auto& [k, v] : assignments(f.beta, "--beta")) {
        if (!(v > 0.0))
            throw ConfigError("--beta values must be positive");
        run.betas[k] = v;
    }
    for (const auto& item : f.marginal) {
        auto [k, v] = split_assignment(item, "--marginal");
        auto m = parse_marginal(v);
        if (!m)
            throw ConfigError(fmt::format("--marginal: '{}' must be gaussian or t3", v));
        run.marginals[k] = *m;
    }
    if (f.rho) {
        if (!(*f.rho >= 0.0 && *f.rho < 1.0))
            throw ConfigError("--rho must lie in [0, 1)");
        run.rho = *f.rho;
    }
    if (f.paths)
        run.paths = *f.paths;
    if (f.seed)
        run.seed = *f.seed;
    if (f.out)
        run.out_dir = *f.out;
    if (f.mirror)
        run.mirror_dealers = *f.mirror;
    if (f.antisymmetric)
        run.antisymmetric = *f.antisymmetric;
    if (f.level) {
        if (!(*f.level > 0.0 && *f.level < 1.0))
            throw ConfigError("--level must lie in (0, 1)");
        run.level = *f.level;
    }
    return run;
}

// --w applies to every scenario that clears the class.
void apply_fraction_overrides(std::vector<ClearingScenario>& scenarios, const MarketConfig& config,
                              const std::vector<std::string>& items) {
    for (const auto& [name, w] : assignments(items, "--w")) {
        if (!(w >= 0.0 && w <= 1.0))
            throw ConfigError("--w values must lie in [0, 1]");
        const auto k = config.class_index(name);
        if (!k)
            throw ConfigError(fmt::format("--w: unknown class '{}'", name));
        bool used = false;
        for (auto& s : scenarios)
            for (auto& c : s.cleared)
                if (c.class_index == *k) {
                    c.fraction = w;
                    used = true;
                }
        if (!used)
            throw ConfigError(fmt::format("--w: no scenario clears class '{}'", name));
    }
}

std::vector<double> closed_form_total_ratios(MarketConfig market, const std::vector<ClearingScenario>& scenarios) {
    for (auto& c : market.classes)
        c.marginal = Marginal::GaussianUnit;
    std::vector<double> totals;
    for (const auto& s : scenarios)
        totals.push_back(analytic::expected_exposures(market, s).total);
    std::vector<double> ratios;
    for (double t : totals)
        ratios.push_back(t / totals.front());
    return ratios;
}

int cmd_scenarios(const ScenarioFlags& f, std::ostream& out, std::ostream& err) {
    io::RunConfig run;
    MarketConfig market;
    std::vector<ClearingScenario> scenarios;
    try {
        run = run_config(f);
        market = io::build_market(run);
        if (auto report = validate(market); !report.ok())
            throw ConfigError(report.summary());
        scenarios = io::build_scenarios(run, market);
        apply_fraction_overrides(scenarios, market, f.w);
        if (run.paths < 1000)
            throw ConfigError("--paths must be at least 1000");
    } catch (const io::DataError& e) {
        throw ConfigError(e.what());
    }

    mc::SimulationOptions opts;
    opts.n_paths = run.paths;
    opts.seed = run.seed;
    opts.threads = f.threads;
    opts.level = run.level;
    opts.reduction_paths = std::min(f.histogram_paths, run.paths);
    opts.check_invariants = f.check;

    err << fmt::format("simulating {} paths over {} dealers and {} scenarios...\n", run.paths,
                       market.num_dealers(), scenarios.size());
    const auto start = std::chrono::steady_clock::now();
    auto report = mc::simulate(market, mc::sampling_model(market, run.antisymmetric), scenarios, opts);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    err << fmt::format("done in {:.1f} s\n", elapsed.count());

    report.notes.push_back(fmt::format("notionals: {}", run.notionals));
    report.notes.push_back(run.mirror_dealers
                               ? "European dealers mirror the US table one-to-one"
                               : "European dealers each hold the average US notionals");
    std::string fractions;
    for (const auto& s : scenarios)
        for (const auto& c : s.cleared)
            fractions += fmt::format("{}{}.{}={}", fractions.empty() ? "" : " ", s.id,
                                     market.classes[c.class_index].name, c.fraction);
    report.notes.push_back("clearing fractions: " + (fractions.empty() ? std::string("none") : fractions));
    std::string betas;
    for (const auto& c : market.classes)
        betas += fmt::format("{}{}={}", betas.empty() ? "" : " ", c.name, c.beta);
    report.notes.push_back("beta: " + betas);

    if (market.all_gaussian()) {
        for (const auto& s : scenarios) {
            auto ee = analytic::expected_exposures(market, s);
            report.analytic.push_back({ee.scenario, std::move(ee.per_dealer), ee.total});
        }
    }
    {
        io::RunConfig mirrored = run;
        mirrored.mirror_dealers = true;
        io::RunConfig averaged = run;
        averaged.mirror_dealers = false;
        report.sensitivity.push_back(
            {"mirrored", closed_form_total_ratios(io::build_market(mirrored), scenarios)});
        report.sensitivity.push_back(
            {"averaged", closed_form_total_ratios(io::build_market(averaged), scenarios)});
    }

    const auto files = io::write_report(report, run.out_dir, f.dump_reductions);
    out << io::render_tables(report);
    for (const auto& p : files)
        err << "wrote " << p.string() << "\n";
    return kOk;
}

int cmd_report(const std::string& in, const std::string& out_dir, std::ostream& out, std::ostream& err) {
    mc::RiskReport report;
    try {
        report = io::load_report(in);
    } catch (const io::DataError& e) {
        throw ConfigError(e.what());
    }
    out << io::render_tables(report);
    if (!out_dir.empty())
        for (const auto& p : io::write_report(report, out_dir))
            err << "wrote " << p.string() << "\n";
    return kOk;
}

} // namespace

HomogeneousSpec homogeneous_from_ce(const std::string& ce) {
    HomogeneousSpec spec;
    if (auto table = io::builtin_credit_exposures(ce)) {
        spec.class_names = table->classes;
        spec.credit_exposures = table->exposures;
        for (std::size_t k = 0; k < table->classes.size(); ++k)
            if (table->classes[k] == table->cds_class)
                spec.cleared_class = k;
    } else if (ce.rfind("equal:", 0) == 0) {
        const double k = to_double(ce.substr(6), "--ce");
        if (!(k >= 1.0) || k != std::floor(k) || k > 1e6)
            throw ConfigError("--ce equal:K needs a positive integer K");
        for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
            spec.class_names.push_back(fmt::format("c{}", i + 1));
            spec.credit_exposures.push_back(1.0);
        }
        spec.cleared_class = spec.credit_exposures.size() - 1;
    } else {
        std::stringstream ss(ce);
        for (std::string p; std::getline(ss, p, ',');) {
            spec.class_names.push_back(fmt::format("c{}", spec.class_names.size() + 1));
            spec.credit_exposures.push_back(to_double(p, "--ce"));
        }
        if (spec.credit_exposures.empty())
            throw ConfigError("--ce: no exposures given");
        spec.cleared_class = spec.credit_exposures.size() - 1;
    }
    spec.alphas.assign(spec.credit_exposures.size(), 1.0);
    return spec;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bilateral versus multilateral netting of OTC dealer exposures", "ccpnet"};
    app.require_subcommand(1);

    HomogeneousFlags threshold_flags;
    auto* threshold = app.add_subcommand("threshold", "minimum clearing members in a homogeneous market");
    add_homogeneous_flags(threshold, threshold_flags);

    SurfaceFlags surface_flags;
    auto* surface = app.add_subcommand("surface", "minimum clearing members over an (alpha, rho) grid");
    add_homogeneous_flags(surface, surface_flags.base);
    surface->add_option("--alpha-grid", surface_flags.alpha_grid, "lo:hi:count or comma list")
        ->capture_default_str();
    surface->add_option("--rho-grid", surface_flags.rho_grid, "lo:hi:count or comma list")
        ->capture_default_str();
    surface->add_option("--out", surface_flags.out, "output file (default: standard output)");

    ScenarioFlags sf;
    auto* scen = app.add_subcommand("scenarios", "simulate the five clearing scenarios");
    scen->add_option("--config", sf.config, "key = value run configuration");
    scen->add_option("--notionals", sf.notionals, "built-in table (occ-2009q1, occ-2010q4) or CSV path");
    scen->add_option("--beta", sf.beta, "risk per notional override <class>=<value>")->take_all();
    scen->add_option("--w", sf.w, "clearing fraction override <class>=<value>")->take_all();
    scen->add_option("--marginal", sf.marginal, "<class>=<gaussian|t3>")->take_all();
    scen->add_option("--rho", sf.rho, "cross-class correlation");
    scen->add_option("--paths", sf.paths, "number of simulated paths");
    scen->add_option("--seed", sf.seed, "random seed");
    scen->add_option("--threads", sf.threads, "worker threads (0 = all cores); never changes results");
    scen->add_option("--out", sf.out, "output directory");
    scen->add_flag("--mirror,!--no-mirror", sf.mirror, "European dealers mirror the US table (default)");
    scen->add_flag("--antisymmetric,!--independent-pairs", sf.antisymmetric,
                   "couple the two directions of a pair (X_ji = -X_ij)");
    scen->add_option("--level", sf.level, "VaR/ES confidence level");
    scen->add_option("--histogram-paths", sf.histogram_paths, "paths kept for exposure-reduction histograms")
        ->capture_default_str();
    scen->add_flag("--check", sf.check, "verify pathwise invariants on every path");
    scen->add_flag("--dump-reductions", sf.dump_reductions,
                   "also write every kept exposure reduction to reductions.csv");

    std::string report_in;
    std::string report_out;
    auto* rep = app.add_subcommand("report", "render tables from a report.json dump");
    rep->add_option("--in", report_in, "report.json written by scenarios")->required();
    rep->add_option("--out", report_out, "rewrite all report files into this directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        if (threshold->parsed())
            return cmd_threshold(threshold_flags, out);
        if (surface->parsed())
            return cmd_surface(surface_flags, out);
        if (scen->parsed())
            return cmd_scenarios(sf, out, err);
        if (rep->parsed())
            return cmd_report(report_in, report_out, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const io::DataError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return kConfigError;
}

} // namespace ccpnet::cli
