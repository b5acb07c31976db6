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

#include "ccpnet/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"

namespace ccpnet::io {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

NotionalTable occ_2009q1() {
    return {"occ-2009q1",
            kOccClasses,
            {{"JP Morgan Chase", {8422, 10633, 51221, 7495}},
             {"Bank of America", {9132, 6908, 50702, 5649}},
             {"Goldman Sachs", {1631, 6754, 30958, 6601}},
             {"Morgan Stanley", {1127, 3530, 26112, 6307}},
             {"Citigroup", {4743, 5868, 15199, 2950}},
             {"Wells Fargo", {1217, 543, 2748, 286}},
             {"HSBC", {595, 185, 1565, 913}},
             {"Taunus", {667, 20, 162, 144}},
             {"Bank of New York", {371, 304, 404, 1}},
             {"State Street", {571, 45, 24, 0}}}};
}

NotionalTable occ_2010q4() {
    return {"occ-2010q4",
            kOccClasses,
            {{"JP Morgan Chase", {11807, 8899, 49332, 5472}},
             {"Bank of America", {10287, 5848, 43482, 4367}},
             {"Citigroup", {6895, 7071, 28639, 2546}},
             {"Goldman Sachs", {3805, 8568, 27392, 4233}},
             {"Morgan Stanley", {5459, 3855, 27162, 4648}},
             {"Wells Fargo", {1081, 463, 1806, 93}},
             {"HSBC", {758, 127, 1901, 700}},
             {"Bank of New York", {420, 367, 555, 1}},
             {"Taunus", {848, 21, 199, 33}},
             {"State Street", {599, 76, 79, 0}}}};
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Splits one CSV record; double quotes group text containing commas.
std::vector<std::string> split_csv(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t p = 0; p < line.size(); ++p) {
        const char c = line[p];
        if (quoted) {
            if (c == '"') {
                if (p + 1 < line.size() && line[p + 1] == '"') {
                    cur += '"';
                    ++p;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted)
        throw DataError(fmt::format("line {}: unterminated quote", line_no));
    fields.push_back(trim(cur));
    return fields;
}

std::optional<double> parse_number(std::string s) {
    s.erase(std::remove(s.begin(), s.end(), ','), s.end());
    s.erase(std::remove(s.begin(), s.end(), '_'), s.end());
    if (s.empty())
        return std::nullopt;
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end)
        return std::nullopt;
    return v;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos)
        return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string full(double v) { return fmt::format("{}", v); }

} // namespace

std::optional<NotionalTable> builtin_notionals(std::string_view name) {
    if (name == "occ-2009q1")
        return occ_2009q1();
    if (name == "occ-2010q4")
        return occ_2010q4();
    return std::nullopt;
}

NotionalTable parse_notionals(std::istream& in, std::string source) {
    NotionalTable table;
    table.source = std::move(source);

    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    std::size_t header_line = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#')
            continue;
        header = split_csv(t, line_no);
        header_line = line_no;
        break;
    }
    if (header.empty())
        throw DataError(fmt::format("{}: empty notional table", table.source));
    if (header.size() < 2)
        throw DataError(fmt::format("line {}: header needs a dealer column and at least one class", header_line));

    std::size_t dealer_col = header.size();
    std::vector<std::string> names;
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const auto name = lower(header[c]);
        if (name.empty())
            throw DataError(fmt::format("line {}: empty column name", header_line));
        if (name == "dealer") {
            dealer_col = c;
            continue;
        }
        if (std::find(names.begin(), names.end(), name) != names.end())
            throw DataError(fmt::format("line {}: duplicate column '{}'", header_line, name));
        names.push_back(name);
        cols.push_back(c);
    }
    if (dealer_col == header.size())
        throw DataError(fmt::format("line {}: header has no 'dealer' column", header_line));

    // The OCC class set is reordered to its canonical order.
    std::vector<std::size_t> order(names.size());
    for (std::size_t k = 0; k < order.size(); ++k)
        order[k] = k;
    if (std::set<std::string>(names.begin(), names.end()) ==
        std::set<std::string>(kOccClasses.begin(), kOccClasses.end())) {
        for (std::size_t k = 0; k < kOccClasses.size(); ++k)
            order[k] = static_cast<std::size_t>(
                std::find(names.begin(), names.end(), kOccClasses[k]) - names.begin());
    }
    for (std::size_t k : order)
        table.classes.push_back(names[k]);

    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#')
            continue;
        const auto fields = split_csv(t, line_no);
        if (fields.size() != header.size())
            throw DataError(fmt::format("line {}: expected {} fields, got {}", line_no, header.size(),
                                        fields.size()));
        NotionalRow row;
        row.dealer = fields[dealer_col];
        if (row.dealer.empty())
            throw DataError(fmt::format("line {}: empty dealer name", line_no));
        for (std::size_t k : order) {
            const auto v = parse_number(fields[cols[k]]);
            if (!v || !std::isfinite(*v))
                throw DataError(fmt::format("line {}: '{}' is not a number", line_no, fields[cols[k]]));
            if (*v < 0.0)
                throw DataError(fmt::format("line {}: negative notional {} for '{}'", line_no, *v, names[k]));
            row.notionals.push_back(*v);
        }
        table.rows.push_back(std::move(row));
    }
    if (table.rows.empty())
        throw DataError(fmt::format("{}: notional table has no dealer rows", table.source));
    return table;
}

NotionalTable load_notionals(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError(fmt::format("cannot open notional file '{}'", path.string()));
    return parse_notionals(in, path.string());
}

NotionalTable resolve_notionals(const std::string& ref, const fs::path& base_dir) {
    if (auto builtin = builtin_notionals(ref))
        return *builtin;
    fs::path p(ref);
    if (p.is_relative() && !base_dir.empty())
        p = base_dir / p;
    return load_notionals(p);
}

std::optional<CreditExposureTable> builtin_credit_exposures(std::string_view name) {
    if (name == "bis-2010h1")
        return CreditExposureTable{"bis-2010h1",
                                   {"commodity", "equity", "fx", "interest_rate", "credit", "other"},
                                   {457, 706, 2524, 17533, 1666, 1788},
                                   "credit"};
    return std::nullopt;
}

double default_beta(std::string_view class_name) { return class_name == "credit" ? 0.0098 : 0.0039; }

MarketConfig build_market(const NotionalTable& table, const MarketOptions& options) {
    MarketConfig config;
    config.rho = options.rho;
    config.report_scale = kMillionsPerBillion;
    for (const auto& name : table.classes)
        config.classes.push_back({name, default_beta(name), Marginal::GaussianUnit});

    for (const auto& [name, beta] : options.betas) {
        auto k = config.class_index(name);
        if (!k)
            throw DataError(fmt::format("beta given for unknown class '{}'", name));
        config.classes[*k].beta = beta;
    }
    for (const auto& [name, marginal] : options.marginals) {
        auto k = config.class_index(name);
        if (!k)
            throw DataError(fmt::format("marginal given for unknown class '{}'", name));
        config.classes[*k].marginal = marginal;
    }

    for (const auto& row : table.rows)
        config.dealers.push_back({row.dealer, row.notionals});
    if (options.mirror_dealers) {
        for (const auto& row : table.rows)
            config.dealers.push_back({row.dealer + " (EU)", row.notionals});
    } else {
        std::vector<double> avg(table.classes.size(), 0.0);
        for (const auto& row : table.rows)
            for (std::size_t k = 0; k < avg.size(); ++k)
                avg[k] += row.notionals[k] / static_cast<double>(table.rows.size());
        for (std::size_t r = 0; r < table.rows.size(); ++r)
            config.dealers.push_back({fmt::format("European dealer {}", r + 1), avg});
    }
    return config;
}

std::vector<ClearingScenario> standard_scenarios(const MarketConfig& config, double w_swaps,
                                                 double w_credit, const std::string& swaps_class,
                                                 const std::string& credit_class) {
    const auto irs = config.class_index(swaps_class);
    const auto cds = config.class_index(credit_class);
    if (!irs || !cds)
        throw DataError(fmt::format("market needs classes '{}' and '{}'", swaps_class, credit_class));
    return {no_ccp(),
            single_ccp("irs_ccp", *irs, w_swaps),
            single_ccp("cds_ccp", *cds, w_credit),
            two_ccps("two_ccps", *irs, w_swaps, *cds, w_credit),
            joint_ccp("joint_ccp", {{*irs, w_swaps}, {*cds, w_credit}})};
}

namespace {

bool parse_bool(const std::string& v, std::size_t line_no) {
    const auto l = lower(v);
    if (l == "true" || l == "1" || l == "yes" || l == "on")
        return true;
    if (l == "false" || l == "0" || l == "no" || l == "off")
        return false;
    throw DataError(fmt::format("line {}: '{}' is not a boolean", line_no, v));
}

double parse_double(const std::string& v, std::size_t line_no) {
    auto d = parse_number(v);
    if (!d || !std::isfinite(*d))
        throw DataError(fmt::format("line {}: '{}' is not a number", line_no, v));
    return *d;
}

std::uint64_t parse_count(const std::string& v, std::size_t line_no) {
    std::string s = v;
    s.erase(std::remove(s.begin(), s.end(), '_'), s.end());
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc{} && ptr == s.data() + s.size())
        return out;
    // Accept 1e6 style counts when exact.
    const double d = parse_double(v, line_no);
    if (d >= 0.0 && d == std::floor(d) && d < 1.8e19)
        return static_cast<std::uint64_t>(d);
    throw DataError(fmt::format("line {}: '{}' is not a non-negative integer", line_no, v));
}

} // namespace

RunConfig parse_run_config(std::istream& in, const fs::path& base_dir) {
    RunConfig run;
    run.base_dir = base_dir;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const auto t = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (t.empty())
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw DataError(fmt::format("line {}: expected key = value", line_no));
        const auto key = trim(t.substr(0, eq));
        const auto value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty())
            throw DataError(fmt::format("line {}: empty key or value", line_no));

        if (key == "notionals") {
            run.notionals = value;
        } else if (key.rfind("beta.", 0) == 0 && key.size() > 5) {
            const double b = parse_double(value, line_no);
            if (!(b > 0.0))
                throw DataError(fmt::format("line {}: beta must be positive", line_no));
            run.betas[key.substr(5)] = b;
        } else if (key == "rho") {
            run.rho = parse_double(value, line_no);
            if (!(run.rho >= 0.0 && run.rho < 1.0))
                throw DataError(fmt::format("line {}: rho must lie in [0, 1)", line_no));
        } else if (key.rfind("marginal.", 0) == 0 && key.size() > 9) {
            auto m = parse_marginal(lower(value));
            if (!m)
                throw DataError(fmt::format("line {}: marginal must be gaussian or t3", line_no));
            run.marginals[key.substr(9)] = *m;
        } else if (key.rfind("scenario.", 0) == 0) {
            const auto rest = key.substr(9);
            const auto dot = rest.find(".w.");
            if (dot == std::string::npos || dot == 0 || dot + 3 >= rest.size())
                throw DataError(fmt::format("line {}: expected scenario.<id>.w.<class>", line_no));
            const auto id = rest.substr(0, dot);
            if (std::find(kScenarioIds.begin(), kScenarioIds.end(), id) == kScenarioIds.end())
                throw DataError(fmt::format("line {}: unknown scenario '{}'", line_no, id));
            const double w = parse_double(value, line_no);
            if (!(w >= 0.0 && w <= 1.0))
                throw DataError(fmt::format("line {}: clearing fraction must lie in [0, 1]", line_no));
            run.scenario_w[id][rest.substr(dot + 3)] = w;
        } else if (key == "paths") {
            run.paths = parse_count(value, line_no);
        } else if (key == "seed") {
            run.seed = parse_count(value, line_no);
        } else if (key == "mirror_dealers") {
            run.mirror_dealers = parse_bool(value, line_no);
        } else if (key == "antisymmetric") {
            run.antisymmetric = parse_bool(value, line_no);
        } else if (key == "level") {
            run.level = parse_double(value, line_no);
            if (!(run.level > 0.0 && run.level < 1.0))
                throw DataError(fmt::format("line {}: level must lie in (0, 1)", line_no));
        } else if (key == "out_dir") {
            run.out_dir = value;
        } else {
            throw DataError(fmt::format("line {}: unknown key '{}'", line_no, key));
        }
    }
    return run;
}

RunConfig load_run_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError(fmt::format("cannot open config '{}'", path.string()));
    return parse_run_config(in, path.parent_path());
}

MarketConfig build_market(const RunConfig& run) {
    MarketOptions opts;
    opts.betas = run.betas;
    opts.marginals = run.marginals;
    opts.rho = run.rho;
    opts.mirror_dealers = run.mirror_dealers;
    return build_market(resolve_notionals(run.notionals, run.base_dir), opts);
}

std::vector<ClearingScenario> build_scenarios(const RunConfig& run, const MarketConfig& config) {
    auto scenarios = standard_scenarios(config);
    for (const auto& [id, overrides] : run.scenario_w) {
        auto it = std::find_if(scenarios.begin(), scenarios.end(),
                               [&](const ClearingScenario& s) { return s.id == id; });
        if (it == scenarios.end())
            throw DataError(fmt::format("unknown scenario '{}'", id));
        for (const auto& [name, w] : overrides) {
            const auto k = config.class_index(name);
            if (!k)
                throw DataError(fmt::format("scenario '{}': unknown class '{}'", id, name));
            auto cc = std::find_if(it->cleared.begin(), it->cleared.end(),
                                   [&](const ClearedClass& c) { return c.class_index == *k; });
            if (cc != it->cleared.end()) {
                cc->fraction = w;
                continue;
            }
            switch (it->kind) {
            case ScenarioKind::NoCCP:
            case ScenarioKind::SingleCCP:
                throw DataError(fmt::format("scenario '{}' cannot clear class '{}'", id, name));
            case ScenarioKind::TwoCCPs: {
                int next = 0;
                for (const auto& c : it->cleared)
                    next = std::max(next, c.ccp + 1);
                it->cleared.push_back({*k, w, next});
                break;
            }
            case ScenarioKind::JointCCP:
                it->cleared.push_back({*k, w, 0});
                break;
            }
        }
    }
    for (const auto& s : scenarios)
        if (auto r = validate(s, config.num_classes()); !r.ok())
            throw DataError(r.summary());
    return scenarios;
}

std::string render_tables(const mc::RiskReport& report) {
    using mc::Measure;
    std::string out;
    const std::size_t base = report.base_index();
    std::vector<std::size_t> cols;
    for (std::size_t s = 0; s < report.scenarios.size(); ++s)
        if (s != base)
            cols.push_back(s);

    std::size_t name_w = 8;
    for (const auto& d : report.dealers)
        name_w = std::max(name_w, d.size());
    name_w += 2;

    out += "# ccpnet exposure report\n";
    out += fmt::format("# paths: {}  seed: {}  level: {:.6g}  rho: {:.6g}\n", report.n_paths, report.seed,
                       report.level, report.rho);
    out += fmt::format("# pair draws: {}\n", report.antisymmetric
                                                   ? "antisymmetric (X_ji = -X_ij in standardized units)"
                                                   : "independent for each ordered pair");
    std::string margs;
    for (const auto& m : report.marginals)
        margs += (margs.empty() ? "" : " ") + m;
    out += fmt::format("# marginals: {}\n", margs);
    for (const auto& note : report.notes)
        out += fmt::format("# note: {}\n", note);
    out += "# all exposures in millions USD; ratios are relative to " + report.scenarios[base].id + "\n";

    auto header = [&](std::string_view title) {
        out += fmt::format("\n{}\n{:<{}}", title, "dealer", name_w);
        for (auto s : cols)
            out += fmt::format("{:>12}", report.scenarios[s].id);
        out += "\n";
    };

    auto ratio_block = [&](Measure m, std::string_view title) {
        header(title);
        for (std::size_t i = 0; i < report.dealers.size(); ++i) {
            out += fmt::format("{:<{}}", report.dealers[i], name_w);
            for (auto s : cols) {
                const bool flag = m != Measure::EE && report.scenarios[s].dealers[i].low_confidence;
                out += fmt::format("{:>12}", fmt::format("{:.6g}{}", report.ratio(s, i, m), flag ? "*" : ""));
            }
            out += "\n";
        }
        if (m == Measure::EE) {
            out += fmt::format("{:<{}}", "Total", name_w);
            for (auto s : cols)
                out += fmt::format("{:>12.6g}", report.total_ratio(s));
            out += "\n";
        }
    };

    ratio_block(Measure::EE, "Expected exposure, ratio to base (simulated)");
    if (!report.analytic.empty()) {
        const auto& a_base = report.analytic.at(base);
        header("Expected exposure, ratio to base (closed form)");
        for (std::size_t i = 0; i < report.dealers.size(); ++i) {
            out += fmt::format("{:<{}}", report.dealers[i], name_w);
            for (auto s : cols)
                out += fmt::format("{:>12.6g}", report.analytic[s].per_dealer[i] / a_base.per_dealer[i]);
            out += "\n";
        }
        out += fmt::format("{:<{}}", "Total", name_w);
        for (auto s : cols)
            out += fmt::format("{:>12.6g}", report.analytic[s].total / a_base.total);
        out += "\n";
    }
    const int pct = static_cast<int>(std::lround(report.level * 100.0));
    ratio_block(Measure::VaR, fmt::format("Value at risk ({}%), ratio to base", pct));
    ratio_block(Measure::ES, fmt::format("Expected shortfall ({}%), ratio to base", pct));

    out += "\nMean of the maximum exposure across dealers (millions)\n";
    for (const auto& s : report.scenarios)
        out += fmt::format("{:>12}", s.id);
    out += "\n";
    for (const auto& s : report.scenarios)
        out += fmt::format("{:>12.6g}", s.mean_max);
    out += "\n";
    for (std::size_t s = 0; s < report.scenarios.size(); ++s)
        out += fmt::format("{:>12.6g}", report.mean_max_ratio(s));
    out += "   (ratio)\n";

    out += "\nTotal expected exposure (millions)\n";
    for (const auto& s : report.scenarios)
        out += fmt::format("{:>12}", s.id);
    out += "\n";
    for (const auto& s : report.scenarios)
        out += fmt::format("{:>12.6g}", s.total_ee);
    out += "\n";

    if (!report.sensitivity.empty()) {
        out += "\nDealer construction sensitivity (closed-form total EE ratio)\n";
        out += fmt::format("{:<{}}", "market", name_w);
        for (auto s : cols)
            out += fmt::format("{:>12}", report.scenarios[s].id);
        out += "\n";
        for (const auto& row : report.sensitivity) {
            out += fmt::format("{:<{}}", row.label, name_w);
            for (auto s : cols)
                out += fmt::format("{:>12.6g}", row.total_ratios.at(s));
            out += "\n";
        }
    }
    bool any_low = false;
    for (const auto& s : report.scenarios)
        for (const auto& c : s.dealers)
            any_low = any_low || c.low_confidence;
    if (any_low)
        out += fmt::format("\n* fewer than {} tail exceedances; estimate is low-confidence\n",
                           mc::kMinTailExceedances);
    return out;
}

std::string report_to_json(const mc::RiskReport& report) {
    json j;
    j["dealers"] = report.dealers;
    j["n_paths"] = report.n_paths;
    j["seed"] = report.seed;
    j["level"] = report.level;
    j["rho"] = report.rho;
    j["antisymmetric"] = report.antisymmetric;
    j["marginals"] = report.marginals;
    j["notes"] = report.notes;
    j["scenarios"] = json::array();
    for (const auto& s : report.scenarios) {
        json js;
        js["id"] = s.id;
        js["kind"] = std::string(to_string(s.kind));
        js["total_ee"] = s.total_ee;
        js["total_ee_se"] = s.total_ee_se;
        js["mean_max"] = s.mean_max;
        js["mean_max_se"] = s.mean_max_se;
        js["dealers"] = json::array();
        for (const auto& c : s.dealers)
            js["dealers"].push_back({{"ee", c.ee},
                                     {"ee_se", c.ee_se},
                                     {"var", c.var},
                                     {"es", c.es},
                                     {"exceedances", c.exceedances},
                                     {"low_confidence", c.low_confidence}});
        j["scenarios"].push_back(std::move(js));
    }
    j["analytic"] = json::array();
    for (const auto& a : report.analytic)
        j["analytic"].push_back({{"scenario", a.scenario}, {"per_dealer", a.per_dealer}, {"total", a.total}});
    j["sensitivity"] = json::array();
    for (const auto& r : report.sensitivity)
        j["sensitivity"].push_back({{"label", r.label}, {"total_ratios", r.total_ratios}});
    j["reductions"] = json::array();
    for (const auto& r : report.reductions)
        j["reductions"].push_back({{"scenario", r.scenario},
                                   {"edges", r.histogram.edges},
                                   {"counts", r.histogram.counts}});
    return j.dump(1);
}

mc::RiskReport report_from_json(const std::string& text) {
    mc::RiskReport report;
    try {
        const auto j = json::parse(text);
        report.dealers = j.at("dealers").get<std::vector<std::string>>();
        report.n_paths = j.at("n_paths").get<std::uint64_t>();
        report.seed = j.at("seed").get<std::uint64_t>();
        report.level = j.at("level").get<double>();
        report.rho = j.at("rho").get<double>();
        report.antisymmetric = j.at("antisymmetric").get<bool>();
        report.marginals = j.at("marginals").get<std::vector<std::string>>();
        report.notes = j.at("notes").get<std::vector<std::string>>();
        for (const auto& js : j.at("scenarios")) {
            mc::ScenarioReport s;
            s.id = js.at("id").get<std::string>();
            const auto kind = js.at("kind").get<std::string>();
            bool known = false;
            for (auto k : {ScenarioKind::NoCCP, ScenarioKind::SingleCCP, ScenarioKind::TwoCCPs,
                           ScenarioKind::JointCCP})
                if (to_string(k) == kind) {
                    s.kind = k;
                    known = true;
                }
            if (!known)
                throw DataError("unknown scenario kind '" + kind + "'");
            s.total_ee = js.at("total_ee").get<double>();
            s.total_ee_se = js.at("total_ee_se").get<double>();
            s.mean_max = js.at("mean_max").get<double>();
            s.mean_max_se = js.at("mean_max_se").get<double>();
            for (const auto& jc : js.at("dealers")) {
                mc::CellEstimate c;
                c.ee = jc.at("ee").get<double>();
                c.ee_se = jc.at("ee_se").get<double>();
                c.var = jc.at("var").get<double>();
                c.es = jc.at("es").get<double>();
                c.exceedances = jc.at("exceedances").get<std::uint64_t>();
                c.low_confidence = jc.at("low_confidence").get<bool>();
                s.dealers.push_back(c);
            }
            report.scenarios.push_back(std::move(s));
        }
        for (const auto& ja : j.at("analytic"))
            report.analytic.push_back({ja.at("scenario").get<std::string>(),
                                       ja.at("per_dealer").get<std::vector<double>>(),
                                       ja.at("total").get<double>()});
        for (const auto& jr : j.at("sensitivity"))
            report.sensitivity.push_back(
                {jr.at("label").get<std::string>(), jr.at("total_ratios").get<std::vector<double>>()});
        for (const auto& jr : j.at("reductions")) {
            mc::ExposureReduction r;
            r.scenario = jr.at("scenario").get<std::string>();
            r.histogram.edges = jr.at("edges").get<std::vector<double>>();
            r.histogram.counts = jr.at("counts").get<std::vector<std::uint64_t>>();
            report.reductions.push_back(std::move(r));
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed report dump: ") + e.what());
    }
    return report;
}

mc::RiskReport load_report(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError(fmt::format("cannot open report '{}'", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return report_from_json(ss.str());
}

namespace {

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p);
    if (!out)
        throw std::runtime_error(fmt::format("cannot write '{}'", p.string()));
    return out;
}

std::string report_csv(const mc::RiskReport& report) {
    using mc::Measure;
    std::string out = "dealer,scenario,measure,value,ratio_to_base,std_error\n";
    for (std::size_t s = 0; s < report.scenarios.size(); ++s) {
        const auto& sc = report.scenarios[s];
        for (std::size_t i = 0; i < report.dealers.size(); ++i) {
            const auto name = csv_field(report.dealers[i]);
            const auto& c = sc.dealers[i];
            out += fmt::format("{},{},ee,{},{},{}\n", name, sc.id, full(c.ee), full(report.ratio(s, i, Measure::EE)),
                               full(c.ee_se));
            out += fmt::format("{},{},var,{},{},\n", name, sc.id, full(c.var), full(report.ratio(s, i, Measure::VaR)));
            out += fmt::format("{},{},es,{},{},\n", name, sc.id, full(c.es), full(report.ratio(s, i, Measure::ES)));
        }
        out += fmt::format("Total,{},ee,{},{},{}\n", sc.id, full(sc.total_ee), full(report.total_ratio(s)),
                           full(sc.total_ee_se));
        out += fmt::format("All,{},mean_max,{},{},{}\n", sc.id, full(sc.mean_max), full(report.mean_max_ratio(s)),
                           full(sc.mean_max_se));
    }
    if (!report.analytic.empty()) {
        const auto& base = report.analytic.at(report.base_index());
        for (const auto& a : report.analytic) {
            for (std::size_t i = 0; i < report.dealers.size(); ++i)
                out += fmt::format("{},{},ee_analytic,{},{},\n", csv_field(report.dealers[i]), a.scenario,
                                   full(a.per_dealer[i]), full(a.per_dealer[i] / base.per_dealer[i]));
            out += fmt::format("Total,{},ee_analytic,{},{},\n", a.scenario, full(a.total), full(a.total / base.total));
        }
    }
    return out;
}

} // namespace

std::vector<fs::path> write_report(const mc::RiskReport& report, const fs::path& out_dir,
                                   bool reduction_samples) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw std::runtime_error(fmt::format("cannot create '{}': {}", out_dir.string(), ec.message()));

    std::vector<fs::path> written;
    auto emit = [&](const std::string& name, const std::string& body) {
        const auto p = out_dir / name;
        auto out = open_out(p);
        out << body;
        if (!out)
            throw std::runtime_error(fmt::format("failed writing '{}'", p.string()));
        written.push_back(p);
    };

    emit("report.txt", render_tables(report));
    emit("risk_report.csv", report_csv(report));
    emit("report.json", report_to_json(report) + "\n");

    if (!report.reductions.empty()) {
        std::string hist = "scenario,bin_lower,bin_upper,count\n";
        for (const auto& r : report.reductions)
            for (std::size_t b = 0; b < r.histogram.counts.size(); ++b)
                hist += fmt::format("{},{},{},{}\n", r.scenario, full(r.histogram.edges[b]),
                                    full(r.histogram.edges[b + 1]), r.histogram.counts[b]);
        emit("reduction_histograms.csv", hist);
    }
    if (reduction_samples) {
        const auto p = out_dir / "reductions.csv";
        auto out = open_out(p);
        out << "scenario,dealer,value\n";
        for (const auto& r : report.reductions)
            for (std::size_t n = 0; n < r.value.size(); ++n)
                out << r.scenario << ',' << csv_field(report.dealers.at(r.dealer[n])) << ',' << full(r.value[n])
                    << '\n';
        if (!out)
            throw std::runtime_error(fmt::format("failed writing '{}'", p.string()));
        written.push_back(p);
    }
    return written;
}

void write_surface_csv(std::ostream& out, const analytic::ThresholdSurface& surface) {
    out << "alpha,rho,n_star\n";
    for (std::size_t a = 0; a < surface.alphas.size(); ++a)
        for (std::size_t r = 0; r < surface.rhos.size(); ++r) {
            const auto n = surface.at(a, r);
            out << fmt::format("{},{},{}\n", full(surface.alphas[a]), full(surface.rhos[r]),
                               n ? std::to_string(*n) : std::string("never"));
        }
}

} // namespace ccpnet::io
