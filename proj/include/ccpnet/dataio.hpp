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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccpnet/analytic.hpp"
#include "ccpnet/market.hpp"
#include "ccpnet/montecarlo.hpp"

namespace ccpnet::io {

/// Malformed input: bad file contents, unknown keys, out-of-range values.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct NotionalRow {
    std::string dealer;
    std::vector<double> notionals; ///< billions, one per class
};

struct NotionalTable {
    std::string source;
    std::vector<std::string> classes;
    std::vector<NotionalRow> rows;
};

/// Class order of the OCC tables.
inline const std::vector<std::string> kOccClasses = {"forwards", "options", "swaps", "credit"};

/// "occ-2009q1" (March 31, 2009) or "occ-2010q4" (December 31, 2010).
std::optional<NotionalTable> builtin_notionals(std::string_view name);

/// Parses a delimited notional table. The header names the dealer column and
/// the asset classes in any order; the four OCC classes are returned in
/// kOccClasses order, other class sets in header order. Fields may be quoted
/// and may contain thousands separators inside quotes. '#' starts a comment
/// line.
NotionalTable parse_notionals(std::istream& in, std::string source);
NotionalTable load_notionals(const std::filesystem::path& path);

/// A built-in dataset name or a file path.
NotionalTable resolve_notionals(const std::string& ref, const std::filesystem::path& base_dir = {});

/// Gross credit exposures by asset class (billions).
struct CreditExposureTable {
    std::string source;
    std::vector<std::string> classes;
    std::vector<double> exposures;
    std::string cds_class;
};

/// "bis-2010h1": six asset classes, June 2010.
std::optional<CreditExposureTable> builtin_credit_exposures(std::string_view name);

/// Risk per unit notional: 0.0098 for the credit class, 0.0039 otherwise.
double default_beta(std::string_view class_name);

struct MarketOptions {
    std::map<std::string, double> betas;
    std::map<std::string, Marginal> marginals;
    double rho = 0.0;
    /// true: a European copy of every dealer. false: as many European dealers
    /// as table rows, each holding the table's average notionals.
    bool mirror_dealers = true;
};

/// Builds a market in billions of notional with exposures reported in
/// millions. Throws DataError for unknown class names in the options.
MarketConfig build_market(const NotionalTable& table, const MarketOptions& options);

/// The five clearing arrangements compared throughout: none, interest rate
/// swaps only, credit only, both at separate CCPs, both at one CCP.
std::vector<ClearingScenario> standard_scenarios(const MarketConfig& config, double w_swaps = 0.90,
                                                 double w_credit = 0.85,
                                                 const std::string& swaps_class = "swaps",
                                                 const std::string& credit_class = "credit");

inline const std::vector<std::string> kScenarioIds = {"no_ccp", "irs_ccp", "cds_ccp", "two_ccps",
                                                      "joint_ccp"};

struct RunConfig {
    std::string notionals = "occ-2009q1";
    std::filesystem::path base_dir;
    std::map<std::string, double> betas;
    std::map<std::string, Marginal> marginals;
    double rho = 0.0;
    /// scenario id -> class -> w
    std::map<std::string, std::map<std::string, double>> scenario_w;
    std::uint64_t paths = 1'000'000;
    std::uint64_t seed = 20110101;
    bool mirror_dealers = true;
    bool antisymmetric = false;
    double level = 0.99;
    std::string out_dir = "ccpnet-out";
};

/// key = value lines; '#' comments; unknown keys are errors. Keys: notionals,
/// beta.<class>, rho, marginal.<class>, scenario.<id>.w.<class>, paths, seed,
/// mirror_dealers, antisymmetric, level, out_dir.
RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

MarketConfig build_market(const RunConfig& run);

/// standard_scenarios() with the run's w overrides applied. An override on a
/// class a scenario does not clear adds it (own CCP for two_ccps, shared CCP
/// for joint_ccp); single-CCP scenarios and no_ccp reject additions.
std::vector<ClearingScenario> build_scenarios(const RunConfig& run, const MarketConfig& config);

/// Human tables: ratio blocks per measure and the mean-max table, 6
/// significant digits, preceded by run metadata.
std::string render_tables(const mc::RiskReport& report);

/// Writes report.txt, risk_report.csv, report.json and, when the report
/// carries exposure reductions, reduction_histograms.csv (plus the raw
/// reductions.csv if `reduction_samples`). Returns the paths written.
std::vector<std::filesystem::path> write_report(const mc::RiskReport& report,
                                                const std::filesystem::path& out_dir,
                                                bool reduction_samples = false);

std::string report_to_json(const mc::RiskReport& report);
mc::RiskReport report_from_json(const std::string& text);
mc::RiskReport load_report(const std::filesystem::path& path);

/// `alpha,rho,n_star` rows; n_star is "never" where clearing never wins.
void write_surface_csv(std::ostream& out, const analytic::ThresholdSurface& surface);

} // namespace ccpnet::io
