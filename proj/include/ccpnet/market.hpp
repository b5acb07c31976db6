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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ccpnet {

/// Notional tables are quoted in billions; every exposure figure we report is
/// in millions.
inline constexpr double kMillionsPerBillion = 1000.0;

enum class Marginal { GaussianUnit, StudentT3Unit };

std::string_view to_string(Marginal m);
std::optional<Marginal> parse_marginal(std::string_view s);

struct AssetClass {
    std::string name;
    double beta = 0.0; ///< exposure standard deviation per unit notional
    Marginal marginal = Marginal::GaussianUnit;
};

struct Dealer {
    std::string name;
    std::vector<double> notionals; ///< one entry per asset class
};

/// Dealers, asset classes and the cross-class dependence of a dealer market.
///
/// Correlation is equicorrelation: every pair of distinct classes shares
/// `rho`. `report_scale` converts model units (notional units times beta)
/// into the units reported to users; a table in billions uses
/// kMillionsPerBillion.
struct MarketConfig {
    std::vector<Dealer> dealers;
    std::vector<AssetClass> classes;
    double rho = 0.0;
    double report_scale = 1.0;

    std::size_t num_dealers() const { return dealers.size(); }
    std::size_t num_classes() const { return classes.size(); }
    double correlation(std::size_t k, std::size_t m) const { return k == m ? 1.0 : rho; }
    double notional(std::size_t i, std::size_t k) const { return dealers[i].notionals[k]; }

    /// Index of the class called `name`, if any.
    std::optional<std::size_t> class_index(std::string_view name) const;
    bool all_gaussian() const;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

ValidationReport validate(const MarketConfig& config);

/// Throws std::invalid_argument carrying the report summary if `config` is
/// not valid.
void require_valid(const MarketConfig& config);

/// Standard deviation of dealer i's position against j in class k:
/// beta_k * Z_i^k * Z_j^k / sum_{h != i} Z_h^k. Zero when either notional is
/// zero.
double pair_scale(const MarketConfig& config, std::size_t i, std::size_t j, std::size_t k);

/// Dense table of pair_scale(i, j, k), row-major over (i, j, k), with zeros on
/// the diagonal i == j.
class PairScaleTable {
public:
    explicit PairScaleTable(const MarketConfig& config);

    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return scales_[(i * n_ + j) * k_ + k];
    }
    std::size_t num_dealers() const { return n_; }
    std::size_t num_classes() const { return k_; }

private:
    std::size_t n_;
    std::size_t k_;
    std::vector<double> scales_;
};

enum class ScenarioKind { NoCCP, SingleCCP, TwoCCPs, JointCCP };

std::string_view to_string(ScenarioKind kind);

struct ClearedClass {
    std::size_t class_index = 0;
    double fraction = 0.0; ///< w_k
    int ccp = 0;
};

/// A clearing arrangement: which classes move to which CCP and in what
/// fraction. Classes sharing a ccp id are netted multilaterally together.
struct ClearingScenario {
    std::string id;
    ScenarioKind kind = ScenarioKind::NoCCP;
    std::vector<ClearedClass> cleared;

    /// w_k for every class (zero for classes not cleared).
    std::vector<double> fractions(std::size_t num_classes) const;
    /// Distinct ccp ids in first-appearance order.
    std::vector<int> ccp_ids() const;
};

ValidationReport validate(const ClearingScenario& scenario, std::size_t num_classes);

ClearingScenario no_ccp();
ClearingScenario single_ccp(std::string id, std::size_t class_index, double fraction);
ClearingScenario two_ccps(std::string id, std::size_t first, double first_fraction,
                          std::size_t second, double second_fraction);
ClearingScenario joint_ccp(std::string id, std::vector<std::pair<std::size_t, double>> classes);

/// Homogeneous market of the threshold analysis: every pair position in
/// class k is N(0, sigma_k^2) with sigma_k = alpha_k * CE_k.
struct HomogeneousSpec {
    std::vector<std::string> class_names;
    std::vector<double> credit_exposures;
    std::vector<double> alphas;
    double rho = 0.0;
    std::size_t cleared_class = 0;
    double cleared_fraction = 1.0;

    std::size_t num_classes() const { return credit_exposures.size(); }
    double sigma(std::size_t k) const { return alphas[k] * credit_exposures[k]; }
};

ValidationReport validate(const HomogeneousSpec& spec);

} // namespace ccpnet
