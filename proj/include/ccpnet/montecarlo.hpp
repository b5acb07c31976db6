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
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ccpnet/market.hpp"
#include "ccpnet/random.hpp"
#include "ccpnet/stats.hpp"

namespace ccpnet::mc {

/// Joint law of the standardized pair positions Y_ij^k: a Gaussian copula
/// with equicorrelation rho across classes and a per-class marginal.
///
/// When `antisymmetric` is set the reverse direction of a pair reuses the
/// draw with opposite sign (Y_ji = -Y_ij); otherwise every ordered pair is
/// drawn independently.
struct SamplingModel {
    double rho = 0.0;
    std::vector<Marginal> marginals;
    bool antisymmetric = false;
};

SamplingModel sampling_model(const MarketConfig& config, bool antisymmetric = false);

/// Sampled positions X_ij^k for every ordered pair, in model units.
class ExposureDraw {
public:
    ExposureDraw(std::size_t dealers, std::size_t classes)
        : n_(dealers), k_(classes), x_(dealers * dealers * classes, 0.0) {}

    double operator()(std::size_t i, std::size_t j, std::size_t k) const { return x_[index(i, j, k)]; }
    double& at(std::size_t i, std::size_t j, std::size_t k) { return x_[index(i, j, k)]; }

    std::span<const double> row(std::size_t i, std::size_t j) const {
        return {x_.data() + index(i, j, 0), k_};
    }
    std::span<double> row(std::size_t i, std::size_t j) { return {x_.data() + index(i, j, 0), k_}; }

    std::size_t num_dealers() const { return n_; }
    std::size_t num_classes() const { return k_; }

private:
    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (i * n_ + j) * k_ + k; }

    std::size_t n_;
    std::size_t k_;
    std::vector<double> x_;
};

/// Draws one copula vector for the pair i < j at `path` and writes both
/// directions into `draw`. The noise for (path, pair, class) depends on
/// nothing else.
void sample_pair_exposures(const PairScaleTable& scales, const SamplingModel& model,
                           const CounterNoise& noise, std::uint64_t path, std::size_t i,
                           std::size_t j, ExposureDraw& draw);

/// Fills every pair of `draw` for `path`.
void sample_draw(const PairScaleTable& scales, const SamplingModel& model, const CounterNoise& noise,
                 std::uint64_t path, ExposureDraw& draw);

/// A scenario reduced to what the pathwise evaluation needs.
struct CompiledScenario {
    std::vector<double> keep;                                     ///< 1 - w_k
    std::vector<std::vector<std::pair<std::size_t, double>>> ccps; ///< (class, w_k) per CCP
};

CompiledScenario compile(const ClearingScenario& scenario, std::size_t num_classes);

/// Realized exposure of dealer i: bilateral legs netted across the uncleared
/// part of every class, plus the positive part of each CCP's multilateral net.
double evaluate_scenario(const ExposureDraw& draw, const CompiledScenario& scenario, std::size_t i);
double evaluate_scenario(const ExposureDraw& draw, const ClearingScenario& scenario, std::size_t i);

struct SimulationOptions {
    std::uint64_t n_paths = 1'000'000;
    std::uint64_t seed = 20110101;
    unsigned threads = 0; ///< 0 = hardware concurrency
    double level = 0.99;
    std::uint64_t min_paths = 1000;
    std::uint64_t block_paths = 8192;
    /// Keep exposure reductions e^0 - e^n of the first this many paths.
    std::uint64_t reduction_paths = 0;
    /// Check e >= 0 and joint <= separate CCPs on every path.
    bool check_invariants = false;
};

/// ES estimates built on fewer exceedances than this are flagged.
inline constexpr std::uint64_t kMinTailExceedances = 100;

struct CellEstimate {
    double ee = 0.0;
    double ee_se = 0.0;
    double var = 0.0;
    double es = 0.0;
    std::uint64_t exceedances = 0;
    bool low_confidence = false;
};

struct ScenarioReport {
    std::string id;
    ScenarioKind kind = ScenarioKind::NoCCP;
    std::vector<CellEstimate> dealers;
    double total_ee = 0.0;
    double total_ee_se = 0.0;
    double mean_max = 0.0;
    double mean_max_se = 0.0;
};

/// Exposure reductions e_i^0 - e_i^n pooled over dealers for one scenario.
struct ExposureReduction {
    std::string scenario;
    stats::Histogram histogram;
    std::vector<std::uint32_t> dealer; ///< dealer of each sample
    std::vector<double> value;
};

enum class Measure { EE, VaR, ES };

std::string_view to_string(Measure m);

/// Closed-form expected exposures of one scenario, in report units.
struct AnalyticColumn {
    std::string scenario;
    std::vector<double> per_dealer;
    double total = 0.0;
};

/// Total expected exposure ratios of every scenario under an alternative
/// market construction.
struct SensitivityRow {
    std::string label;
    std::vector<double> total_ratios;
};

/// Simulation output in report units.
struct RiskReport {
    std::vector<std::string> dealers;
    std::vector<ScenarioReport> scenarios;
    std::uint64_t n_paths = 0;
    std::uint64_t seed = 0;
    double level = 0.99;
    double rho = 0.0;
    bool antisymmetric = false;
    std::vector<std::string> marginals; ///< "class=marginal"
    std::vector<std::string> notes;
    std::vector<ExposureReduction> reductions;
    /// Filled by callers when every marginal is Gaussian; not by simulate().
    std::vector<AnalyticColumn> analytic;
    std::vector<SensitivityRow> sensitivity;

    std::size_t base_index() const;
    double value(std::size_t scenario, std::size_t dealer, Measure m) const;
    double ratio(std::size_t scenario, std::size_t dealer, Measure m) const;
    double total_ratio(std::size_t scenario) const;
    double mean_max_ratio(std::size_t scenario) const;
};

/// Evaluates every scenario on the same sampled positions for each path.
///
/// Paths are processed in fixed blocks; per-block moments are merged in block
/// order and tail samples are merged as a multiset, so the report depends on
/// (seed, n_paths) only and not on the thread count. The first scenario of
/// kind NoCCP is the base of every ratio.
RiskReport simulate(const MarketConfig& config, const SamplingModel& model,
                    std::span<const ClearingScenario> scenarios, const SimulationOptions& options);

} // namespace ccpnet::mc
