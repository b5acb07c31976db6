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

#include "ccpnet/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace ccpnet::analytic {

namespace {

const double kInvSqrtTwoPi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

void require_gaussian(const MarketConfig& config) {
    require_valid(config);
    if (!config.all_gaussian())
        throw std::invalid_argument(
            "closed-form expected exposure needs Gaussian marginals; use the Monte Carlo engine");
}

void require_dealer(const MarketConfig& config, std::size_t i) {
    if (i >= config.num_dealers())
        throw std::out_of_range(fmt::format("dealer index {} out of range", i));
}

void require_fraction(double w) {
    if (!(w >= 0.0 && w <= 1.0))
        throw std::invalid_argument(fmt::format("clearing fraction {} outside [0, 1]", w));
}

// sum_{j != i} E[max(sum_k (1 - w_k) X_ij^k, 0)]
double bilateral_leg(const MarketConfig& config, std::size_t i, std::span<const double> w) {
    const std::size_t k_count = config.num_classes();
    std::vector<double> s(k_count);
    double total = 0.0;
    for (std::size_t j = 0; j < config.num_dealers(); ++j) {
        if (j == i)
            continue;
        for (std::size_t k = 0; k < k_count; ++k)
            s[k] = (1.0 - w[k]) * pair_scale(config, i, j, k);
        double var = 0.0;
        for (std::size_t k = 0; k < k_count; ++k)
            for (std::size_t m = 0; m < k_count; ++m)
                var += config.correlation(k, m) * s[k] * s[m];
        total += std::sqrt(std::max(var, 0.0));
    }
    return kInvSqrtTwoPi * total;
}

// E[max(sum_j w X_ij^k, 0)] written directly in notionals.
double single_class_ccp_leg(const MarketConfig& config, std::size_t i, std::size_t k, double w) {
    const double zi = config.notional(i, k);
    if (zi == 0.0 || w == 0.0)
        return 0.0;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t j = 0; j < config.num_dealers(); ++j) {
        if (j == i)
            continue;
        const double zj = config.notional(j, k);
        sum += zj;
        sum_sq += zj * zj;
    }
    return kInvSqrtTwoPi * config.classes[k].beta * w * zi * std::sqrt(sum_sq) / sum;
}

// E[max(sum_j sum_{k in group} w_k X_ij^k, 0)]
double joint_ccp_leg(const MarketConfig& config, std::size_t i,
                     std::span<const std::pair<std::size_t, double>> group) {
    double var = 0.0;
    for (std::size_t j = 0; j < config.num_dealers(); ++j) {
        if (j == i)
            continue;
        for (auto [k, wk] : group)
            for (auto [m, wm] : group)
                var += config.correlation(k, m) * wk * pair_scale(config, i, j, k) * wm *
                       pair_scale(config, i, j, m);
    }
    return kInvSqrtTwoPi * std::sqrt(std::max(var, 0.0));
}

} // namespace

double gaussian_positive_mean(double sigma) {
    if (!(sigma >= 0.0))
        throw std::invalid_argument("gaussian_positive_mean: sigma must be non-negative");
    return sigma * kInvSqrtTwoPi;
}

double expected_exposure_bilateral(const MarketConfig& config, std::size_t i) {
    require_gaussian(config);
    require_dealer(config, i);
    const std::vector<double> w(config.num_classes(), 0.0);
    return bilateral_leg(config, i, w);
}

double expected_exposure_one_ccp(const MarketConfig& config, std::size_t i, std::size_t cleared,
                                 double w) {
    require_gaussian(config);
    require_dealer(config, i);
    require_fraction(w);
    std::vector<double> fractions(config.num_classes(), 0.0);
    fractions.at(cleared) = w;
    return bilateral_leg(config, i, fractions) + single_class_ccp_leg(config, i, cleared, w);
}

double expected_exposure_two_ccp(const MarketConfig& config, std::size_t i,
                                 std::pair<std::size_t, double> first,
                                 std::pair<std::size_t, double> second) {
    require_gaussian(config);
    require_dealer(config, i);
    require_fraction(first.second);
    require_fraction(second.second);
    if (first.first == second.first)
        throw std::invalid_argument("two CCPs must clear distinct classes");
    std::vector<double> fractions(config.num_classes(), 0.0);
    fractions.at(first.first) = first.second;
    fractions.at(second.first) = second.second;
    return bilateral_leg(config, i, fractions) +
           single_class_ccp_leg(config, i, first.first, first.second) +
           single_class_ccp_leg(config, i, second.first, second.second);
}

double expected_exposure_joint_ccp(const MarketConfig& config, std::size_t i,
                                   std::span<const std::pair<std::size_t, double>> cleared) {
    require_gaussian(config);
    require_dealer(config, i);
    std::vector<double> fractions(config.num_classes(), 0.0);
    for (auto [k, w] : cleared) {
        require_fraction(w);
        fractions.at(k) = w;
    }
    return bilateral_leg(config, i, fractions) + joint_ccp_leg(config, i, cleared);
}

double expected_exposure(const MarketConfig& config, const ClearingScenario& scenario,
                         std::size_t i) {
    if (auto report = validate(scenario, config.num_classes()); !report.ok())
        throw std::invalid_argument(report.summary());
    const auto& c = scenario.cleared;
    switch (scenario.kind) {
    case ScenarioKind::NoCCP:
        return expected_exposure_bilateral(config, i);
    case ScenarioKind::SingleCCP:
        return expected_exposure_one_ccp(config, i, c[0].class_index, c[0].fraction);
    case ScenarioKind::TwoCCPs:
        if (c.size() == 2)
            return expected_exposure_two_ccp(config, i, {c[0].class_index, c[0].fraction},
                                             {c[1].class_index, c[1].fraction});
        break;
    case ScenarioKind::JointCCP:
        break;
    }

    // General grouping: one joint leg per ccp id.
    require_gaussian(config);
    require_dealer(config, i);
    const auto w = scenario.fractions(config.num_classes());
    double ee = bilateral_leg(config, i, w);
    for (int ccp : scenario.ccp_ids()) {
        std::vector<std::pair<std::size_t, double>> group;
        for (const auto& cc : c)
            if (cc.ccp == ccp)
                group.emplace_back(cc.class_index, cc.fraction);
        ee += joint_ccp_leg(config, i, group);
    }
    return ee;
}

ExpectedExposureResult expected_exposures(const MarketConfig& config,
                                          const ClearingScenario& scenario) {
    ExpectedExposureResult result;
    result.scenario = scenario.id;
    result.per_dealer.reserve(config.num_dealers());
    for (std::size_t i = 0; i < config.num_dealers(); ++i) {
        const double ee = expected_exposure(config, scenario, i) * config.report_scale;
        result.per_dealer.push_back(ee);
        result.total += ee;
    }
    return result;
}

namespace {

double pair_std(const HomogeneousSpec& spec, double cleared_weight) {
    const std::size_t k_count = spec.num_classes();
    double var = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
        const double sk = spec.sigma(k) * (k == spec.cleared_class ? cleared_weight : 1.0);
        for (std::size_t m = 0; m < k_count; ++m) {
            const double sm = spec.sigma(m) * (m == spec.cleared_class ? cleared_weight : 1.0);
            var += (k == m ? 1.0 : spec.rho) * sk * sm;
        }
    }
    return std::sqrt(std::max(var, 0.0));
}

void require_spec(const HomogeneousSpec& spec) {
    if (auto report = validate(spec); !report.ok())
        throw std::invalid_argument("invalid homogeneous spec: " + report.summary());
}

} // namespace

double homogeneous_ee(const HomogeneousSpec& spec, long members, bool with_ccp) {
    require_spec(spec);
    if (members < 2)
        throw std::invalid_argument("homogeneous market needs at least 2 members");
    const double counterparties = static_cast<double>(members - 1);
    if (!with_ccp)
        return counterparties * kInvSqrtTwoPi * pair_std(spec, 1.0);
    const double w = spec.cleared_fraction;
    const double residual = counterparties * kInvSqrtTwoPi * pair_std(spec, 1.0 - w);
    const double ccp = w * spec.sigma(spec.cleared_class) * std::sqrt(counterparties) * kInvSqrtTwoPi;
    return residual + ccp;
}

ThresholdResult min_clearing_members(const HomogeneousSpec& spec) {
    require_spec(spec);
    ThresholdResult result{spec, std::nullopt};

    const double full = pair_std(spec, 1.0);
    const double residual = pair_std(spec, 1.0 - spec.cleared_fraction);
    if (!(full > residual))
        return result;

    auto wins = [&](long n) { return homogeneous_ee(spec, n, true) < homogeneous_ee(spec, n, false); };

    // CCP wins iff sqrt(N - 1) > w sigma_c / (full - residual).
    const double ratio = spec.cleared_fraction * spec.sigma(spec.cleared_class) / (full - residual);
    const double bound = ratio * ratio;
    if (!(bound < kMaxThresholdMembers))
        throw std::overflow_error(
            fmt::format("threshold exceeds {} members; not verifiable", kMaxThresholdMembers));
    long n = std::max(2L, static_cast<long>(std::floor(bound)) + 2);
    while (n > 2 && wins(n - 1))
        --n;
    while (!wins(n))
        ++n;

    for (long m = 2; m <= 10 * n; ++m) {
        if (wins(m) != (m >= n))
            throw std::logic_error(
                fmt::format("threshold crossing is not monotone: N* = {}, violated at {}", n, m));
    }
    result.n_star = n;
    return result;
}

ThresholdSurface threshold_surface(const HomogeneousSpec& base, std::span<const double> alpha_grid,
                                   std::span<const double> rho_grid) {
    if (alpha_grid.empty() || rho_grid.empty())
        throw std::invalid_argument("threshold surface grids must be non-empty");
    ThresholdSurface surface;
    surface.alphas.assign(alpha_grid.begin(), alpha_grid.end());
    surface.rhos.assign(rho_grid.begin(), rho_grid.end());
    surface.n_star.reserve(alpha_grid.size() * rho_grid.size());
    for (double alpha : alpha_grid) {
        for (double rho : rho_grid) {
            HomogeneousSpec cell = base;
            cell.alphas.at(cell.cleared_class) = alpha;
            cell.rho = rho;
            surface.n_star.push_back(min_clearing_members(cell).n_star);
        }
    }
    return surface;
}

} // namespace ccpnet::analytic
