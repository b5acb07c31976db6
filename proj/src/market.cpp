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

#include "ccpnet/market.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

namespace ccpnet {

std::string_view to_string(Marginal m) {
    switch (m) {
    case Marginal::GaussianUnit:
        return "gaussian";
    case Marginal::StudentT3Unit:
        return "t3";
    }
    return "?";
}

std::optional<Marginal> parse_marginal(std::string_view s) {
    if (s == "gaussian" || s == "normal")
        return Marginal::GaussianUnit;
    if (s == "t3")
        return Marginal::StudentT3Unit;
    return std::nullopt;
}

std::optional<std::size_t> MarketConfig::class_index(std::string_view name) const {
    for (std::size_t k = 0; k < classes.size(); ++k)
        if (classes[k].name == name)
            return k;
    return std::nullopt;
}

bool MarketConfig::all_gaussian() const {
    return std::all_of(classes.begin(), classes.end(),
                       [](const AssetClass& c) { return c.marginal == Marginal::GaussianUnit; });
}

std::string ValidationReport::summary() const {
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty())
            out += "; ";
        out += v;
    }
    return out;
}

ValidationReport validate(const MarketConfig& config) {
    ValidationReport report;
    auto& v = report.violations;
    const std::size_t n = config.num_dealers();
    const std::size_t k_count = config.num_classes();

    if (n < 2)
        v.emplace_back("N >= 2 required");
    if (k_count < 1)
        v.emplace_back("K >= 1 required");
    if (!(config.rho >= 0.0 && config.rho < 1.0))
        v.push_back(fmt::format("rho must lie in [0, 1), got {}", config.rho));
    if (!(config.report_scale > 0.0))
        v.emplace_back("report_scale must be positive");

    for (const auto& c : config.classes) {
        if (!(c.beta > 0.0))
            v.push_back(fmt::format("class '{}': beta must be positive", c.name));
    }

    bool shapes_ok = true;
    for (const auto& d : config.dealers) {
        if (d.notionals.size() != k_count) {
            v.push_back(fmt::format("dealer '{}': expected {} notionals, got {}", d.name, k_count,
                                    d.notionals.size()));
            shapes_ok = false;
            continue;
        }
        for (std::size_t k = 0; k < k_count; ++k) {
            if (!(d.notionals[k] >= 0.0) || !std::isfinite(d.notionals[k]))
                v.push_back(fmt::format("dealer '{}': notional for class {} must be finite and >= 0",
                                        d.name, k));
        }
    }

    if (shapes_ok && n >= 2) {
        for (std::size_t k = 0; k < k_count; ++k) {
            double total = 0.0;
            for (std::size_t h = 0; h < n; ++h)
                total += config.notional(h, k);
            for (std::size_t i = 0; i < n; ++i) {
                const double own = config.notional(i, k);
                if (own > 0.0 && total - own <= 0.0)
                    v.push_back(fmt::format(
                        "zero counterparty notional denominator: dealer '{}' in class '{}'",
                        config.dealers[i].name, config.classes[k].name));
            }
        }
    }
    return report;
}

void require_valid(const MarketConfig& config) {
    auto report = validate(config);
    if (!report.ok())
        throw std::invalid_argument("invalid market config: " + report.summary());
}

double pair_scale(const MarketConfig& config, std::size_t i, std::size_t j, std::size_t k) {
    if (i == j)
        throw std::invalid_argument("pair_scale: dealer cannot face itself");
    if (i >= config.num_dealers() || j >= config.num_dealers() || k >= config.num_classes())
        throw std::out_of_range("pair_scale: index out of range");
    const double zi = config.notional(i, k);
    const double zj = config.notional(j, k);
    if (zi == 0.0 || zj == 0.0)
        return 0.0;
    double others = 0.0;
    for (std::size_t h = 0; h < config.num_dealers(); ++h)
        if (h != i)
            others += config.notional(h, k);
    return config.classes[k].beta * zi * (zj / others);
}

PairScaleTable::PairScaleTable(const MarketConfig& config)
    : n_(config.num_dealers()), k_(config.num_classes()), scales_(n_ * n_ * k_, 0.0) {
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            if (i != j)
                for (std::size_t k = 0; k < k_; ++k)
                    scales_[(i * n_ + j) * k_ + k] = pair_scale(config, i, j, k);
}

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
    case ScenarioKind::NoCCP:
        return "no_ccp";
    case ScenarioKind::SingleCCP:
        return "single_ccp";
    case ScenarioKind::TwoCCPs:
        return "two_ccps";
    case ScenarioKind::JointCCP:
        return "joint_ccp";
    }
    return "?";
}

std::vector<double> ClearingScenario::fractions(std::size_t num_classes) const {
    std::vector<double> w(num_classes, 0.0);
    for (const auto& c : cleared)
        w.at(c.class_index) = c.fraction;
    return w;
}

std::vector<int> ClearingScenario::ccp_ids() const {
    std::vector<int> ids;
    for (const auto& c : cleared)
        if (std::find(ids.begin(), ids.end(), c.ccp) == ids.end())
            ids.push_back(c.ccp);
    return ids;
}

ValidationReport validate(const ClearingScenario& scenario, std::size_t num_classes) {
    ValidationReport report;
    auto& v = report.violations;
    std::set<std::size_t> seen;
    for (const auto& c : scenario.cleared) {
        if (c.class_index >= num_classes)
            v.push_back(fmt::format("scenario '{}': class index {} out of range", scenario.id,
                                    c.class_index));
        if (!seen.insert(c.class_index).second)
            v.push_back(fmt::format("scenario '{}': class {} cleared twice", scenario.id,
                                    c.class_index));
        if (!(c.fraction >= 0.0 && c.fraction <= 1.0))
            v.push_back(fmt::format("scenario '{}': fraction {} outside [0, 1]", scenario.id,
                                    c.fraction));
    }
    const auto ccps = scenario.ccp_ids().size();
    switch (scenario.kind) {
    case ScenarioKind::NoCCP:
        if (!scenario.cleared.empty())
            v.push_back(fmt::format("scenario '{}': no_ccp cannot clear any class", scenario.id));
        break;
    case ScenarioKind::SingleCCP:
        if (scenario.cleared.size() != 1)
            v.push_back(fmt::format("scenario '{}': single_ccp clears exactly one class", scenario.id));
        break;
    case ScenarioKind::TwoCCPs:
        if (ccps != scenario.cleared.size())
            v.push_back(fmt::format("scenario '{}': separate CCPs need distinct ccp ids", scenario.id));
        break;
    case ScenarioKind::JointCCP:
        if (ccps > 1)
            v.push_back(fmt::format("scenario '{}': joint clearing uses one ccp id", scenario.id));
        break;
    }
    return report;
}

ClearingScenario no_ccp() { return {"no_ccp", ScenarioKind::NoCCP, {}}; }

ClearingScenario single_ccp(std::string id, std::size_t class_index, double fraction) {
    return {std::move(id), ScenarioKind::SingleCCP, {{class_index, fraction, 0}}};
}

ClearingScenario two_ccps(std::string id, std::size_t first, double first_fraction,
                          std::size_t second, double second_fraction) {
    return {std::move(id),
            ScenarioKind::TwoCCPs,
            {{first, first_fraction, 0}, {second, second_fraction, 1}}};
}

ClearingScenario joint_ccp(std::string id, std::vector<std::pair<std::size_t, double>> classes) {
    ClearingScenario s{std::move(id), ScenarioKind::JointCCP, {}};
    for (auto [k, w] : classes)
        s.cleared.push_back({k, w, 0});
    return s;
}

ValidationReport validate(const HomogeneousSpec& spec) {
    ValidationReport report;
    auto& v = report.violations;
    const std::size_t k_count = spec.credit_exposures.size();
    if (k_count == 0)
        v.emplace_back("at least one asset class required");
    if (spec.alphas.size() != k_count)
        v.emplace_back("alphas and credit exposures must have equal length");
    if (!spec.class_names.empty() && spec.class_names.size() != k_count)
        v.emplace_back("class names must match the number of classes");
    for (double ce : spec.credit_exposures)
        if (!(ce > 0.0))
            v.emplace_back("credit exposures must be positive");
    for (double a : spec.alphas)
        if (!(a > 0.0))
            v.emplace_back("alphas must be positive");
    if (!(spec.rho >= 0.0 && spec.rho < 1.0))
        v.push_back(fmt::format("rho must lie in [0, 1), got {}", spec.rho));
    if (spec.cleared_class >= k_count)
        v.emplace_back("cleared class out of range");
    if (!(spec.cleared_fraction > 0.0 && spec.cleared_fraction <= 1.0))
        v.emplace_back("cleared fraction must lie in (0, 1]");
    return report;
}

} // namespace ccpnet
