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
#include <span>
#include <utility>
#include <vector>

#include "ccpnet/market.hpp"

// Closed-form expected exposures for Gaussian positions, and the minimum
// market size at which clearing one class lowers expected exposure in a
// homogeneous market.
//
// The per-dealer functions work in model units (notional units times beta);
// ExpectedExposureResult is in report units (scaled by report_scale).

namespace ccpnet::analytic {

/// E[max(X, 0)] for X ~ N(0, sigma^2).
double gaussian_positive_mean(double sigma);

double expected_exposure_bilateral(const MarketConfig& config, std::size_t i);

/// One CCP clearing fraction `w` of class `cleared`.
double expected_exposure_one_ccp(const MarketConfig& config, std::size_t i, std::size_t cleared,
                                 double w);

/// Two CCPs, each clearing one class.
double expected_exposure_two_ccp(const MarketConfig& config, std::size_t i,
                                 std::pair<std::size_t, double> first,
                                 std::pair<std::size_t, double> second);

/// One CCP netting several classes together: the CCP leg is the positive
/// part of sum_j sum_k w_k X_ij^k, with cross-class correlation inside.
double expected_exposure_joint_ccp(const MarketConfig& config, std::size_t i,
                                   std::span<const std::pair<std::size_t, double>> cleared);

/// Dispatches on the scenario kind. Any ccp grouping is accepted: classes
/// sharing a ccp id are netted jointly.
double expected_exposure(const MarketConfig& config, const ClearingScenario& scenario,
                         std::size_t i);

struct ExpectedExposureResult {
    std::string scenario;
    std::vector<double> per_dealer;
    double total = 0.0;
};

/// Expected exposure of every dealer under `scenario`, in report units.
/// Throws std::invalid_argument for invalid configs and non-Gaussian
/// marginals.
ExpectedExposureResult expected_exposures(const MarketConfig& config,
                                          const ClearingScenario& scenario);

/// Expected total exposure of one dealer facing `members - 1` identical
/// counterparties, with or without clearing `spec.cleared_class`.
double homogeneous_ee(const HomogeneousSpec& spec, long members, bool with_ccp);

struct ThresholdResult {
    HomogeneousSpec spec;
    std::optional<long> n_star; ///< nullopt when clearing never wins

    double bilateral_ee(long members) const { return homogeneous_ee(spec, members, false); }
    double ccp_ee(long members) const { return homogeneous_ee(spec, members, true); }
};

/// Largest N* min_clearing_members will verify.
inline constexpr long kMaxThresholdMembers = 10'000'000;

/// Smallest N >= 2 with homogeneous_ee(with CCP) < homogeneous_ee(bilateral).
///
/// The crossing is solved in closed form, nudged onto the exact integer
/// boundary, then checked by a scan over [2, 10 N*]. Throws std::logic_error
/// if the scan finds a second crossing and std::overflow_error if N* would
/// exceed kMaxThresholdMembers.
ThresholdResult min_clearing_members(const HomogeneousSpec& spec);

struct ThresholdSurface {
    std::vector<double> alphas;
    std::vector<double> rhos;
    /// n_star[a * rhos.size() + r]; nullopt where clearing never wins.
    std::vector<std::optional<long>> n_star;

    std::optional<long> at(std::size_t a, std::size_t r) const {
        return n_star[a * rhos.size() + r];
    }
};

/// N* over a grid of cleared-class multipliers and correlations, all other
/// fields taken from `base`.
ThresholdSurface threshold_surface(const HomogeneousSpec& base, std::span<const double> alpha_grid,
                                   std::span<const double> rho_grid);

} // namespace ccpnet::analytic
