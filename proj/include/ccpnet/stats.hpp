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
#include <vector>

namespace ccpnet::stats {

/// Order-statistic quantile with linear interpolation: position h = (n - 1)
/// level, value x[floor h] + frac(h) (x[floor h + 1] - x[floor h]).
/// `sorted` must be ascending.
double empirical_quantile(std::span<const double> sorted, double level);

struct TailEstimate {
    double var = 0.0;
    double es = 0.0;
    std::size_t exceedances = 0;
};

/// Number of largest observations needed to evaluate VaR and ES at `level`
/// from a sample of size n.
std::size_t tail_capacity(std::size_t n, double level);

/// VaR is empirical_quantile at `level`; ES is the mean of the order
/// statistics above floor((n - 1) level), so ES >= VaR always holds.
///
/// `upper` holds the largest upper.size() values of a sample of size n in
/// ascending order, with upper.size() >= tail_capacity(n, level).
TailEstimate tail_estimate(std::span<const double> upper, std::size_t n, double level);

/// Convenience over a complete ascending sample.
TailEstimate tail_estimate(std::span<const double> sorted, double level);

/// Mean and second central moment, mergeable in a fixed order.
struct Moments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }
    void merge(const Moments& other);
    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
    double std_error() const;
};

struct Histogram {
    std::vector<double> edges; ///< counts.size() + 1 ascending edges
    std::vector<std::uint64_t> counts;
};

/// Freedman-Diaconis binning (width 2 IQR n^{-1/3}), at most `max_bins` bins.
/// A sample with zero spread gets one bin.
Histogram freedman_diaconis(std::span<const double> values, std::size_t max_bins = 1000);

} // namespace ccpnet::stats
