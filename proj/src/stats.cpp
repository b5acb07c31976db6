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

#include "ccpnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ccpnet::stats {

namespace {

void require_level(double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("quantile level must lie in (0, 1)");
}

std::size_t base_rank(std::size_t n, double level) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n - 1) * level));
}

} // namespace

double empirical_quantile(std::span<const double> sorted, double level) {
    if (sorted.empty())
        throw std::invalid_argument("empirical_quantile: empty sample");
    require_level(level);
    const double h = static_cast<double>(sorted.size() - 1) * level;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size())
        return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::size_t tail_capacity(std::size_t n, double level) {
    require_level(level);
    if (n == 0)
        return 0;
    return n - base_rank(n, level);
}

TailEstimate tail_estimate(std::span<const double> upper, std::size_t n, double level) {
    if (n == 0 || upper.empty())
        throw std::invalid_argument("tail_estimate: empty sample");
    require_level(level);
    if (upper.size() < tail_capacity(n, level) || upper.size() > n)
        throw std::invalid_argument("tail_estimate: not enough upper order statistics");

    const std::size_t offset = n - upper.size();
    const std::size_t lo = base_rank(n, level);
    const double h = static_cast<double>(n - 1) * level;
    const double frac = h - static_cast<double>(lo);

    TailEstimate est;
    const double x_lo = upper[lo - offset];
    if (lo + 1 >= n) {
        est.var = x_lo;
        est.es = x_lo;
        return est;
    }
    est.var = x_lo + frac * (upper[lo + 1 - offset] - x_lo);
    double sum = 0.0;
    for (std::size_t r = lo + 1; r < n; ++r)
        sum += upper[r - offset];
    est.exceedances = n - lo - 1;
    est.es = sum / static_cast<double>(est.exceedances);
    // Guard the rounding of the mean so the ordering is exact.
    est.es = std::max(est.es, est.var);
    return est;
}

TailEstimate tail_estimate(std::span<const double> sorted, double level) {
    return tail_estimate(sorted, sorted.size(), level);
}

void Moments::merge(const Moments& other) {
    if (other.count == 0)
        return;
    if (count == 0) {
        *this = other;
        return;
    }
    const double total = static_cast<double>(count + other.count);
    const double delta = other.mean - mean;
    mean += delta * static_cast<double>(other.count) / total;
    m2 += other.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(other.count) / total;
    count += other.count;
}

double Moments::std_error() const {
    if (count < 2)
        return 0.0;
    return std::sqrt(variance() / static_cast<double>(count));
}

Histogram freedman_diaconis(std::span<const double> values, std::size_t max_bins) {
    if (values.empty())
        throw std::invalid_argument("freedman_diaconis: empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front();
    const double hi = sorted.back();
    const double iqr = empirical_quantile(sorted, 0.75) - empirical_quantile(sorted, 0.25);

    std::size_t bins = 1;
    if (hi > lo && iqr > 0.0) {
        const double width = 2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));
        bins = static_cast<std::size_t>(std::ceil((hi - lo) / width));
        bins = std::clamp<std::size_t>(bins, 1, std::max<std::size_t>(max_bins, 1));
    }

    Histogram h;
    h.edges.resize(bins + 1);
    const double span = hi > lo ? hi - lo : 1.0;
    const double left = hi > lo ? lo : lo - 0.5;
    for (std::size_t b = 0; b <= bins; ++b)
        h.edges[b] = left + span * static_cast<double>(b) / static_cast<double>(bins);
    h.counts.assign(bins, 0);
    for (double v : sorted) {
        auto b = static_cast<std::size_t>((v - left) / span * static_cast<double>(bins));
        h.counts[std::min(b, bins - 1)]++;
    }
    return h;
}

} // namespace ccpnet::stats
