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

#include <algorithm>
#include <cstddef>
#include <map>
#include <vector>

#include "ccpnet/market.hpp"
#include "ccpnet/montecarlo.hpp"

// Brute-force exposure of dealer i, written directly from the definitions:
// e_i = sum_j (sum_k (1 - w_k) X_ij^k)^+ + sum_c (sum_{k in c} sum_j w_k X_ij^k)^+.
// Shares nothing with the engine beyond the draw container.
inline double oracle_exposure(const ccpnet::mc::ExposureDraw& x, const ccpnet::ClearingScenario& s,
                              std::size_t i) {
    const std::size_t n = x.num_dealers();
    const std::size_t k_count = x.num_classes();
    std::vector<double> w(k_count, 0.0);
    std::map<int, std::vector<std::size_t>> members;
    for (const auto& c : s.cleared) {
        w[c.class_index] = c.fraction;
        members[c.ccp].push_back(c.class_index);
    }
    double bilateral = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i)
            continue;
        double v = 0.0;
        for (std::size_t k = 0; k < k_count; ++k)
            v += (1.0 - w[k]) * x(i, j, k);
        bilateral += std::max(v, 0.0);
    }
    double central = 0.0;
    for (const auto& [ccp, classes] : members) {
        double v = 0.0;
        for (std::size_t k : classes)
            for (std::size_t j = 0; j < n; ++j)
                if (j != i)
                    v += w[k] * x(i, j, k);
        central += std::max(v, 0.0);
    }
    return bilateral + central;
}
