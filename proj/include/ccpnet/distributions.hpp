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

namespace ccpnet::dist {

/// Standard normal quantile, Wichura's AS 241 (PPND16). p in (0, 1).
double normal_quantile(double p);

/// Standard normal CDF.
double normal_cdf(double x);

/// Upper tail P(Z > x) of a standard normal, accurate far into the tail.
double normal_upper_tail(double x);

/// Student t with 3 degrees of freedom, rescaled to unit variance.
double t3_unit_cdf(double x);

/// Quantile of the unit-variance t3 at upper-tail probability q in (0, 1/2],
/// returned as a non-negative value.
double t3_unit_upper_quantile(double q);

/// Quantile of the unit-variance t3 at p in (0, 1).
double t3_unit_quantile(double p);

/// Gaussian copula map: a standard normal coordinate z becomes the unit t3
/// value with the same CDF. Works from the tail probability so it keeps full
/// relative accuracy for large |z|.
double t3_unit_from_normal(double z);

} // namespace ccpnet::dist
