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

#include "ccpnet/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ccpnet::dist {

namespace {

template <std::size_t N>
double horner(const double (&c)[N], double x) {
    double acc = c[N - 1];
    for (std::size_t i = N - 1; i-- > 0;)
        acc = acc * x + c[i];
    return acc;
}

// u - sin(u) without cancellation for small u.
double versed_arc(double u) {
    if (u > 0.5)
        return u - std::sin(u);
    const double u2 = u * u;
    double term = u * u2 / 6.0;
    double sum = term;
    for (int n = 2; n < 12; ++n) {
        term *= -u2 / static_cast<double>((2 * n) * (2 * n + 1));
        sum += term;
    }
    return sum;
}

} // namespace

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("normal_quantile: p must lie in (0, 1)");

    static constexpr double a[] = {3.387132872796366608,   133.14166789178437745,
                                   1971.5909503065514427,  13731.693765509461125,
                                   45921.953931549871457,  67265.770927008700853,
                                   33430.575583588128105,  2509.0809287301226727};
    static constexpr double b[] = {1.0,                    42.313330701600911252,
                                   687.18700749205790830,  5394.1960214247511077,
                                   21213.794301586595867,  39307.895800092710610,
                                   28729.085735721942674,  5226.4952788528545610};
    static constexpr double c[] = {1.42343711074968357734,  4.63033784615654529590,
                                   5.76949722146069140550,  3.64784832476320460504,
                                   1.27045825245236838258,  0.241780725177450611770,
                                   0.0227238449892691845833, 7.74545014278341407640e-4};
    static constexpr double d[] = {1.0,                      2.05319162663775882187,
                                   1.67638483018380384940,   0.689767334985100004550,
                                   0.148103976427480074590,  0.0151986665636164571966,
                                   5.47593808499534494600e-4, 1.05075007164441684324e-9};
    static constexpr double e[] = {6.65790464350110377720,   5.46378491116411436990,
                                   1.78482653991729133580,   0.296560571828504891230,
                                   0.0265321895265761230930, 0.00124266094738807843860,
                                   2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static constexpr double f[] = {1.0,                      0.599832206555887937690,
                                   0.136929880922735805310,  0.0148753612908506148525,
                                   7.86869131145613259100e-4, 1.84631831751005468180e-5,
                                   1.42151175831644588870e-7, 2.04426310338993978564e-15};

    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * horner(a, r) / horner(b, r);
    }
    double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = horner(c, r) / horner(d, r);
    } else {
        r -= 5.0;
        val = horner(e, r) / horner(f, r);
    }
    return q < 0.0 ? -val : val;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double t3_unit_cdf(double x) {
    // F(x) = 1/2 + (atan x + x / (1 + x^2)) / pi; evaluated from the near tail.
    const double ax = std::fabs(x);
    if (ax == 0.0)
        return 0.5;
    const double u = 2.0 * std::atan(1.0 / ax);
    const double tail = versed_arc(u) / (2.0 * std::numbers::pi);
    return x > 0.0 ? 1.0 - tail : tail;
}

double t3_unit_upper_quantile(double q) {
    if (!(q > 0.0 && q <= 0.5))
        throw std::domain_error("t3_unit_upper_quantile: q must lie in (0, 1/2]");
    // With x = cot(u / 2), P(T > x) = (u - sin u) / (2 pi) for u in (0, pi].
    const double target = 2.0 * std::numbers::pi * q;
    double lo = 0.0;
    double hi = std::numbers::pi;
    double u = std::min(std::cbrt(6.0 * target), hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double g = versed_arc(u) - target;
        if (g == 0.0)
            break;
        (g > 0.0 ? hi : lo) = u;
        const double s = std::sin(0.5 * u);
        const double slope = 2.0 * s * s;
        double next = u - g / slope;
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (std::fabs(next - u) <= 1e-16 * u) {
            u = next;
            break;
        }
        u = next;
    }
    return 1.0 / std::tan(0.5 * u);
}

double t3_unit_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("t3_unit_quantile: p must lie in (0, 1)");
    if (p == 0.5)
        return 0.0;
    return p < 0.5 ? -t3_unit_upper_quantile(p) : t3_unit_upper_quantile(1.0 - p);
}

double t3_unit_from_normal(double z) {
    if (z == 0.0)
        return 0.0;
    const double x = t3_unit_upper_quantile(normal_upper_tail(std::fabs(z)));
    return z > 0.0 ? x : -x;
}

} // namespace ccpnet::dist
