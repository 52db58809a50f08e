// Copyright 2026 The hidmeas Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

#include "hidmeas/chi_square_table.hpp"

namespace hidmeas {

struct Interval
{
    double low = 0.0;
    double high = 0.0;

    double half_width() const noexcept { return 0.5 * (high - low); }
};

/// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z)
{
    if (trials == 0) {
        throw std::invalid_argument("wilson_interval: trials must be at least 1");
    }
    if (successes > trials) {
        throw std::invalid_argument("wilson_interval: successes exceed trials");
    }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

/// Pearson statistic sum (O - E)^2 / E.
inline double chi_square_statistic(std::span<const double> observed, std::span<const double> expected)
{
    if (observed.size() != expected.size()) {
        throw std::invalid_argument("chi_square_statistic: observed and expected differ in length");
    }
    double statistic = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!(expected[i] > 0.0)) {
            throw std::invalid_argument("chi_square_statistic: expected count in bin " + std::to_string(i) +
                                        " is not positive");
        }
        const double diff = observed[i] - expected[i];
        statistic += diff * diff / expected[i];
    }
    return statistic;
}

/// Upper-tail critical value for alpha in {0.01, 0.001}. Tabulated up to 400
/// degrees of freedom, Wilson-Hilferty beyond.
inline double chi_square_critical(std::size_t degrees_of_freedom, double alpha)
{
    if (degrees_of_freedom == 0) {
        throw std::invalid_argument("chi_square_critical: degrees of freedom must be at least 1");
    }
    double z = 0.0;
    const auto* table = &detail::kChiSquareCritical001;
    if (alpha == 0.01) {
        table = &detail::kChiSquareCritical01;
        z = 2.3263478740408408;
    } else if (alpha == 0.001) {
        z = 3.0902323061678132;
    } else {
        throw std::invalid_argument("chi_square_critical: alpha must be 0.01 or 0.001");
    }
    if (degrees_of_freedom <= table->size()) {
        return (*table)[degrees_of_freedom - 1];
    }
    const double k = static_cast<double>(degrees_of_freedom);
    const double c = 2.0 / (9.0 * k);
    const double root = 1.0 - c + z * std::sqrt(c);
    return k * root * root * root;
}

/// sigmas * sqrt(p (1 - p) / N) + 10 / N; the slack term absorbs discreteness.
inline double binomial_tolerance(double p, std::uint64_t trials, double sigmas)
{
    const double n = static_cast<double>(trials);
    return sigmas * std::sqrt(p * (1.0 - p) / n) + 10.0 / n;
}

} // namespace hidmeas
