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

#include <cmath>
#include <complex>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "hidmeas/interaction.hpp"

using namespace hidmeas;
using Catch::Matchers::WithinAbs;

namespace {

/// Apparatus state with prescribed tau image and random phases.
StateVector with_tau(const std::vector<double>& lambda, RandomStream& rng)
{
    std::vector<Complex> z;
    for (double l : lambda) {
        z.push_back(std::polar(std::sqrt(l), rng.phase()));
    }
    return StateVector::from_amplitudes(z);
}

const StateVector& q73()
{
    static const StateVector q = StateVector::from_amplitudes({std::sqrt(0.7), std::sqrt(0.3)});
    return q;
}

} // namespace

TEST_CASE("interact examples", "[interaction]")
{
    RandomStream rng(31);
    for (std::size_t n : {2u, 3u, 5u}) {
        const auto basis = sample_eigenbasis(n, rng);
        for (std::size_t k = 0; k < n; ++k) {
            const auto a = sample_uniform_sphere(n, rng);
            CHECK(interact(basis[k], a, basis) == Outcome::index(k));
        }
    }

    // ratios 0.2/0.7 = 0.286 < 0.8/0.3 = 2.67
    const auto basis = Eigenbasis::standard(2);
    CHECK(classify(SimplexPoint({0.2, 0.8}), StatisticalState{SimplexPoint({0.7, 0.3})}) == Classification::cell(0));
    CHECK(interact(q73(), with_tau({0.2, 0.8}, rng), basis) == Outcome::index(0));

    CHECK(interact(q73(), q73(), basis).is_boundary());
    CHECK_THROWS_AS(interact(q73(), StateVector::basis(3, 0), basis), DimensionError);
}

TEST_CASE("interact is deterministic and phase invariant", "[interaction][property]")
{
    RandomStream rng(32);
    for (int i = 0; i < 2000; ++i) {
        const std::size_t n = 2 + rng.uniform_index(5);
        const auto basis = sample_eigenbasis(n, rng);
        const auto q = sample_uniform_sphere(n, rng);
        const auto a = sample_uniform_sphere(n, rng);
        const Outcome o = interact(q, a, basis);
        CHECK(interact(q, a, basis) == o);
        const Outcome rotated = interact(q, a.with_global_phase(rng.phase()), basis);
        // a global phase can move tau by rounding only
        if (!o.is_boundary() && !rotated.is_boundary() && rotated != o) {
            const auto lambda = tau(to_eigenbasis_coordinates(a, basis));
            const auto kappa = statistical_state(q, basis);
            std::vector<double> ratios;
            for (std::size_t j = 0; j < n; ++j) {
                ratios.push_back(lambda[j] / kappa[j]);
            }
            std::sort(ratios.begin(), ratios.end());
            CHECK(ratios[1] - ratios[0] < 1e-12);
        }
    }
}

TEST_CASE("every outcome is attained", "[interaction]")
{
    RandomStream rng(33);
    for (std::size_t n : {2u, 3u, 5u}) {
        const auto basis = Eigenbasis::standard(n);
        const auto q = sample_uniform_sphere(n, rng);
        std::vector<bool> seen(n, false);
        for (int i = 0; i < 10'000; ++i) {
            const Outcome o = interact(q, sample_uniform_sphere(n, rng), basis);
            if (!o.is_boundary()) {
                seen[o.value()] = true;
            }
        }
        for (std::size_t k = 0; k < n; ++k) {
            CHECK(seen[k]);
        }
    }
}

TEST_CASE("segment_point moduli and image", "[interaction]")
{
    RandomStream rng(34);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = 1 + rng.uniform_index(6);
        SegmentSpec spec{rng.uniform_index(n), sample_uniform_sphere(n, rng), rng.uniform(1e-6, 1.0 - 1e-6),
                         std::vector<double>(n)};
        for (double& p : spec.phases) {
            p = rng.phase();
        }
        const auto c = segment_point(spec);
        const auto lambda = tau(c);
        const auto a_image = tau(spec.a);
        for (std::size_t j = 0; j < n; ++j) {
            const double expected_modulus = j == spec.anchor
                                                ? std::sqrt((1.0 - spec.s) + spec.s * std::norm(spec.a[j]))
                                                : std::sqrt(spec.s) * std::abs(spec.a[j]);
            CHECK_THAT(std::abs(c[j]), WithinAbs(expected_modulus, 1e-12));
            const double on_line = (j == spec.anchor ? 1.0 - spec.s : 0.0) + spec.s * a_image[j];
            CHECK_THAT(lambda[j], WithinAbs(on_line, 1e-12));
        }
    }
}

TEST_CASE("segment_point edge cases", "[interaction]")
{
    const auto e2 = StateVector::basis(3, 1);
    const auto c = segment_point({1, e2, 0.3, {0.0, 1.2, 0.0}});
    CHECK_THAT(std::abs(c[1]), WithinAbs(1.0, 1e-15));
    CHECK_THAT(std::arg(c[1]), WithinAbs(1.2, 1e-15));
    CHECK(std::abs(c[0]) == 0.0);

    CHECK_THROWS_AS(segment_point({0, e2, 0.0, {0.0, 0.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(segment_point({0, e2, 1.0, {0.0, 0.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(segment_point({3, e2, 0.5, {0.0, 0.0, 0.0}}), std::out_of_range);
}

TEST_CASE("check_pci examples", "[interaction]")
{
    RandomStream rng(35);
    const auto basis = Eigenbasis::standard(2);
    const auto a = with_tau({0.2, 0.8}, rng);
    const auto report = check_pci(q73(), a, basis, 1000, rng);
    CHECK_FALSE(report.skipped);
    CHECK(report.outcome == Outcome::index(0));
    CHECK(report.segments == 1);
    CHECK(report.samples == 1000);
    CHECK(report.violation_count == 0);
    CHECK(report.observed_counts[0] == 1000);

    for (std::size_t n : {2u, 3u, 5u}) {
        const auto b = sample_eigenbasis(n, rng);
        for (std::size_t k = 0; k < n; ++k) {
            const auto r = check_pci(b[k], sample_uniform_sphere(n, rng), b, 50, rng);
            CHECK(r.outcome == Outcome::index(k));
            CHECK(r.segments == n - 1);
            CHECK(r.violation_count == 0);
        }
    }

    const auto skipped = check_pci(q73(), q73(), basis, 10, rng);
    CHECK(skipped.skipped);
    CHECK(skipped.samples == 0);
}

TEST_CASE("segment points near the a endpoint keep the outcome", "[interaction]")
{
    RandomStream rng(36);
    const auto basis = Eigenbasis::standard(3);
    const auto q = sample_uniform_sphere(3, rng);
    for (int i = 0; i < 200; ++i) {
        const auto a = sample_uniform_sphere(3, rng);
        const Outcome o = interact(q, a, basis);
        if (o.is_boundary()) {
            continue;
        }
        for (std::size_t r = 0; r < 3; ++r) {
            std::vector<double> phases(3);
            for (std::size_t j = 0; j < 3; ++j) {
                phases[j] = std::arg(a[j]);
            }
            CHECK(interact(q, segment_point({r, a, 1.0 - 1e-9, phases}), basis) == o);
        }
    }
}

TEST_CASE("check_pci catches a swapped partition", "[interaction]")
{
    RandomStream rng(37);
    const auto basis = Eigenbasis::standard(3);
    const auto mutated = swapped_interaction(basis, 0, 1);
    std::size_t violations = 0;
    for (int i = 0; i < 100; ++i) {
        const auto q = sample_uniform_sphere(3, rng);
        const auto a = sample_uniform_sphere(3, rng);
        violations += check_pci(q, a, basis, 50, rng, mutated).violation_count;
    }
    CHECK(violations > 0);
}
