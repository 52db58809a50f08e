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

#include "hidmeas/hilbert.hpp"

using namespace hidmeas;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Eigenbasis hadamard_basis()
{
    return Eigenbasis({StateVector::from_amplitudes({kInvSqrt2, kInvSqrt2}),
                       StateVector::from_amplitudes({kInvSqrt2, -kInvSqrt2})});
}

} // namespace

TEST_CASE("StateVector construction", "[hilbert]")
{
    SECTION("renormalizes within tolerance")
    {
        const auto v = StateVector::from_amplitudes({Complex(0.6, 0.0), Complex(0.0, 0.8 + 1e-13)});
        CHECK_THAT(std::norm(v[0]) + std::norm(v[1]), WithinAbs(1.0, 1e-15));
    }
    SECTION("rejects non-unit amplitudes")
    {
        CHECK_THROWS_WITH(StateVector::from_amplitudes({1.0, 1.0}), ContainsSubstring("not within tolerance"));
    }
    SECTION("rejects NaN and empty input")
    {
        CHECK_THROWS(StateVector::from_amplitudes({Complex(std::nan(""), 0.0)}));
        CHECK_THROWS(StateVector::from_amplitudes({}));
        CHECK_THROWS(StateVector::normalized({0.0, 0.0}));
    }
}

TEST_CASE("inner_product conventions", "[hilbert]")
{
    const auto e1 = StateVector::basis(2, 0);
    const auto e2 = StateVector::basis(2, 1);
    CHECK(inner_product(e1, e2) == Complex(0.0, 0.0));

    const auto v = StateVector::from_amplitudes({kInvSqrt2, Complex(0.0, kInvSqrt2)});
    CHECK_THAT(std::abs(inner_product(v, v) - Complex(1.0, 0.0)), WithinAbs(0.0, 1e-15));

    const auto ie1 = StateVector::from_amplitudes({Complex(0.0, 1.0), 0.0});
    CHECK(inner_product(ie1, e1) == Complex(0.0, -1.0));

    CHECK_THROWS_AS(inner_product(e1, StateVector::basis(3, 0)), DimensionError);
}

TEST_CASE("inner_product properties on random states", "[hilbert][property]")
{
    RandomStream rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(7);
        const auto u = sample_uniform_sphere(n, rng);
        const auto v = sample_uniform_sphere(n, rng);
        const Complex uv = inner_product(u, v);
        CHECK(std::abs(uv) <= 1.0 + 1e-12);
        CHECK_THAT(std::abs(uv - std::conj(inner_product(v, u))), WithinAbs(0.0, 1e-14));
        CHECK_THAT(inner_product(u, u).imag(), WithinAbs(0.0, 1e-14));
    }
}

TEST_CASE("born_probabilities examples", "[hilbert]")
{
    const auto p1 = born_probabilities(StateVector::basis(3, 1), Eigenbasis::standard(3));
    CHECK(p1 == std::vector<double>{0.0, 1.0, 0.0});

    const auto q = StateVector::from_amplitudes({std::sqrt(0.7), std::sqrt(0.3)});
    const auto p2 = born_probabilities(q, Eigenbasis::standard(2));
    CHECK_THAT(p2[0], WithinAbs(0.7, 1e-15));
    CHECK_THAT(p2[1], WithinAbs(0.3, 1e-15));

    const auto p3 = born_probabilities(StateVector::basis(2, 0), hadamard_basis());
    CHECK_THAT(p3[0], WithinAbs(0.5, 1e-15));
    CHECK_THAT(p3[1], WithinAbs(0.5, 1e-15));

    CHECK_THROWS_AS(born_probabilities(q, Eigenbasis::standard(3)), DimensionError);
}

TEST_CASE("born_probabilities sums to one and ignores global phase", "[hilbert][property]")
{
    RandomStream rng(12);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(8);
        const auto basis = sample_eigenbasis(n, rng);
        const auto q = sample_uniform_sphere(n, rng);
        const auto p = born_probabilities(q, basis);
        double sum = 0.0;
        for (double v : p) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK_THAT(sum, WithinAbs(1.0, 1e-10));

        const auto p_phase = born_probabilities(q.with_global_phase(rng.phase()), basis);
        for (std::size_t k = 0; k < n; ++k) {
            CHECK_THAT(p_phase[k], WithinAbs(p[k], 1e-12));
        }
    }
}

TEST_CASE("to_eigenbasis_coordinates", "[hilbert]")
{
    RandomStream rng(13);
    const auto q = sample_uniform_sphere(4, rng);
    CHECK(to_eigenbasis_coordinates(q, Eigenbasis::standard(4)) == q);

    const auto c = to_eigenbasis_coordinates(StateVector::basis(2, 0), hadamard_basis());
    CHECK_THAT(c[0].real(), WithinAbs(kInvSqrt2, 1e-15));
    CHECK_THAT(c[1].real(), WithinAbs(kInvSqrt2, 1e-15));

    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(8);
        const auto basis = sample_eigenbasis(n, rng);
        const auto v = sample_uniform_sphere(n, rng);
        const auto coords = to_eigenbasis_coordinates(v, basis);
        double norm2 = 0.0;
        for (const Complex& z : coords.amplitudes()) {
            norm2 += std::norm(z);
        }
        CHECK_THAT(norm2, WithinAbs(1.0, 1e-10));
        const auto back = from_eigenbasis_coordinates(coords, basis);
        for (std::size_t j = 0; j < n; ++j) {
            CHECK_THAT(std::abs(back[j] - v[j]), WithinAbs(0.0, 1e-12));
        }
    }
}

TEST_CASE("validate_eigenbasis", "[hilbert]")
{
    const auto standard = Eigenbasis::standard(3);
    CHECK(validate_eigenbasis(standard.vectors()).ok);

    const std::vector<StateVector> twins{StateVector::basis(2, 0), StateVector::basis(2, 0)};
    const auto report = validate_eigenbasis(twins, 1e-10);
    REQUIRE_FALSE(report.ok);
    bool off_diagonal_one = false;
    for (const auto& v : report.violations) {
        if (v.row == 0 && v.col == 1) {
            off_diagonal_one = std::abs(v.deviation - 1.0) < 1e-15;
        }
    }
    CHECK(off_diagonal_one);
    CHECK_THROWS_AS(Eigenbasis(twins), BasisError);

    RandomStream rng(14);
    std::vector<StateVector> noisy;
    for (std::size_t k = 0; k < 3; ++k) {
        std::vector<Complex> amplitudes(3);
        for (std::size_t j = 0; j < 3; ++j) {
            amplitudes[j] = (j == k ? 1.0 : 0.0) + 1e-12 * Complex(rng.normal(), rng.normal());
        }
        noisy.push_back(StateVector::normalized(amplitudes));
    }
    CHECK(validate_eigenbasis(noisy, 1e-10).ok);

    const std::vector<StateVector> wrong_shape{StateVector::basis(3, 0)};
    CHECK_FALSE(validate_eigenbasis(wrong_shape).ok);
}

TEST_CASE("Eigenbasis labels", "[hilbert]")
{
    const auto basis = Eigenbasis::standard(3);
    CHECK(basis.label(0) == "x1");
    CHECK(basis.label(2) == "x3");
    CHECK_THROWS_AS(Eigenbasis({StateVector::basis(2, 0), StateVector::basis(2, 1)}, {"up", "up"}), BasisError);
}

TEST_CASE("sample_uniform_sphere", "[hilbert][random]")
{
    RandomStream rng(15);
    CHECK_THROWS(sample_uniform_sphere(0, rng));

    SECTION("unit norm")
    {
        for (int i = 0; i < 1000; ++i) {
            const auto z = sample_uniform_sphere(5, rng);
            double norm2 = 0.0;
            for (const Complex& c : z.amplitudes()) {
                norm2 += std::norm(c);
            }
            CHECK_THAT(norm2, WithinAbs(1.0, 1e-12));
        }
    }
    SECTION("n = 1 is a uniform phase")
    {
        constexpr int kDraws = 200'000;
        constexpr int kBins = 8;
        std::vector<int> counts(kBins, 0);
        for (int i = 0; i < kDraws; ++i) {
            const Complex z = sample_uniform_sphere(1, rng)[0];
            CHECK_THAT(std::abs(z), WithinAbs(1.0, 1e-15));
            double angle = std::arg(z);
            if (angle < 0) {
                angle += 2.0 * std::numbers::pi;
            }
            ++counts[static_cast<int>(angle / (2.0 * std::numbers::pi) * kBins) % kBins];
        }
        const double expected = static_cast<double>(kDraws) / kBins;
        for (int c : counts) {
            CHECK(std::abs(c - expected) < 4.0 * std::sqrt(expected));
        }
    }
    SECTION("mean of |z_k|^2 is 1/n over 10^6 draws")
    {
        constexpr std::size_t n = 4;
        constexpr int kDraws = 1'000'000;
        std::vector<double> sum(n, 0.0);
        for (int i = 0; i < kDraws; ++i) {
            const auto z = sample_uniform_sphere(n, rng);
            for (std::size_t k = 0; k < n; ++k) {
                sum[k] += std::norm(z[k]);
            }
        }
        // |z_k|^2 ~ Beta(1, n-1): variance (n-1) / (n^2 (n+1))
        const double sigma = std::sqrt((n - 1.0) / (n * n * (n + 1.0)) / kDraws);
        for (double s : sum) {
            CHECK(std::abs(s / kDraws - 1.0 / n) < 4.0 * sigma);
        }
    }
}

TEST_CASE("sample_uniform_sphere is unitarily invariant", "[hilbert][random][property]")
{
    // Binned |z_1|^2 of z and of U z must agree (two-sample chi-square, alpha = 0.001).
    constexpr std::size_t n = 3;
    constexpr int kDraws = 200'000;
    constexpr int kBins = 20;
    RandomStream rng(16);
    const auto unitary = sample_eigenbasis(n, rng);
    std::vector<double> plain(kBins, 0.0);
    std::vector<double> rotated(kBins, 0.0);
    for (int i = 0; i < kDraws; ++i) {
        const auto z = sample_uniform_sphere(n, rng);
        const auto uz = from_eigenbasis_coordinates(z, unitary);
        plain[std::min(kBins - 1, static_cast<int>(std::norm(z[0]) * kBins))] += 1;
        rotated[std::min(kBins - 1, static_cast<int>(std::norm(uz[0]) * kBins))] += 1;
    }
    double statistic = 0.0;
    for (int b = 0; b < kBins; ++b) {
        const double total = plain[b] + rotated[b];
        if (total > 0) {
            statistic += (plain[b] - rotated[b]) * (plain[b] - rotated[b]) / total;
        }
    }
    // chi-square critical value, 19 degrees of freedom, alpha = 0.001
    CHECK(statistic < 43.82019596);
}

TEST_CASE("RandomStream is deterministic per seed and stream", "[random]")
{
    RandomStream a(42, 7);
    RandomStream b(42, 7);
    RandomStream c(42, 8);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.normal();
        CHECK(x == b.normal());
        differs = differs || x != c.normal();
    }
    CHECK(differs);
    for (int i = 0; i < 1000; ++i) {
        CHECK(a.uniform_index(5) < 5);
    }
}
