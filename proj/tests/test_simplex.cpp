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

#include "hidmeas/simplex.hpp"

using namespace hidmeas;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

StatisticalState state(std::vector<double> kappa)
{
    return StatisticalState{SimplexPoint(std::move(kappa))};
}

/// Oracle: Cell(k) iff all barycentric weights of lambda over the vertices
/// of C_k are strictly positive. Returns the cell and the smallest weight
/// margin seen across all cells.
struct OracleVerdict
{
    std::optional<std::size_t> cell;
    double margin = 0.0; // min |weight| over all cells' weights
};

OracleVerdict barycentric_oracle(const SimplexPoint& lambda, const StatisticalState& kappa)
{
    OracleVerdict verdict;
    verdict.margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < lambda.dimension(); ++k) {
        if (kappa[k] == 0.0) {
            continue; // C_k is degenerate
        }
        const auto weights = barycentric_coordinates(lambda.coords(), cell_vertices(kappa, k));
        bool positive = true;
        for (double w : weights) {
            positive = positive && w > 0.0;
            verdict.margin = std::min(verdict.margin, std::abs(w));
        }
        if (positive) {
            verdict.cell = k;
        }
    }
    return verdict;
}

} // namespace

TEST_CASE("SimplexPoint invariants", "[simplex]")
{
    CHECK(SimplexPoint({-1e-15, 1.0 + 1e-15})[0] == 0.0);
    CHECK_THROWS(SimplexPoint({-1e-3, 1.001}));
    CHECK_THROWS(SimplexPoint({0.5, 0.4}));
    CHECK_THROWS(SimplexPoint({}));
}

TEST_CASE("tau examples", "[simplex]")
{
    const double r = 1.0 / std::sqrt(2.0);
    const auto half = tau(StateVector::from_amplitudes({r, Complex(0.0, r)}));
    CHECK_THAT(half[0], WithinAbs(0.5, 1e-15));
    CHECK_THAT(half[1], WithinAbs(0.5, 1e-15));

    CHECK(tau(StateVector::basis(4, 2)) == SimplexPoint::vertex(4, 2));

    const auto v = tau(StateVector::from_amplitudes(
        {std::polar(std::sqrt(0.2), 0.3), Complex(std::sqrt(0.5), 0.0), Complex(0.0, std::sqrt(0.3))}));
    CHECK_THAT(v[0], WithinAbs(0.2, 1e-15));
    CHECK_THAT(v[1], WithinAbs(0.5, 1e-15));
    CHECK_THAT(v[2], WithinAbs(0.3, 1e-15));
}

TEST_CASE("classify examples", "[simplex]")
{
    const auto uniform = state({1.0 / 3, 1.0 / 3, 1.0 / 3});
    const SimplexPoint lambda({0.2, 0.3, 0.5});
    CHECK(barycentric_oracle(lambda, uniform).cell == std::optional<std::size_t>(0));
    CHECK(classify(lambda, uniform) == Classification::cell(0));

    CHECK(classify(uniform.kappa, uniform).is_boundary());

    const auto k73 = state({0.7, 0.3});
    const SimplexPoint l91({0.9, 0.1});
    CHECK(barycentric_oracle(l91, k73).cell == std::optional<std::size_t>(1));
    CHECK(classify(l91, k73) == Classification::cell(1));

    const auto half = state({0.5, 0.5});
    const SimplexPoint corner({1.0, 0.0});
    CHECK_FALSE(barycentric_oracle(corner, half).cell.has_value());
    CHECK(classify(corner, half).is_boundary());

    CHECK_THROWS_AS(classify(lambda, k73), DimensionError);
}

TEST_CASE("classify at degenerate kappa", "[simplex]")
{
    const auto vertex = StatisticalState{SimplexPoint::vertex(3, 0)};
    CHECK(classify(SimplexPoint({0.2, 0.3, 0.5}), vertex) == Classification::cell(0));
    // lambda on a face of the simplex: zero weight on a vertex
    CHECK(classify(SimplexPoint({0.5, 0.5, 0.0}), vertex).is_boundary());
    CHECK(classify(SimplexPoint::vertex(3, 0), vertex).is_boundary());

    const auto face = state({0.5, 0.5, 0.0});
    RandomStream rng(21);
    for (int i = 0; i < 1000; ++i) {
        const auto c = classify(sample_uniform_simplex(3, rng), face);
        CHECK((c.is_boundary() || c.cell_index() != 2));
    }
}

TEST_CASE("classify agrees with the barycentric oracle", "[simplex][property]")
{
    RandomStream rng(22);
    for (std::size_t n : {2u, 3u, 5u}) {
        std::size_t disagreements = 0;
        std::size_t near_zero = 0;
        for (int i = 0; i < 10'000; ++i) {
            const auto lambda = sample_uniform_simplex(n, rng);
            const auto kappa = StatisticalState{sample_uniform_simplex(n, rng)};
            const auto verdict = barycentric_oracle(lambda, kappa);
            const auto c = classify(lambda, kappa);
            const auto fast = c.is_boundary() ? std::nullopt : std::optional<std::size_t>(c.cell_index());
            if (fast != verdict.cell) {
                ++disagreements;
                if (verdict.margin < 1e-9) {
                    ++near_zero;
                }
            }
        }
        INFO("n = " << n);
        CHECK(disagreements == near_zero);
    }
}

TEST_CASE("barycentric_coordinates", "[simplex]")
{
    const auto vertices = standard_simplex_vertices(4);
    const auto at_vertex = barycentric_coordinates(vertices[1], vertices);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK_THAT(at_vertex[i], WithinAbs(i == 1 ? 1.0 : 0.0, 1e-14));
    }

    RandomStream rng(23);
    std::vector<Point> skew;
    for (int i = 0; i < 3; ++i) {
        const auto p = sample_uniform_simplex(3, rng);
        skew.emplace_back(p.coords().begin(), p.coords().end());
    }
    Point centroid(3, 0.0);
    for (const auto& v : skew) {
        for (std::size_t j = 0; j < 3; ++j) {
            centroid[j] += v[j] / 3.0;
        }
    }
    for (double c : barycentric_coordinates(centroid, skew)) {
        CHECK_THAT(c, WithinAbs(1.0 / 3.0, 1e-10));
    }

    for (int i = 0; i < 500; ++i) {
        const auto lambda = sample_uniform_simplex(3, rng);
        const auto c = barycentric_coordinates(lambda.coords(), skew);
        double sum = 0.0;
        Point rebuilt(3, 0.0);
        for (std::size_t v = 0; v < 3; ++v) {
            sum += c[v];
            for (std::size_t j = 0; j < 3; ++j) {
                rebuilt[j] += c[v] * skew[v][j];
            }
        }
        CHECK_THAT(sum, WithinAbs(1.0, 1e-10));
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK_THAT(rebuilt[j], WithinAbs(lambda[j], 1e-10));
        }
    }

    const std::vector<Point> degenerate{{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}};
    CHECK_THROWS_AS(barycentric_coordinates(degenerate[2], degenerate), DegenerateError);
}

TEST_CASE("simplex_volume", "[simplex]")
{
    CHECK_THAT(simplex_volume(standard_simplex_vertices(2)), WithinAbs(std::sqrt(2.0), 1e-15));
    // sqrt(n) / (n-1)! at n = 3
    CHECK_THAT(simplex_volume(standard_simplex_vertices(3)), WithinAbs(std::sqrt(3.0) / 2.0, 1e-15));
    const std::vector<Point> repeated{{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
    CHECK(simplex_volume(repeated) == 0.0);
    for (std::size_t n = 1; n <= 10; ++n) {
        CHECK_THAT(simplex_volume(standard_simplex_vertices(n)),
                   WithinRel(std::sqrt(static_cast<double>(n)) / std::tgamma(static_cast<double>(n)), 1e-13));
    }
}

TEST_CASE("cell_volume_fraction", "[simplex]")
{
    CHECK_THAT(cell_volume_fraction(state({0.7, 0.3}), 0), WithinAbs(0.7, 1e-12));
    CHECK_THAT(cell_volume_fraction(state({0.5, 0.25, 0.25}), 1), WithinAbs(0.25, 1e-12));

    const auto vertex = StatisticalState{SimplexPoint::vertex(4, 2)};
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK_THAT(cell_volume_fraction(vertex, k), WithinAbs(k == 2 ? 1.0 : 0.0, 1e-14));
    }
    CHECK_THROWS_AS(cell_volume_fraction(vertex, 4), std::out_of_range);
}

TEST_CASE("cell volumes equal kappa and sum to one", "[simplex][property]")
{
    RandomStream rng(24);
    for (std::size_t n = 2; n <= 8; ++n) {
        for (int i = 0; i < 50; ++i) {
            const auto kappa = StatisticalState{sample_uniform_simplex(n, rng)};
            double sum = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double fraction = cell_volume_fraction(kappa, k);
                CHECK_THAT(fraction, WithinAbs(kappa[k], 1e-10));
                sum += fraction;
            }
            CHECK_THAT(sum, WithinAbs(1.0, 1e-10));
        }
    }
}

TEST_CASE("sample_uniform_simplex", "[simplex][random]")
{
    RandomStream rng(25);
    CHECK_THROWS(sample_uniform_simplex(0, rng));
    CHECK(sample_uniform_simplex(1, rng) == SimplexPoint({1.0}));

    constexpr std::size_t n = 3;
    constexpr int kDraws = 1'000'000;
    std::vector<double> sum(n, 0.0);
    for (int i = 0; i < kDraws; ++i) {
        const auto p = sample_uniform_simplex(n, rng);
        for (std::size_t k = 0; k < n; ++k) {
            sum[k] += p[k];
        }
    }
    // Dirichlet(1,1,1) marginal variance (n-1) / (n^2 (n+1))
    const double sigma = std::sqrt((n - 1.0) / (n * n * (n + 1.0)) / kDraws);
    for (double s : sum) {
        CHECK(std::abs(s / kDraws - 1.0 / n) < 4.0 * sigma);
    }
}
