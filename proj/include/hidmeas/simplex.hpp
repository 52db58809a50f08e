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

// Geometry of the probability simplex: the tau map, classification into the
// cells C_k, barycentric coordinates, Gram-determinant volumes and uniform
// simplex sampling.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hidmeas/hilbert.hpp"
#include "hidmeas/random.hpp"

namespace hidmeas {

/// Coordinates above -kClampTolerance are clamped to zero.
inline constexpr double kClampTolerance = 1e-14;
/// Allowed deviation of the coordinate sum from 1.
inline constexpr double kSimplexSumTolerance = 1e-12;

class DegenerateError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

using Point = std::vector<double>;

/// Point of the (n-1)-simplex in R^n.
class SimplexPoint
{
public:
    explicit SimplexPoint(std::vector<double> coords) : coords_(std::move(coords))
    {
        if (coords_.empty()) {
            throw std::invalid_argument("SimplexPoint: dimension must be at least 1");
        }
        double sum = 0.0;
        for (double& c : coords_) {
            if (!std::isfinite(c) || c < -kClampTolerance) {
                throw std::invalid_argument("SimplexPoint: coordinate " + std::to_string(c) + " is negative");
            }
            if (c < 0.0) {
                c = 0.0;
            }
            sum += c;
        }
        if (!(std::abs(sum - 1.0) <= kSimplexSumTolerance)) {
            throw std::invalid_argument("SimplexPoint: coordinates sum to " + std::to_string(sum));
        }
    }

    /// Canonical vertex k of the simplex.
    static SimplexPoint vertex(std::size_t n, std::size_t k)
    {
        if (k >= n) {
            throw std::out_of_range("SimplexPoint::vertex: index out of range");
        }
        std::vector<double> coords(n, 0.0);
        coords[k] = 1.0;
        return SimplexPoint(std::move(coords));
    }

    std::size_t dimension() const noexcept { return coords_.size(); }
    std::span<const double> coords() const noexcept { return coords_; }
    double operator[](std::size_t j) const { return coords_[j]; }

    friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

private:
    std::vector<double> coords_;
};

/// The statistical state kappa = tau(q).
struct StatisticalState
{
    SimplexPoint kappa;

    std::size_t dimension() const noexcept { return kappa.dimension(); }
    double operator[](std::size_t j) const { return kappa[j]; }
};

/// Either the cell index k (0-based) or the boundary set M_0.
class Classification
{
public:
    static Classification cell(std::size_t k) { return Classification(k); }
    static Classification boundary() { return Classification(); }

    bool is_boundary() const noexcept { return !cell_.has_value(); }
    std::size_t cell_index() const
    {
        if (!cell_) {
            throw std::logic_error("Classification: boundary has no cell index");
        }
        return *cell_;
    }

    friend bool operator==(const Classification&, const Classification&) = default;

private:
    Classification() = default;
    explicit Classification(std::size_t k) : cell_(k) {}

    std::optional<std::size_t> cell_;
};

/// tau(z) = (|z_1|^2, ..., |z_n|^2).
inline SimplexPoint tau(const StateVector& a)
{
    std::vector<double> coords(a.dimension());
    for (std::size_t j = 0; j < coords.size(); ++j) {
        coords[j] = std::norm(a[j]);
    }
    return SimplexPoint(std::move(coords));
}

/// Statistical state of q with respect to the eigenbasis.
inline StatisticalState statistical_state(const StateVector& q, const Eigenbasis& basis)
{
    return StatisticalState{tau(to_eigenbasis_coordinates(q, basis))};
}

/**
 * Locates lambda in the partition {C_k} induced by kappa.
 *
 * lambda lies in the relative interior of conv({v_j : j != k} U {kappa}) iff
 * its barycentric weights beta = lambda_k / kappa_k and
 * alpha_j = lambda_j - beta * kappa_j are all strictly positive, i.e. iff
 * lambda_k > 0 and k is the strict unique minimizer of lambda_j / kappa_j.
 * A zero kappa_j gives ratio +inf, unless lambda_j is zero too, in which case
 * alpha_j = 0 and the point is on the boundary.
 *
 * Comparisons are exact; there is no tolerance band.
 */
inline Classification classify(const SimplexPoint& lambda, const StatisticalState& state)
{
    const SimplexPoint& kappa = state.kappa;
    detail::require_same_dimension(lambda.dimension(), kappa.dimension(), "classify");
    constexpr double inf = std::numeric_limits<double>::infinity();

    double best = inf;
    std::size_t best_index = 0;
    bool tied = false;
    for (std::size_t j = 0; j < lambda.dimension(); ++j) {
        double ratio = inf;
        if (kappa[j] > 0.0) {
            ratio = lambda[j] / kappa[j];
        } else if (lambda[j] == 0.0) {
            return Classification::boundary();
        }
        if (ratio < best) {
            best = ratio;
            best_index = j;
            tied = false;
        } else if (ratio == best) {
            tied = true;
        }
    }
    if (tied || !(lambda[best_index] > 0.0)) {
        return Classification::boundary();
    }
    return Classification::cell(best_index);
}

/// Affine weights c with sum c_i = 1 and sum c_i V_i = lambda.
inline std::vector<double> barycentric_coordinates(std::span<const double> lambda, std::span<const Point> vertices)
{
    const std::size_t m = vertices.size();
    const std::size_t d = lambda.size();
    if (m == 0) {
        throw DegenerateError("barycentric_coordinates: no vertices");
    }
    Eigen::MatrixXd system(d + 1, m);
    Eigen::VectorXd rhs(d + 1);
    for (std::size_t i = 0; i < m; ++i) {
        detail::require_same_dimension(vertices[i].size(), d, "barycentric_coordinates");
        for (std::size_t r = 0; r < d; ++r) {
            system(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = vertices[i][r];
        }
        system(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(i)) = 1.0;
    }
    for (std::size_t r = 0; r < d; ++r) {
        rhs(static_cast<Eigen::Index>(r)) = lambda[r];
    }
    rhs(static_cast<Eigen::Index>(d)) = 1.0;

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(system);
    qr.setThreshold(1e-12);
    if (qr.rank() < static_cast<Eigen::Index>(m)) {
        throw DegenerateError("barycentric_coordinates: vertices are affinely dependent");
    }
    const Eigen::VectorXd solution = qr.solve(rhs);
    return {solution.data(), solution.data() + solution.size()};
}

/// (m-1)-volume of the simplex spanned by m points: sqrt(det(G^T G)) / (m-1)!.
inline double simplex_volume(std::span<const Point> vertices)
{
    const std::size_t m = vertices.size();
    if (m == 0) {
        throw std::invalid_argument("simplex_volume: at least one vertex required");
    }
    const std::size_t d = vertices[0].size();
    const auto edges = static_cast<Eigen::Index>(m - 1);
    Eigen::MatrixXd g(static_cast<Eigen::Index>(d), edges);
    for (std::size_t i = 1; i < m; ++i) {
        detail::require_same_dimension(vertices[i].size(), d, "simplex_volume");
        for (std::size_t r = 0; r < d; ++r) {
            g(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i - 1)) = vertices[i][r] - vertices[0][r];
        }
    }
    const double gram_det = edges == 0 ? 1.0 : (g.transpose() * g).determinant();
    return std::sqrt(std::max(gram_det, 0.0)) / std::tgamma(static_cast<double>(m));
}

/// Vertices e_1..e_n of the standard simplex in R^n.
inline std::vector<Point> standard_simplex_vertices(std::size_t n)
{
    std::vector<Point> vertices(n, Point(n, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        vertices[k][k] = 1.0;
    }
    return vertices;
}

/// Vertices of C_k: kappa in place of vertex k.
inline std::vector<Point> cell_vertices(const StatisticalState& state, std::size_t k)
{
    const std::size_t n = state.dimension();
    if (k >= n) {
        throw std::out_of_range("cell_vertices: index out of range");
    }
    std::vector<Point> vertices = standard_simplex_vertices(n);
    vertices[k].assign(state.kappa.coords().begin(), state.kappa.coords().end());
    return vertices;
}

/// mu(C_k) / mu(simplex), from Gram determinants of both.
inline double cell_volume_fraction(const StatisticalState& state, std::size_t k)
{
    const std::size_t n = state.dimension();
    if (k >= n) {
        throw std::out_of_range("cell_volume_fraction: index out of range");
    }
    return simplex_volume(cell_vertices(state, k)) / simplex_volume(standard_simplex_vertices(n));
}

/// Uniform point of the simplex: n unit-rate exponentials, normalized.
inline SimplexPoint sample_uniform_simplex(std::size_t n, RandomStream& rng)
{
    if (n == 0) {
        throw std::invalid_argument("sample_uniform_simplex: n must be at least 1");
    }
    std::vector<double> coords(n);
    double sum = 0.0;
    do {
        sum = 0.0;
        for (double& c : coords) {
            c = rng.exponential();
            sum += c;
        }
    } while (sum == 0.0);
    for (double& c : coords) {
        c /= sum;
    }
    return SimplexPoint(std::move(coords));
}

} // namespace hidmeas
