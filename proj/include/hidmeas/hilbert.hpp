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

// Complex Hilbert space primitives: unit states on S_n, inner products,
// eigenbases, Born probabilities and Haar-uniform sampling.
//
// Indices are 0-based throughout the library; the outcome labels default to
// "x1".."xn".

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hidmeas/random.hpp"

namespace hidmeas {

using Complex = std::complex<double>;

/// Unit-norm tolerance accepted when a state is built from raw amplitudes.
inline constexpr double kNormTolerance = 1e-12;
/// Entrywise tolerance on |Gram - I| for an eigenbasis.
inline constexpr double kBasisTolerance = 1e-10;

class DimensionError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

class BasisError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require_same_dimension(std::size_t a, std::size_t b, const char* what)
{
    if (a != b) {
        throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                             std::to_string(b) + ")");
    }
}

inline double squared_norm(std::span<const Complex> z)
{
    double sum = 0.0;
    for (const Complex& c : z) {
        sum += std::norm(c);
    }
    return sum;
}

} // namespace detail

/// Unit vector of n >= 1 complex amplitudes. Immutable after construction.
class StateVector
{
public:
    /// Accepts amplitudes whose squared norm is within `tolerance` of 1 and
    /// renormalizes them once.
    static StateVector from_amplitudes(std::vector<Complex> amplitudes, double tolerance = kNormTolerance)
    {
        check_finite(amplitudes);
        const double norm2 = detail::squared_norm(amplitudes);
        if (!(std::abs(norm2 - 1.0) <= tolerance)) {
            throw std::invalid_argument("StateVector: squared norm " + std::to_string(norm2) +
                                        " is not within tolerance of 1");
        }
        return StateVector(std::move(amplitudes), norm2);
    }

    /// Normalizes any finite nonzero vector.
    static StateVector normalized(std::vector<Complex> amplitudes)
    {
        check_finite(amplitudes);
        const double norm2 = detail::squared_norm(amplitudes);
        if (!(norm2 > 0.0)) {
            throw std::invalid_argument("StateVector: cannot normalize the zero vector");
        }
        return StateVector(std::move(amplitudes), norm2);
    }

    /// Canonical basis vector e_k of C^n.
    static StateVector basis(std::size_t n, std::size_t k)
    {
        if (k >= n) {
            throw std::out_of_range("StateVector::basis: index out of range");
        }
        std::vector<Complex> amplitudes(n);
        amplitudes[k] = 1.0;
        return StateVector(std::move(amplitudes), 1.0);
    }

    std::size_t dimension() const noexcept { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    const Complex& operator[](std::size_t j) const { return amplitudes_[j]; }

    /// e^{i theta} * this.
    StateVector with_global_phase(double theta) const
    {
        const Complex factor = std::polar(1.0, theta);
        std::vector<Complex> out(amplitudes_);
        for (Complex& c : out) {
            c *= factor;
        }
        return StateVector(std::move(out), 1.0);
    }

    friend bool operator==(const StateVector&, const StateVector&) = default;

private:
    StateVector(std::vector<Complex> amplitudes, double norm2) : amplitudes_(std::move(amplitudes))
    {
        if (norm2 != 1.0) {
            const double inv = 1.0 / std::sqrt(norm2);
            for (Complex& c : amplitudes_) {
                c *= inv;
            }
        }
    }

    static void check_finite(const std::vector<Complex>& amplitudes)
    {
        if (amplitudes.empty()) {
            throw std::invalid_argument("StateVector: dimension must be at least 1");
        }
        for (const Complex& c : amplitudes) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
                throw std::invalid_argument("StateVector: non-finite amplitude");
            }
        }
    }

    std::vector<Complex> amplitudes_;
};

/// <u, v>, conjugate-linear in u.
inline Complex inner_product(const StateVector& u, const StateVector& v)
{
    detail::require_same_dimension(u.dimension(), v.dimension(), "inner_product");
    Complex sum = 0.0;
    for (std::size_t j = 0; j < u.dimension(); ++j) {
        sum += std::conj(u[j]) * v[j];
    }
    return sum;
}

struct GramViolation
{
    std::size_t row = 0;
    std::size_t col = 0;
    double deviation = 0.0;
};

struct BasisReport
{
    bool ok = false;
    double max_deviation = 0.0;
    std::vector<GramViolation> violations;
    std::string problem; // set when the candidate has the wrong shape
};

/// ok iff every entry of |Gram - I| is <= tolerance.
inline BasisReport validate_eigenbasis(std::span<const StateVector> candidate, double tolerance = kBasisTolerance)
{
    BasisReport report;
    const std::size_t n = candidate.size();
    if (n == 0) {
        report.problem = "empty candidate basis";
        return report;
    }
    for (const StateVector& v : candidate) {
        if (v.dimension() != n) {
            report.problem = "expected " + std::to_string(n) + " vectors of dimension " + std::to_string(n);
            return report;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
            const Complex target = (k == l) ? 1.0 : 0.0;
            const double deviation = std::abs(inner_product(candidate[k], candidate[l]) - target);
            report.max_deviation = std::max(report.max_deviation, deviation);
            if (deviation > tolerance) {
                report.violations.push_back({k, l, deviation});
            }
        }
    }
    report.ok = report.violations.empty();
    return report;
}

/// Ordered orthonormal basis e_1..e_n tied to outcome labels x_1..x_n.
class Eigenbasis
{
public:
    explicit Eigenbasis(std::vector<StateVector> vectors, std::vector<std::string> labels = {})
        : vectors_(std::move(vectors)), labels_(std::move(labels))
    {
        const BasisReport report = validate_eigenbasis(vectors_);
        if (!report.ok) {
            throw BasisError(report.problem.empty()
                                 ? "Eigenbasis: Gram matrix deviates from identity by " +
                                       std::to_string(report.max_deviation)
                                 : "Eigenbasis: " + report.problem);
        }
        if (labels_.empty()) {
            labels_ = default_labels(vectors_.size());
        }
        if (labels_.size() != vectors_.size()) {
            throw BasisError("Eigenbasis: one label per vector required");
        }
        if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size()) {
            throw BasisError("Eigenbasis: labels must be distinct");
        }
    }

    static Eigenbasis standard(std::size_t n)
    {
        if (n == 0) {
            throw std::invalid_argument("Eigenbasis::standard: n must be at least 1");
        }
        std::vector<StateVector> vectors;
        vectors.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            vectors.push_back(StateVector::basis(n, k));
        }
        return Eigenbasis(std::move(vectors));
    }

    static std::vector<std::string> default_labels(std::size_t n)
    {
        std::vector<std::string> labels;
        labels.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            labels.push_back("x" + std::to_string(k + 1));
        }
        return labels;
    }

    std::size_t dimension() const noexcept { return vectors_.size(); }
    const StateVector& operator[](std::size_t k) const { return vectors_.at(k); }
    std::span<const StateVector> vectors() const noexcept { return vectors_; }
    const std::string& label(std::size_t k) const { return labels_.at(k); }
    std::span<const std::string> labels() const noexcept { return labels_; }

private:
    std::vector<StateVector> vectors_;
    std::vector<std::string> labels_;
};

/// |<q, e_k>|^2 for every k.
inline std::vector<double> born_probabilities(const StateVector& q, const Eigenbasis& basis)
{
    detail::require_same_dimension(q.dimension(), basis.dimension(), "born_probabilities");
    std::vector<double> p(basis.dimension());
    for (std::size_t k = 0; k < p.size(); ++k) {
        p[k] = std::norm(inner_product(q, basis[k]));
    }
    return p;
}

/// Components <e_k, q>. The result is re-normalized after a 1e-10 check.
inline StateVector to_eigenbasis_coordinates(const StateVector& q, const Eigenbasis& basis)
{
    detail::require_same_dimension(q.dimension(), basis.dimension(), "to_eigenbasis_coordinates");
    std::vector<Complex> coords(basis.dimension());
    for (std::size_t k = 0; k < coords.size(); ++k) {
        coords[k] = inner_product(basis[k], q);
    }
    return StateVector::from_amplitudes(std::move(coords), kBasisTolerance);
}

/// Inverse of to_eigenbasis_coordinates: sum_k c_k e_k.
inline StateVector from_eigenbasis_coordinates(const StateVector& coords, const Eigenbasis& basis)
{
    detail::require_same_dimension(coords.dimension(), basis.dimension(), "from_eigenbasis_coordinates");
    const std::size_t n = basis.dimension();
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto e = basis[k].amplitudes();
        for (std::size_t j = 0; j < n; ++j) {
            out[j] += coords[k] * e[j];
        }
    }
    return StateVector::from_amplitudes(std::move(out), kBasisTolerance);
}

/// Haar-uniform point of S_n: 2n independent standard normals, normalized.
inline StateVector sample_uniform_sphere(std::size_t n, RandomStream& rng)
{
    if (n == 0) {
        throw std::invalid_argument("sample_uniform_sphere: n must be at least 1");
    }
    std::vector<Complex> z(n);
    for (Complex& c : z) {
        const double re = rng.normal();
        const double im = rng.normal();
        c = Complex(re, im);
    }
    return StateVector::normalized(std::move(z));
}

/// Random orthonormal basis: modified Gram-Schmidt on Haar-uniform draws.
inline Eigenbasis sample_eigenbasis(std::size_t n, RandomStream& rng)
{
    std::vector<StateVector> vectors;
    vectors.reserve(n);
    while (vectors.size() < n) {
        const StateVector draw = sample_uniform_sphere(n, rng);
        std::vector<Complex> v(draw.amplitudes().begin(), draw.amplitudes().end());
        for (const StateVector& e : vectors) {
            Complex overlap = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                overlap += std::conj(e[j]) * v[j];
            }
            for (std::size_t j = 0; j < n; ++j) {
                v[j] -= overlap * e[j];
            }
        }
        if (detail::squared_norm(v) < 1e-6) {
            continue; // nearly dependent draw; resample
        }
        vectors.push_back(StateVector::normalized(std::move(v)));
    }
    return Eigenbasis(std::move(vectors));
}

} // namespace hidmeas
