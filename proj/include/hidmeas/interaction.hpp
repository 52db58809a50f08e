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

// The deterministic interaction i(q, a), modulus great circle segments and
// the consistent-interaction (PCI) checker.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hidmeas/hilbert.hpp"
#include "hidmeas/outcome.hpp"
#include "hidmeas/random.hpp"
#include "hidmeas/simplex.hpp"

namespace hidmeas {

/// Open-interval margin for segment parameters s drawn by the checker.
inline constexpr double kSegmentEpsilon = 1e-6;

/// Outcome of apparatus state `a` against a precomputed statistical state.
inline Outcome interact(const StatisticalState& state, const StateVector& a, const Eigenbasis& basis)
{
    const Classification cell = classify(tau(to_eigenbasis_coordinates(a, basis)), state);
    return cell.is_boundary() ? Outcome::boundary() : Outcome::index(cell.cell_index());
}

/// i(q, a): classify tau(a) against kappa = tau(q), both in eigenbasis coordinates.
inline Outcome interact(const StateVector& q, const StateVector& a, const Eigenbasis& basis)
{
    detail::require_same_dimension(q.dimension(), a.dimension(), "interact");
    return interact(statistical_state(q, basis), a, basis);
}

using InteractionFn = std::function<Outcome(const StateVector&, const StateVector&)>;

inline InteractionFn hilbert_interaction(Eigenbasis basis)
{
    return [basis = std::move(basis)](const StateVector& q, const StateVector& a) { return interact(q, a, basis); };
}

/// Interaction with the outcomes of cells `first` and `second` exchanged.
/// Used only to check that the PCI harness detects a wrong partition.
inline InteractionFn swapped_interaction(Eigenbasis basis, std::size_t first, std::size_t second)
{
    return [basis = std::move(basis), first, second](const StateVector& q, const StateVector& a) {
        const Outcome o = interact(q, a, basis);
        if (o.is_boundary()) {
            return o;
        }
        if (o.value() == first) {
            return Outcome::index(second);
        }
        if (o.value() == second) {
            return Outcome::index(first);
        }
        return o;
    };
}

/// A point of the segment <e_anchor -> a>, with `a` in eigenbasis coordinates.
struct SegmentSpec
{
    std::size_t anchor = 0;
    StateVector a;
    double s = 0.5;
    std::vector<double> phases;
};

/// |c_j| = sqrt(s)|a_j| for j != anchor, |c_anchor| = sqrt((1-s) + s|a_anchor|^2),
/// c_j = |c_j| exp(i phases_j).
inline StateVector segment_point(const SegmentSpec& spec)
{
    const std::size_t n = spec.a.dimension();
    if (!(spec.s > 0.0 && spec.s < 1.0)) {
        throw std::invalid_argument("segment_point: s must lie in the open interval (0, 1)");
    }
    if (spec.anchor >= n) {
        throw std::out_of_range("segment_point: anchor index out of range");
    }
    if (spec.phases.size() != n) {
        throw DimensionError("segment_point: one phase per component required");
    }
    std::vector<Complex> c(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double modulus = j == spec.anchor ? std::sqrt((1.0 - spec.s) + spec.s * std::norm(spec.a[j]))
                                                : std::sqrt(spec.s) * std::abs(spec.a[j]);
        c[j] = std::polar(modulus, spec.phases[j]);
    }
    return StateVector::from_amplitudes(std::move(c));
}

struct PciViolation
{
    std::size_t anchor = 0;
    double s = 0.0;
    Outcome observed = Outcome::boundary();
};

struct PciReport
{
    bool skipped = false; // i(q, a) was itself on the boundary
    Outcome outcome = Outcome::boundary();
    std::size_t segments = 0;
    std::size_t samples = 0;
    std::size_t violation_count = 0;
    std::size_t boundary_hits = 0;
    std::vector<PciViolation> violations; // first few only
    std::vector<std::size_t> observed_counts; // per outcome, over all segment samples

    static constexpr std::size_t kMaxRecorded = 16;
};

/**
 * Samples the segments <e_r -> a> for every r != k, where x_k = i(q, a), and
 * records every sampled a' with i(q, a') != x_k.
 *
 * s is uniform on (eps, 1 - eps) and phases are independent and uniform;
 * boundary hits are tallied separately and never counted as violations.
 */
inline PciReport check_pci(const StateVector& q, const StateVector& a, const Eigenbasis& basis,
                           std::size_t samples_per_segment, RandomStream& rng, const InteractionFn& interaction)
{
    const std::size_t n = basis.dimension();
    detail::require_same_dimension(q.dimension(), n, "check_pci");
    detail::require_same_dimension(a.dimension(), n, "check_pci");

    PciReport report;
    report.observed_counts.assign(n, 0);
    report.outcome = interaction(q, a);
    if (report.outcome.is_boundary()) {
        report.skipped = true;
        return report;
    }
    const std::size_t k = report.outcome.value();
    const StateVector a_coords = to_eigenbasis_coordinates(a, basis);

    SegmentSpec spec{0, a_coords, 0.5, std::vector<double>(n)};
    for (std::size_t r = 0; r < n; ++r) {
        if (r == k) {
            continue;
        }
        ++report.segments;
        spec.anchor = r;
        for (std::size_t i = 0; i < samples_per_segment; ++i) {
            spec.s = rng.uniform(kSegmentEpsilon, 1.0 - kSegmentEpsilon);
            for (double& phase : spec.phases) {
                phase = rng.phase();
            }
            const StateVector moved = from_eigenbasis_coordinates(segment_point(spec), basis);
            const Outcome observed = interaction(q, moved);
            ++report.samples;
            if (observed.is_boundary()) {
                ++report.boundary_hits;
                continue;
            }
            ++report.observed_counts[observed.value()];
            if (observed != report.outcome) {
                ++report.violation_count;
                if (report.violations.size() < PciReport::kMaxRecorded) {
                    report.violations.push_back({r, spec.s, observed});
                }
            }
        }
    }
    return report;
}

inline PciReport check_pci(const StateVector& q, const StateVector& a, const Eigenbasis& basis,
                           std::size_t samples_per_segment, RandomStream& rng)
{
    return check_pci(q, a, basis, samples_per_segment, rng, hilbert_interaction(basis));
}

} // namespace hidmeas
