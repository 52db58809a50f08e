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

// Seeded verification experiments and their reports.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hidmeas/hilbert.hpp"
#include "hidmeas/interaction.hpp"
#include "hidmeas/ipm.hpp"
#include "hidmeas/parallel.hpp"
#include "hidmeas/random.hpp"
#include "hidmeas/simplex.hpp"
#include "hidmeas/stats.hpp"

namespace hidmeas {

using Json = nlohmann::ordered_json;

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;
inline constexpr double kDefaultSigmas = 4.0;
inline constexpr double kBoundaryFrequencyLimit = 1e-5;
inline constexpr double kLemmaTolerance = 1e-12;

struct ExperimentReport
{
    std::string experiment;
    Json params = Json::object();
    std::vector<std::string> rows; // one label per observed/expected entry
    std::vector<double> observed;
    std::vector<double> expected;
    Json statistics = Json::object();
    std::uint64_t boundary_hits = 0;
    bool pass = false;
    double duration_ms = 0.0;
};

/// x rounded to 12 significant digits.
inline double round_significant(double x)
{
    if (!std::isfinite(x) || x == 0.0) {
        return x;
    }
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.12g", x);
    return std::strtod(buffer, nullptr);
}

namespace detail {

inline void round_numbers(Json& node)
{
    if (node.is_number_float()) {
        node = round_significant(node.get<double>());
    } else if (node.is_structured()) {
        for (auto& child : node) {
            round_numbers(child);
        }
    }
}

inline std::string format_number(double x)
{
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.12g", x);
    return buffer;
}

inline Json amplitudes_json(const StateVector& q)
{
    Json out = Json::array();
    for (const Complex& c : q.amplitudes()) {
        out.push_back(Json::array({c.real(), c.imag()}));
    }
    return out;
}

inline std::vector<double> frequencies(const std::vector<std::uint64_t>& counts, std::size_t outcomes,
                                       std::uint64_t trials)
{
    std::vector<double> out(outcomes);
    for (std::size_t k = 0; k < outcomes; ++k) {
        out[k] = static_cast<double>(counts[k]) / static_cast<double>(trials);
    }
    return out;
}

class Stopwatch
{
public:
    double elapsed_ms() const
    {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Compares outcome frequencies with probabilities using the binomial bound
/// and fills the shared part of frequency reports.
inline void judge_frequencies(ExperimentReport& report, const std::vector<std::uint64_t>& counts,
                              const std::vector<double>& probabilities, std::uint64_t trials, double sigmas,
                              std::span<const std::string> labels)
{
    const std::size_t n = probabilities.size();
    report.rows.assign(labels.begin(), labels.end());
    report.observed = frequencies(counts, n, trials);
    report.expected = probabilities;
    report.boundary_hits = counts[n];

    bool within = true;
    double max_deviation = 0.0;
    double max_excess = -std::numeric_limits<double>::infinity();
    Json tolerances = Json::array();
    for (std::size_t k = 0; k < n; ++k) {
        const double deviation = std::abs(report.observed[k] - probabilities[k]);
        const double tolerance = binomial_tolerance(probabilities[k], trials, sigmas);
        tolerances.push_back(tolerance);
        max_deviation = std::max(max_deviation, deviation);
        max_excess = std::max(max_excess, deviation - tolerance);
        within = within && deviation <= tolerance;
    }
    const double boundary_frequency = static_cast<double>(report.boundary_hits) / static_cast<double>(trials);
    report.statistics["sigmas"] = sigmas;
    report.statistics["tolerances"] = std::move(tolerances);
    report.statistics["max_abs_deviation"] = max_deviation;
    report.statistics["max_excess_over_tolerance"] = max_excess;
    report.statistics["boundary_frequency"] = boundary_frequency;
    report.statistics["boundary_limit"] = kBoundaryFrequencyLimit;
    report.pass = within && boundary_frequency < kBoundaryFrequencyLimit;
}

} // namespace detail

/// JSON with the stable field order; numbers carry 12 significant digits.
inline std::string to_json(const ExperimentReport& report)
{
    Json j;
    j["experiment"] = report.experiment;
    j["params"] = report.params;
    j["observed"] = report.observed;
    j["expected"] = report.expected;
    j["statistics"] = report.statistics;
    j["boundary_hits"] = report.boundary_hits;
    j["pass"] = report.pass;
    j["duration_ms"] = report.duration_ms;
    detail::round_numbers(j);
    return j.dump(2) + "\n";
}

/// CSV with a header row and one row per outcome or bin.
inline std::string to_csv(const ExperimentReport& report)
{
    std::ostringstream out;
    out << "experiment,row,observed,expected\n";
    for (std::size_t i = 0; i < report.observed.size(); ++i) {
        const std::string row = i < report.rows.size() ? report.rows[i] : std::to_string(i);
        out << report.experiment << ',' << row << ',' << detail::format_number(report.observed[i]) << ','
            << detail::format_number(i < report.expected.size() ? report.expected[i] : 0.0) << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Born rule

struct BornCheckConfig
{
    std::size_t n = 2;
    std::optional<StateVector> q;     // seeded-random when absent
    std::optional<Eigenbasis> basis;  // standard when absent
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = kDefaultSeed;
    unsigned shards = 1;
    double sigmas = kDefaultSigmas;
};

/// The entity state used by a born check: the given q, or a uniform draw
/// from the kEntityState sub-stream.
inline StateVector born_check_state(const BornCheckConfig& config)
{
    if (config.q) {
        return *config.q;
    }
    RandomStream rng(config.seed, streams::kEntityState);
    return sample_uniform_sphere(config.n, rng);
}

/// Outcome counts (last entry: boundary) of interact(q, a) over uniform a.
inline std::vector<std::uint64_t> born_counts(const StateVector& q, const Eigenbasis& basis, std::uint64_t samples,
                                              std::uint64_t seed, unsigned shards)
{
    const std::size_t n = basis.dimension();
    const StatisticalState state = statistical_state(q, basis);
    return sharded_tally(samples, n + 1, seed, shards, [&](RandomStream& rng) {
        const Outcome o = interact(state, sample_uniform_sphere(n, rng), basis);
        return o.is_boundary() ? n : o.value();
    });
}

inline ExperimentReport run_born_check(const BornCheckConfig& config)
{
    const detail::Stopwatch clock;
    if (config.samples < 10'000) {
        throw std::invalid_argument("born-check: at least 10^4 samples required");
    }
    const StateVector q = born_check_state(config);
    const std::size_t n = q.dimension();
    if (config.q && config.n != n) {
        throw DimensionError("born-check: q has dimension " + std::to_string(n) + ", expected " +
                             std::to_string(config.n));
    }
    const Eigenbasis basis = config.basis ? *config.basis : Eigenbasis::standard(n);
    const std::vector<double> p = born_probabilities(q, basis);
    const auto counts = born_counts(q, basis, config.samples, config.seed, config.shards);

    ExperimentReport report;
    report.experiment = "born-check";
    report.params["n"] = n;
    report.params["samples"] = config.samples;
    report.params["seed"] = config.seed;
    report.params["shards"] = config.shards;
    report.params["q"] = detail::amplitudes_json(q);
    report.params["basis"] = config.basis ? "custom" : "standard";
    detail::judge_frequencies(report, counts, p, config.samples, config.sigmas, basis.labels());
    report.duration_ms = clock.elapsed_ms();
    return report;
}

// ---------------------------------------------------------------------------
// Simplex model: uniform lambda classified against kappa

struct SimplexModelConfig
{
    std::size_t n = 2;
    std::optional<StatisticalState> kappa; // seeded-random when absent
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = kDefaultSeed;
    unsigned shards = 1;
    double sigmas = kDefaultSigmas;
};

inline StatisticalState simplex_model_state(const SimplexModelConfig& config)
{
    if (config.kappa) {
        return *config.kappa;
    }
    RandomStream rng(config.seed, streams::kStatisticalState);
    return StatisticalState{sample_uniform_simplex(config.n, rng)};
}

inline ExperimentReport run_simplex_model(const SimplexModelConfig& config)
{
    const detail::Stopwatch clock;
    if (config.samples < 10'000) {
        throw std::invalid_argument("simplex-model: at least 10^4 samples required");
    }
    const StatisticalState kappa = simplex_model_state(config);
    const std::size_t n = kappa.dimension();
    const auto counts = sharded_tally(config.samples, n + 1, config.seed, config.shards, [&](RandomStream& rng) {
        const Classification c = classify(sample_uniform_simplex(n, rng), kappa);
        return c.is_boundary() ? n : c.cell_index();
    });

    ExperimentReport report;
    report.experiment = "simplex-model";
    report.params["n"] = n;
    report.params["samples"] = config.samples;
    report.params["seed"] = config.seed;
    report.params["shards"] = config.shards;
    report.params["kappa"] = std::vector<double>(kappa.kappa.coords().begin(), kappa.kappa.coords().end());
    const std::vector<double> expected(kappa.kappa.coords().begin(), kappa.kappa.coords().end());
    const auto labels = Eigenbasis::default_labels(n);
    detail::judge_frequencies(report, counts, expected, config.samples, config.sigmas, labels);
    report.duration_ms = clock.elapsed_ms();
    return report;
}

// ---------------------------------------------------------------------------
// Pushforward of the uniform sphere measure under tau

/**
 * Open boxes a_i < lambda_i < b_i (i < n-1) of a regular grid with m cells
 * per axis, restricted to boxes lying inside the projected simplex
 * {lambda_1 + ... + lambda_{n-1} <= 1}. There are C(m, n-1) of them, each of
 * uniform probability (n-1)! / m^(n-1). Everything else falls into one
 * remainder bin.
 */
class RectangleBinning
{
public:
    RectangleBinning(std::size_t n, std::size_t min_boxes) : n_(n)
    {
        if (n < 2 || n > 8) {
            throw std::invalid_argument("RectangleBinning: n must be in 2..8");
        }
        if (min_boxes == 0) {
            throw std::invalid_argument("RectangleBinning: at least one box required");
        }
        const std::size_t axes = n - 1;
        while (binomial(grid_, axes) < min_boxes) {
            ++grid_;
        }
        std::vector<std::size_t> cell(axes, 0);
        enumerate(cell, 0, 0);
        box_probability_ = std::tgamma(static_cast<double>(n)) / std::pow(static_cast<double>(grid_), axes);
    }

    std::size_t grid() const noexcept { return grid_; }
    std::size_t box_count() const noexcept { return boxes_.size(); }
    double box_probability() const noexcept { return box_probability_; }
    double remainder_probability() const noexcept
    {
        return std::max(0.0, 1.0 - box_probability_ * static_cast<double>(boxes_.size()));
    }
    const std::vector<std::size_t>& box(std::size_t i) const { return boxes_.at(i); }

    /// Box index, box_count() for the remainder, or nullopt on a grid line.
    std::optional<std::size_t> locate(const SimplexPoint& lambda) const
    {
        std::uint64_t key = 0;
        std::size_t used = 0;
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            const double scaled = lambda[i] * static_cast<double>(grid_);
            const double cell = std::floor(scaled);
            if (scaled == cell) {
                return std::nullopt;
            }
            const auto c = static_cast<std::size_t>(cell);
            used += c + 1;
            key = key * grid_ + std::min(c, grid_ - 1);
        }
        if (used > grid_) {
            return box_count();
        }
        return index_.at(key);
    }

private:
    static std::size_t binomial(std::size_t m, std::size_t k)
    {
        if (k > m) {
            return 0;
        }
        double value = 1.0;
        for (std::size_t i = 1; i <= k; ++i) {
            value = value * static_cast<double>(m - k + i) / static_cast<double>(i);
        }
        return static_cast<std::size_t>(std::llround(value));
    }

    void enumerate(std::vector<std::size_t>& cell, std::size_t axis, std::size_t used)
    {
        if (axis == cell.size()) {
            std::uint64_t key = 0;
            for (std::size_t c : cell) {
                key = key * grid_ + c;
            }
            index_.emplace(key, boxes_.size());
            boxes_.push_back(cell);
            return;
        }
        for (std::size_t c = 0; used + c + 1 <= grid_; ++c) {
            cell[axis] = c;
            enumerate(cell, axis + 1, used + c + 1);
        }
    }

    std::size_t n_;
    std::size_t grid_ = 1;
    double box_probability_ = 0.0;
    std::vector<std::vector<std::size_t>> boxes_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

enum class PushforwardSource {
    uniform_sphere, // tau of Haar-uniform points of S_n
    real_sphere,    // tau of uniform points of the real sphere: deliberately biased
};

struct PushforwardConfig
{
    std::size_t n = 2;
    std::uint64_t samples = 1'000'000;
    std::size_t bins = 50;
    std::uint64_t seed = kDefaultSeed;
    unsigned shards = 1;
    double alpha = 0.001;
    PushforwardSource source = PushforwardSource::uniform_sphere;
};

inline SimplexPoint draw_pushforward(std::size_t n, PushforwardSource source, RandomStream& rng)
{
    if (source == PushforwardSource::uniform_sphere) {
        return tau(sample_uniform_sphere(n, rng));
    }
    std::vector<Complex> x(n);
    for (Complex& c : x) {
        c = rng.normal();
    }
    return tau(StateVector::normalized(std::move(x)));
}

inline ExperimentReport run_pushforward_check(const PushforwardConfig& config)
{
    const detail::Stopwatch clock;
    if (config.bins < 20) {
        throw std::invalid_argument("pushforward-check: at least 20 bins required");
    }
    if (config.samples < 100'000) {
        throw std::invalid_argument("pushforward-check: at least 10^5 samples required");
    }
    const RectangleBinning binning(config.n, config.bins);
    const std::size_t boxes = binning.box_count();
    const std::size_t edge_bin = boxes + 1;
    const auto counts = sharded_tally(config.samples, boxes + 2, config.seed, config.shards, [&](RandomStream& rng) {
        return binning.locate(draw_pushforward(config.n, config.source, rng)).value_or(edge_bin);
    });

    ExperimentReport report;
    report.experiment = "pushforward-check";
    report.params["n"] = config.n;
    report.params["samples"] = config.samples;
    report.params["bins"] = config.bins;
    report.params["seed"] = config.seed;
    report.params["shards"] = config.shards;
    report.params["alpha"] = config.alpha;
    report.params["source"] = config.source == PushforwardSource::uniform_sphere ? "uniform-sphere" : "real-sphere";

    report.boundary_hits = counts[edge_bin];
    const auto binned = static_cast<double>(config.samples - report.boundary_hits);
    const double remainder = binning.remainder_probability();
    const bool use_remainder = remainder > 1e-9;

    std::vector<double> observed_counts;
    std::vector<double> expected_counts;
    for (std::size_t b = 0; b < boxes; ++b) {
        report.rows.push_back("box" + std::to_string(b));
        report.observed.push_back(static_cast<double>(counts[b]) / static_cast<double>(config.samples));
        report.expected.push_back(binning.box_probability());
        observed_counts.push_back(static_cast<double>(counts[b]));
        expected_counts.push_back(binning.box_probability() * binned);
    }
    bool stray_remainder = false;
    report.rows.push_back("remainder");
    report.observed.push_back(static_cast<double>(counts[boxes]) / static_cast<double>(config.samples));
    report.expected.push_back(remainder);
    if (use_remainder) {
        observed_counts.push_back(static_cast<double>(counts[boxes]));
        expected_counts.push_back(remainder * binned);
    } else {
        stray_remainder = counts[boxes] > 0;
    }

    const double statistic = chi_square_statistic(observed_counts, expected_counts);
    const std::size_t dof = observed_counts.size() - 1;
    const double critical = chi_square_critical(dof, config.alpha);
    const double boundary_frequency = static_cast<double>(report.boundary_hits) / static_cast<double>(config.samples);
    report.statistics["grid"] = binning.grid();
    report.statistics["boxes"] = boxes;
    report.statistics["box_probability"] = binning.box_probability();
    report.statistics["chi_square"] = statistic;
    report.statistics["degrees_of_freedom"] = dof;
    report.statistics["critical_value"] = critical;
    report.statistics["boundary_frequency"] = boundary_frequency;
    report.statistics["boundary_limit"] = kBoundaryFrequencyLimit;
    report.pass = statistic < critical && !stray_remainder && boundary_frequency < kBoundaryFrequencyLimit;
    report.duration_ms = clock.elapsed_ms();
    return report;
}

// ---------------------------------------------------------------------------
// Lemma constant

struct LemmaConstant
{
    double lhs = 0.0; // sphere measure / simplex measure from closed forms
    double rhs = 0.0; // 2 pi^n / sqrt(n)
};

/// Surface measure of the unit sphere of C^n = R^{2n}: 2 pi^n / (n-1)!.
inline double sphere_measure(std::size_t n)
{
    return 2.0 * std::pow(std::numbers::pi, static_cast<double>(n)) / std::tgamma(static_cast<double>(n));
}

/// (n-1)-volume of the standard simplex in R^n: sqrt(n) / (n-1)!.
inline double simplex_measure(std::size_t n)
{
    return std::sqrt(static_cast<double>(n)) / std::tgamma(static_cast<double>(n));
}

inline LemmaConstant lemma_constant(std::size_t n)
{
    if (n < 1 || n > 20) {
        throw std::out_of_range("lemma_constant: n must be in 1..20");
    }
    const double nd = static_cast<double>(n);
    return {sphere_measure(n) / simplex_measure(n), 2.0 * std::pow(std::numbers::pi, nd) / std::sqrt(nd)};
}

/// Relative comparison of the two sides.
inline ExperimentReport run_lemma_constant(std::size_t n, double tolerance = kLemmaTolerance)
{
    const detail::Stopwatch clock;
    const LemmaConstant c = lemma_constant(n);
    const double relative_error = std::abs(c.lhs - c.rhs) / std::abs(c.rhs);

    ExperimentReport report;
    report.experiment = "lemma-constant";
    report.params["n"] = n;
    report.params["tolerance"] = tolerance;
    report.rows = {"constant"};
    report.observed = {c.lhs};
    report.expected = {c.rhs};
    report.statistics["lhs"] = c.lhs;
    report.statistics["rhs"] = c.rhs;
    report.statistics["sphere_measure"] = sphere_measure(n);
    report.statistics["simplex_measure"] = simplex_measure(n);
    report.statistics["simplex_measure_gram"] = simplex_volume(standard_simplex_vertices(n));
    report.statistics["relative_error"] = relative_error;
    report.pass = relative_error <= tolerance;
    report.duration_ms = clock.elapsed_ms();
    return report;
}

// ---------------------------------------------------------------------------
// PCI sweep

struct PciSweepConfig
{
    std::size_t n = 2;
    std::size_t pairs = 1000;
    std::size_t samples_per_segment = 50;
    std::uint64_t seed = kDefaultSeed;
    unsigned shards = 1;
    bool mutated = false; // swap the outcomes of cells 0 and 1
};

struct PciSweepTotals
{
    std::uint64_t pairs_checked = 0;
    std::uint64_t pairs_skipped = 0;
    std::uint64_t segments = 0;
    std::uint64_t samples = 0;
    std::uint64_t violations = 0;
    std::uint64_t boundary_hits = 0;
    std::vector<std::uint64_t> observed;
    std::vector<std::uint64_t> required;
};

/// check_pci over `pairs` uniform (q, a) pairs in a seeded random eigenbasis.
inline ExperimentReport run_pci_sweep(const PciSweepConfig& config)
{
    const detail::Stopwatch clock;
    if (config.pairs < 100) {
        throw std::invalid_argument("pci-sweep: at least 100 pairs required");
    }
    if (config.mutated && config.n < 2) {
        throw std::invalid_argument("pci-sweep: the mutated interaction needs n >= 2");
    }
    const std::size_t n = config.n;
    RandomStream basis_rng(config.seed, streams::kEigenbasis);
    const Eigenbasis basis = sample_eigenbasis(n, basis_rng);
    const InteractionFn interaction = config.mutated ? swapped_interaction(basis, 0, 1) : hilbert_interaction(basis);

    PciSweepTotals init;
    init.observed.assign(n, 0);
    init.required.assign(n, 0);
    const auto locals = run_sharded(config.pairs, config.seed, config.shards, init,
                                    [&](std::size_t count, RandomStream& rng, PciSweepTotals& local) {
                                        for (std::size_t i = 0; i < count; ++i) {
                                            const StateVector q = sample_uniform_sphere(n, rng);
                                            const StateVector a = sample_uniform_sphere(n, rng);
                                            const PciReport r =
                                                check_pci(q, a, basis, config.samples_per_segment, rng, interaction);
                                            if (r.skipped) {
                                                ++local.pairs_skipped;
                                                continue;
                                            }
                                            ++local.pairs_checked;
                                            local.segments += r.segments;
                                            local.samples += r.samples;
                                            local.violations += r.violation_count;
                                            local.boundary_hits += r.boundary_hits;
                                            local.required[r.outcome.value()] += r.samples;
                                            for (std::size_t k = 0; k < n; ++k) {
                                                local.observed[k] += r.observed_counts[k];
                                            }
                                        }
                                    });
    PciSweepTotals total = init;
    for (const auto& l : locals) {
        total.pairs_checked += l.pairs_checked;
        total.pairs_skipped += l.pairs_skipped;
        total.segments += l.segments;
        total.samples += l.samples;
        total.violations += l.violations;
        total.boundary_hits += l.boundary_hits;
        for (std::size_t k = 0; k < n; ++k) {
            total.observed[k] += l.observed[k];
            total.required[k] += l.required[k];
        }
    }

    ExperimentReport report;
    report.experiment = "pci-sweep";
    report.params["n"] = n;
    report.params["pairs"] = config.pairs;
    report.params["segment_samples"] = config.samples_per_segment;
    report.params["seed"] = config.seed;
    report.params["shards"] = config.shards;
    report.params["interaction"] = config.mutated ? "swapped-cells" : "consistent";
    report.rows = Eigenbasis::default_labels(n);
    const double denom = total.samples == 0 ? 1.0 : static_cast<double>(total.samples);
    for (std::size_t k = 0; k < n; ++k) {
        report.observed.push_back(static_cast<double>(total.observed[k]) / denom);
        report.expected.push_back(static_cast<double>(total.required[k]) / denom);
    }
    report.boundary_hits = total.boundary_hits;
    const double boundary_frequency = static_cast<double>(total.boundary_hits) / denom;
    report.statistics["pairs_checked"] = total.pairs_checked;
    report.statistics["pairs_skipped"] = total.pairs_skipped;
    report.statistics["segments"] = total.segments;
    report.statistics["segment_samples"] = total.samples;
    report.statistics["violations"] = total.violations;
    report.statistics["boundary_frequency"] = boundary_frequency;
    report.statistics["boundary_limit"] = kBoundaryFrequencyLimit;
    report.pass = total.violations == 0 && boundary_frequency < kBoundaryFrequencyLimit;
    report.duration_ms = clock.elapsed_ms();
    return report;
}

// ---------------------------------------------------------------------------
// Interactive probability: Monte Carlo against enumeration

struct IpmOracleConfig
{
    std::size_t models = 100;
    std::uint64_t samples = 100'000;
    std::uint64_t seed = kDefaultSeed;
    unsigned shards = 1;
    double sigmas = kDefaultSigmas;
};

/// Random non-empty subset of 0..count-1.
inline std::vector<std::size_t> random_subset(std::size_t count, RandomStream& rng)
{
    std::vector<std::size_t> subset;
    while (subset.empty()) {
        for (std::size_t i = 0; i < count; ++i) {
            if (rng.uniform() < 0.7) {
                subset.push_back(i);
            }
        }
    }
    return subset;
}

inline ExperimentReport run_ipm_oracle_check(const IpmOracleConfig& config)
{
    const detail::Stopwatch clock;
    if (config.models == 0 || config.samples == 0) {
        throw std::invalid_argument("ipm-oracle-check: models and samples must be positive");
    }
    ExperimentReport report;
    report.experiment = "ipm-oracle-check";
    report.params["models"] = config.models;
    report.params["samples"] = config.samples;
    report.params["seed"] = config.seed;
    report.params["shards"] = config.shards;

    RandomStream model_rng(config.seed, streams::kModels);
    std::uint64_t failures = 0;
    std::uint64_t comparisons = 0;
    double max_z = 0.0;
    for (std::size_t m = 0; m < config.models; ++m) {
        const std::size_t entities = 2 + model_rng.uniform_index(4);
        const std::size_t apparatus = 2 + model_rng.uniform_index(4);
        const std::size_t outcomes = 2 + model_rng.uniform_index(3);
        const FiniteModel model = random_finite_model(model_rng, entities, apparatus, outcomes);
        const auto psi_q = random_subset(entities, model_rng);
        const auto psi_a = random_subset(apparatus, model_rng);

        const auto tally = estimate_outcome_counts(model.contract(), model.preparation(psi_q, psi_a), config.samples,
                                                   derive_seed(config.seed, m), config.shards);
        report.boundary_hits += tally.boundary();
        for (std::size_t k = 0; k < outcomes; ++k) {
            const double exact = exact_interactive_probability(model, psi_q, psi_a, model.labels()[k]);
            const double estimate = tally.frequency(k);
            const double sigma = std::sqrt(exact * (1.0 - exact) / static_cast<double>(config.samples));
            const double deviation = std::abs(estimate - exact);
            if (sigma > 0.0) {
                max_z = std::max(max_z, deviation / sigma);
            }
            ++comparisons;
            if (deviation > config.sigmas * sigma + 1e-12) {
                ++failures;
            }
            report.rows.push_back("m" + std::to_string(m) + ":" + model.labels()[k]);
            report.observed.push_back(estimate);
            report.expected.push_back(exact);
        }
    }
    report.statistics["sigmas"] = config.sigmas;
    report.statistics["comparisons"] = comparisons;
    report.statistics["failures"] = failures;
    report.statistics["max_abs_z"] = max_z;
    report.pass = failures == 0 && report.boundary_hits == 0;
    report.duration_ms = clock.elapsed_ms();
    return report;
}

} // namespace hidmeas
