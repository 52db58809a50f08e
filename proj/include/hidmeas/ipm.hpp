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

// The abstract interactive probability model: probability spaces realized as
// samplers, preparations, the product measure and the interactive
// probability, with an exact enumeration oracle for finite models.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hidmeas/hilbert.hpp"
#include "hidmeas/interaction.hpp"
#include "hidmeas/outcome.hpp"
#include "hidmeas/parallel.hpp"
#include "hidmeas/random.hpp"
#include "hidmeas/stats.hpp"

namespace hidmeas {

inline constexpr double kWeightTolerance = 1e-12;

/// A probability space accessed only through i.i.d. draws.
template <class Space>
concept SampleableSpace = requires(const Space& space, RandomStream& rng) {
    { space.label() } -> std::convertible_to<std::string>;
    space.draw(rng);
};

/**
 * Ensemble of states: a singleton, a finite mixture, or the uniform measure
 * on S_n (StateVector only). Drawing from the ensemble realizes the
 * conditioned measure directly.
 */
template <class State>
class Ensemble
{
public:
    struct Singleton
    {
        State state;
    };
    struct Mixture
    {
        std::vector<State> states;
        std::vector<double> cumulative;
    };
    struct UniformSphere
    {
        std::size_t n;
    };

    static Ensemble singleton(State state) { return Ensemble(Singleton{std::move(state)}); }

    static Ensemble mixture(std::vector<State> states, std::span<const double> weights)
    {
        if (states.empty() || states.size() != weights.size()) {
            throw std::invalid_argument("Ensemble::mixture: need one weight per state and at least one state");
        }
        std::vector<double> cumulative(weights.size());
        double sum = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (!(weights[i] >= 0.0)) {
                throw std::invalid_argument("Ensemble::mixture: weights must be non-negative");
            }
            sum += weights[i];
            cumulative[i] = sum;
        }
        if (!(std::abs(sum - 1.0) <= kWeightTolerance)) {
            throw std::invalid_argument("Ensemble::mixture: weights sum to " + std::to_string(sum));
        }
        return Ensemble(Mixture{std::move(states), std::move(cumulative)});
    }

    static Ensemble uniform_on_sphere(std::size_t n)
        requires std::same_as<State, StateVector>
    {
        if (n == 0) {
            throw std::invalid_argument("Ensemble::uniform_on_sphere: n must be at least 1");
        }
        return Ensemble(UniformSphere{n});
    }

    State draw(RandomStream& rng) const
    {
        return std::visit(
            [&rng](const auto& e) -> State {
                using E = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<E, Singleton>) {
                    return e.state;
                } else if constexpr (std::is_same_v<E, Mixture>) {
                    const double u = rng.uniform();
                    auto it = std::upper_bound(e.cumulative.begin(), e.cumulative.end(), u);
                    if (it == e.cumulative.end()) {
                        // u beyond the rounded total: last state with positive weight
                        it = std::lower_bound(e.cumulative.begin(), e.cumulative.end(), e.cumulative.back());
                    }
                    return e.states[static_cast<std::size_t>(it - e.cumulative.begin())];
                } else {
                    if constexpr (std::is_same_v<State, StateVector>) {
                        return sample_uniform_sphere(e.n, rng);
                    } else {
                        throw std::logic_error("Ensemble: uniform-on-sphere requires StateVector");
                    }
                }
            },
            variant_);
    }

    std::string label() const
    {
        return std::visit(
            [](const auto& e) -> std::string {
                using E = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<E, Singleton>) {
                    return "singleton";
                } else if constexpr (std::is_same_v<E, Mixture>) {
                    return "mixture(" + std::to_string(e.states.size()) + ")";
                } else {
                    return "uniform-on-sphere(" + std::to_string(e.n) + ")";
                }
            },
            variant_);
    }

private:
    using Variant = std::variant<Singleton, Mixture, UniformSphere>;
    explicit Ensemble(Variant v) : variant_(std::move(v)) {}

    Variant variant_;
};

static_assert(SampleableSpace<Ensemble<StateVector>>);
static_assert(SampleableSpace<Ensemble<std::size_t>>);

/// pi = (psi_q, psi_a). Entity and apparatus are drawn independently, which
/// realizes the product measure rho.
template <class EntityState, class ApparatusState>
struct Preparation
{
    Ensemble<EntityState> entity;
    Ensemble<ApparatusState> apparatus;
};

/// The interaction i: Sigma x M -> X together with the labels of X.
template <class EntityState, class ApparatusState>
struct InteractionContract
{
    std::function<Outcome(const EntityState&, const ApparatusState&)> evaluate;
    std::vector<std::string> outcome_space;

    std::size_t index_of(const std::string& label) const
    {
        const auto it = std::find(outcome_space.begin(), outcome_space.end(), label);
        if (it == outcome_space.end()) {
            throw std::invalid_argument("unknown outcome label '" + label + "'");
        }
        return static_cast<std::size_t>(it - outcome_space.begin());
    }
};

/// Outcome counts; the final entry counts boundary results.
struct OutcomeTally
{
    std::vector<std::uint64_t> counts;
    std::uint64_t trials = 0;

    std::uint64_t boundary() const { return counts.back(); }
    double frequency(std::size_t k) const
    {
        return static_cast<double>(counts.at(k)) / static_cast<double>(trials);
    }
};

struct InteractiveEstimate
{
    double estimate = 0.0;
    /// Wilson half-width at z = 1.
    double standard_error = 0.0;
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
};

namespace detail {

template <class Q, class A>
std::size_t draw_outcome_bin(const InteractionContract<Q, A>& contract, const Preparation<Q, A>& prep,
                             RandomStream& rng)
{
    const Q q = prep.entity.draw(rng);
    const A a = prep.apparatus.draw(rng);
    const Outcome o = contract.evaluate(q, a);
    return o.is_boundary() ? contract.outcome_space.size() : o.value();
}

inline InteractiveEstimate make_estimate(std::uint64_t successes, std::uint64_t trials)
{
    return {static_cast<double>(successes) / static_cast<double>(trials),
            wilson_interval(successes, trials, 1.0).half_width(), successes, trials};
}

} // namespace detail

/// Tallies every outcome over `trials` draws from the preparation, sharded.
template <class Q, class A>
OutcomeTally estimate_outcome_counts(const InteractionContract<Q, A>& contract, const Preparation<Q, A>& prep,
                                     std::uint64_t trials, std::uint64_t seed, unsigned shards)
{
    if (trials == 0) {
        throw std::invalid_argument("estimate_outcome_counts: at least one sample required");
    }
    auto counts = sharded_tally(trials, contract.outcome_space.size() + 1, seed, shards,
                                [&](RandomStream& rng) { return detail::draw_outcome_bin(contract, prep, rng); });
    return {std::move(counts), trials};
}

/// Sequential tally on a caller-owned stream.
template <class Q, class A>
OutcomeTally estimate_outcome_counts(const InteractionContract<Q, A>& contract, const Preparation<Q, A>& prep,
                                     std::uint64_t trials, RandomStream& rng)
{
    if (trials == 0) {
        throw std::invalid_argument("estimate_outcome_counts: at least one sample required");
    }
    OutcomeTally tally{std::vector<std::uint64_t>(contract.outcome_space.size() + 1, 0), trials};
    for (std::uint64_t i = 0; i < trials; ++i) {
        ++tally.counts[detail::draw_outcome_bin(contract, prep, rng)];
    }
    return tally;
}

/// Monte Carlo p(x | pi): frequency of x over independent (q, a) draws.
template <class Q, class A>
InteractiveEstimate estimate_interactive_probability(const InteractionContract<Q, A>& contract,
                                                     const Preparation<Q, A>& prep, const std::string& outcome,
                                                     std::uint64_t trials, RandomStream& rng)
{
    const std::size_t k = contract.index_of(outcome);
    const OutcomeTally tally = estimate_outcome_counts(contract, prep, trials, rng);
    return detail::make_estimate(tally.counts[k], trials);
}

template <class Q, class A>
InteractiveEstimate estimate_interactive_probability(const InteractionContract<Q, A>& contract,
                                                     const Preparation<Q, A>& prep, const std::string& outcome,
                                                     std::uint64_t trials, std::uint64_t seed, unsigned shards)
{
    const std::size_t k = contract.index_of(outcome);
    const OutcomeTally tally = estimate_outcome_counts(contract, prep, trials, seed, shards);
    return detail::make_estimate(tally.counts[k], trials);
}

/// Hilbert-space model: entity and apparatus both on S_n, interaction of the
/// consistent-interaction partition.
inline InteractionContract<StateVector, StateVector> hilbert_contract(const Eigenbasis& basis)
{
    return {hilbert_interaction(basis), std::vector<std::string>(basis.labels().begin(), basis.labels().end())};
}

/// Finite model: weighted entity and apparatus states with a total outcome table.
class FiniteModel
{
public:
    FiniteModel(std::vector<double> entity_weights, std::vector<double> apparatus_weights,
                std::vector<std::vector<std::size_t>> table, std::vector<std::string> outcome_labels)
        : entity_weights_(std::move(entity_weights)), apparatus_weights_(std::move(apparatus_weights)),
          table_(std::move(table)), labels_(std::move(outcome_labels))
    {
        check_weights(entity_weights_, "entity");
        check_weights(apparatus_weights_, "apparatus");
        if (labels_.empty()) {
            throw std::invalid_argument("FiniteModel: empty outcome space");
        }
        if (table_.size() != entity_weights_.size()) {
            throw std::invalid_argument("FiniteModel: one table row per entity state required");
        }
        for (const auto& row : table_) {
            if (row.size() != apparatus_weights_.size()) {
                throw std::invalid_argument("FiniteModel: one table column per apparatus state required");
            }
            for (std::size_t x : row) {
                if (x >= labels_.size()) {
                    throw std::invalid_argument("FiniteModel: table entry outside the outcome space");
                }
            }
        }
    }

    std::size_t entity_count() const noexcept { return entity_weights_.size(); }
    std::size_t apparatus_count() const noexcept { return apparatus_weights_.size(); }
    std::span<const double> entity_weights() const noexcept { return entity_weights_; }
    std::span<const double> apparatus_weights() const noexcept { return apparatus_weights_; }
    std::size_t outcome(std::size_t q, std::size_t a) const { return table_.at(q).at(a); }
    std::span<const std::string> labels() const noexcept { return labels_; }

    InteractionContract<std::size_t, std::size_t> contract() const
    {
        return {[table = table_](const std::size_t& q, const std::size_t& a) { return Outcome::index(table[q][a]); },
                labels_};
    }

    /// The preparation (psi_q, psi_a) for subsets of the finite states, with
    /// the conditioned (renormalized) weights.
    Preparation<std::size_t, std::size_t> preparation(std::span<const std::size_t> entity_subset,
                                                      std::span<const std::size_t> apparatus_subset) const
    {
        return {restricted(entity_weights_, entity_subset, "entity"),
                restricted(apparatus_weights_, apparatus_subset, "apparatus")};
    }

    /// Whole-space preparation.
    Preparation<std::size_t, std::size_t> preparation() const
    {
        const auto all_q = iota(entity_count());
        const auto all_a = iota(apparatus_count());
        return preparation(all_q, all_a);
    }

    static std::vector<std::size_t> iota(std::size_t count)
    {
        std::vector<std::size_t> indices(count);
        std::iota(indices.begin(), indices.end(), std::size_t{0});
        return indices;
    }

private:
    static void check_weights(const std::vector<double>& weights, const char* what)
    {
        if (weights.empty()) {
            throw std::invalid_argument(std::string("FiniteModel: no ") + what + " states");
        }
        double sum = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0)) {
                throw std::invalid_argument(std::string("FiniteModel: negative ") + what + " weight");
            }
            sum += w;
        }
        if (!(std::abs(sum - 1.0) <= kWeightTolerance)) {
            throw std::invalid_argument(std::string("FiniteModel: ") + what + " weights do not sum to 1");
        }
    }

    static Ensemble<std::size_t> restricted(const std::vector<double>& weights, std::span<const std::size_t> subset,
                                            const char* what)
    {
        double mass = 0.0;
        for (std::size_t i : subset) {
            mass += weights.at(i);
        }
        if (!(mass > 0.0)) {
            throw std::invalid_argument(std::string("FiniteModel: ") + what +
                                        " ensemble has zero measure; p(x | pi) is undefined");
        }
        std::vector<std::size_t> states(subset.begin(), subset.end());
        std::vector<double> conditioned;
        conditioned.reserve(subset.size());
        for (std::size_t i : subset) {
            conditioned.push_back(weights[i] / mass);
        }
        return Ensemble<std::size_t>::mixture(std::move(states), conditioned);
    }

    std::vector<double> entity_weights_;
    std::vector<double> apparatus_weights_;
    std::vector<std::vector<std::size_t>> table_;
    std::vector<std::string> labels_;
};

/// Enumeration oracle: sum of rho over the pairs in psi_q x psi_a with i = x,
/// divided by rho(psi_q, psi_a).
inline double exact_interactive_probability(const FiniteModel& model, std::span<const std::size_t> entity_subset,
                                            std::span<const std::size_t> apparatus_subset, const std::string& outcome)
{
    const auto labels = model.labels();
    const auto it = std::find(labels.begin(), labels.end(), outcome);
    if (it == labels.end()) {
        throw std::invalid_argument("unknown outcome label '" + outcome + "'");
    }
    const auto x = static_cast<std::size_t>(it - labels.begin());

    double entity_mass = 0.0;
    for (std::size_t q : entity_subset) {
        entity_mass += model.entity_weights()[q];
    }
    double apparatus_mass = 0.0;
    for (std::size_t a : apparatus_subset) {
        apparatus_mass += model.apparatus_weights()[a];
    }
    const double rho = entity_mass * apparatus_mass;
    if (!(rho > 0.0)) {
        throw std::invalid_argument("exact_interactive_probability: preparation has zero measure");
    }
    double mass = 0.0;
    for (std::size_t q : entity_subset) {
        for (std::size_t a : apparatus_subset) {
            if (model.outcome(q, a) == x) {
                mass += model.entity_weights()[q] * model.apparatus_weights()[a];
            }
        }
    }
    return mass / rho;
}

/// Random model with Dirichlet(1) weights and a uniformly random outcome table.
inline FiniteModel random_finite_model(RandomStream& rng, std::size_t entity_count, std::size_t apparatus_count,
                                       std::size_t outcome_count)
{
    auto weights = [&rng](std::size_t count) {
        std::vector<double> w(count);
        double sum = 0.0;
        for (double& v : w) {
            v = rng.exponential();
            sum += v;
        }
        for (double& v : w) {
            v /= sum;
        }
        return w;
    };
    std::vector<double> entity = weights(entity_count);
    std::vector<double> apparatus = weights(apparatus_count);
    std::vector<std::vector<std::size_t>> table(entity_count, std::vector<std::size_t>(apparatus_count));
    for (auto& row : table) {
        for (std::size_t& x : row) {
            x = static_cast<std::size_t>(rng.uniform_index(outcome_count));
        }
    }
    return FiniteModel(std::move(entity), std::move(apparatus), std::move(table),
                       Eigenbasis::default_labels(outcome_count));
}

} // namespace hidmeas
