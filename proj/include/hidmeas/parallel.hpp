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

// Deterministic sharding of sample loops. Shard s draws from the sub-stream
// kShardStreamBase + s of the master seed and handles a fixed contiguous block,
// so results depend only on (seed, shard count), never on scheduling.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

#include "hidmeas/random.hpp"

namespace hidmeas {

inline unsigned default_shard_count()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Number of items handled by `shard` when `total` items are split `shards` ways.
constexpr std::size_t shard_size(std::size_t total, unsigned shards, unsigned shard) noexcept
{
    return total / shards + (shard < total % shards ? 1 : 0);
}

/// Runs body(count, rng, local) once per shard and returns the shard-local
/// states in shard order.
template <class Local, class Body>
std::vector<Local> run_sharded(std::size_t total, std::uint64_t seed, unsigned shards, const Local& init, Body body)
{
    if (shards == 0) {
        throw std::invalid_argument("run_sharded: shard count must be at least 1");
    }
    std::vector<Local> locals(shards, init);
    std::vector<std::exception_ptr> errors(shards);
    auto work = [&](unsigned shard) {
        try {
            RandomStream rng(seed, streams::kShardStreamBase + shard);
            body(shard_size(total, shards, shard), rng, locals[shard]);
        } catch (...) {
            errors[shard] = std::current_exception();
        }
    };
    if (shards == 1) {
        work(0);
    } else {
        std::vector<std::jthread> workers;
        workers.reserve(shards);
        for (unsigned shard = 0; shard < shards; ++shard) {
            workers.emplace_back(work, shard);
        }
    }
    for (const auto& error : errors) {
        if (error) {
            std::rethrow_exception(error);
        }
    }
    return locals;
}

/// Histogram of draw(rng) over `total` samples; draw returns a bin in [0, bins).
template <class Draw>
std::vector<std::uint64_t> sharded_tally(std::size_t total, std::size_t bins, std::uint64_t seed, unsigned shards,
                                         Draw draw)
{
    const auto locals = run_sharded(total, seed, shards, std::vector<std::uint64_t>(bins, 0),
                                    [&](std::size_t count, RandomStream& rng, std::vector<std::uint64_t>& local) {
                                        for (std::size_t i = 0; i < count; ++i) {
                                            ++local.at(draw(rng));
                                        }
                                    });
    std::vector<std::uint64_t> counts(bins, 0);
    for (const auto& local : locals) {
        for (std::size_t b = 0; b < bins; ++b) {
            counts[b] += local[b];
        }
    }
    return counts;
}

} // namespace hidmeas
