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
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace hidmeas {

/// SplitMix64 finalizer; used to decorrelate derived seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of the sub-stream `stream_id` derived from a master seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_id) noexcept
{
    return splitmix64(seed ^ splitmix64(stream_id ^ 0xD1B54A32D192ED03ULL));
}

/// Well-known sub-stream ids. Shard streams occupy kShardStreamBase + shard.
namespace streams {
inline constexpr std::uint64_t kEntityState = 1;
inline constexpr std::uint64_t kEigenbasis = 2;
inline constexpr std::uint64_t kStatisticalState = 3;
inline constexpr std::uint64_t kModels = 4;
inline constexpr std::uint64_t kShardStreamBase = 1ULL << 32;
} // namespace streams

/**
 * Explicit random stream.
 *
 * Wraps std::mt19937_64 (whose output sequence is fixed by the standard) and
 * derives uniform, Gaussian and exponential variates by hand, so a given seed
 * produces the same variates with every standard library. The distribution
 * objects of <random> do not give that guarantee.
 */
class RandomStream
{
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    RandomStream(std::uint64_t seed, std::uint64_t stream_id) : engine_(derive_seed(seed, stream_id)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer on [0, bound).
    std::uint64_t uniform_index(std::uint64_t bound)
    {
        // Lemire's nearly-divisionless rejection.
        auto product = static_cast<unsigned __int128>(engine_()) * bound;
        auto low = static_cast<std::uint64_t>(product);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                product = static_cast<unsigned __int128>(engine_()) * bound;
                low = static_cast<std::uint64_t>(product);
            }
        }
        return static_cast<std::uint64_t>(product >> 64);
    }

    /// Standard normal variate (Marsaglia polar method).
    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        double v = 0.0;
        double s = 0.0;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double scale = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * scale;
        has_spare_ = true;
        return u * scale;
    }

    /// Unit-rate exponential variate.
    double exponential() { return -std::log1p(-uniform()); }

    /// Uniform phase on [0, 2*pi).
    double phase() { return 2.0 * std::numbers::pi * uniform(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace hidmeas
