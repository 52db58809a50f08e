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

#include <cstddef>
#include <optional>
#include <stdexcept>

namespace hidmeas {

/// Result of an interaction: outcome index k (0-based, label x_{k+1}) or the
/// boundary set M_0, which lies outside the outcome space.
class Outcome
{
public:
    static Outcome index(std::size_t k) { return Outcome(k); }
    static Outcome boundary() { return Outcome(); }

    bool is_boundary() const noexcept { return !index_.has_value(); }
    std::size_t value() const
    {
        if (!index_) {
            throw std::logic_error("Outcome: boundary has no index");
        }
        return *index_;
    }

    friend bool operator==(const Outcome&, const Outcome&) = default;

private:
    Outcome() = default;
    explicit Outcome(std::size_t k) : index_(k) {}

    std::optional<std::size_t> index_;
};

} // namespace hidmeas
