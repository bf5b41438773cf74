// Copyright 2026-present the scruf-sim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scruf/fairness.hpp"
#include "scruf/rng.hpp"

namespace scruf {

enum class ChoiceFunction { none, fixed, least_misery, dynamic, allocation };

std::string_view to_string(ChoiceFunction choice);

/// Accepts fixed | least_misery | dynamic | allocation | none; throws
/// ConfigError listing the valid names otherwise.
ChoiceFunction parse_choice(std::string_view name);

/// Distribution over re-rankers (indexed like SensitiveSpec). All zeros is the
/// skip sentinel: the base list is delivered unmodified.
struct Lottery {
    std::vector<double> probabilities;

    bool skip() const;
    static Lottery skip_all(std::size_t features);
    static Lottery degenerate(std::size_t features, std::size_t chosen);

    friend bool operator==(const Lottery&, const Lottery&) = default;
};

/// Uniform over eligible features.
Lottery fixed_lottery(const std::vector<bool>& eligible);

/// argmax of uf, lowest index on ties; nullopt when nothing is eligible.
std::optional<std::size_t> least_misery(const FairnessState& state);

/// The normalised unfairness vector itself.
Lottery dynamic_lottery(const FairnessState& state);

/// Agents x objects fractional assignment, row-major.
struct AllocationMatrix {
    std::size_t agents = 0;
    std::size_t objects = 0;
    std::vector<double> cells;

    double operator()(std::size_t agent, std::size_t object) const {
        return cells[agent * objects + object];
    }
    double row_sum(std::size_t agent) const;
    double column_sum(std::size_t object) const;
};

/// Simultaneous eating with per-object capacities, simulated exactly from one
/// exhaustion event to the next. Every agent eats its best non-exhausted object
/// at unit speed until it has eaten min(1, sum(capacities) / agents) or every
/// object is gone. Preferences are strict orders over object indices, best first.
AllocationMatrix probabilistic_serial(std::span<const std::vector<std::size_t>> preferences,
                                      std::span<const double> capacities);

/// Per-user lotteries: capacities are batch_size * uf over eligible features,
/// preferences are each user's feature order restricted to eligible features,
/// and each PS row is normalised into a distribution.
std::vector<Lottery> allocation_lottery(const FairnessState& state,
                                        std::span<const std::vector<std::size_t>> preferences,
                                        std::size_t batch_size);

/// Categorical draw; nullopt for the skip sentinel.
std::optional<std::size_t> sample(const Lottery& lottery, RandomStream& rng);

}  // namespace scruf
