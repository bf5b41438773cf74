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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scruf/catalog.hpp"
#include "scruf/choice.hpp"
#include "scruf/fairness.hpp"
#include "scruf/profiles.hpp"
#include "scruf/recommender.hpp"
#include "scruf/rerank.hpp"

namespace scruf {

struct SimulationConfig {
    std::uint64_t seed = 0;
    double batch_fraction = 0.005;
    std::size_t window_batches = 20;
    std::size_t display_length = 10;
    std::size_t candidate_pool_size = 100;
    ChoiceFunction choice = ChoiceFunction::fixed;
    double epsilon = 0.05;
    bool exclude_train = true;
    /// Times each user arrives during the replay. 1 = single shuffled pass.
    std::size_t arrivals_per_user = 1;
    /// Workers for per-user evaluation inside a batch. Results do not depend on it.
    std::size_t threads = 1;

    /// Throws ConfigError on any out-of-range field.
    void validate() const;
};

/// One row of the per-batch trace. Window metrics are measured after the
/// batch has been delivered and appended to the history.
struct BatchTrace {
    std::size_t batch_index = 0;
    std::size_t users = 0;
    /// The batch ran the fixed lottery because the history was empty.
    bool fixed_fallback = false;
    std::vector<double> metrics;
    RegretRecord regret;
    std::vector<std::size_t> chosen;
    std::size_t skipped = 0;
    /// Mean nDCG over batch users that have test ratings (0 if none).
    double ndcg = 0.0;
    std::size_t ndcg_users = 0;
    /// Mean protected exposure of this batch's delivered lists.
    std::vector<double> exposure;
};

struct SimulationResult {
    ChoiceFunction choice = ChoiceFunction::none;
    std::vector<std::string> features;
    std::vector<BatchTrace> trace;
    /// Mean nDCG over every delivered list whose owner has test ratings.
    double ndcg = 0.0;
    /// Mean protected exposure per feature over every delivered list.
    std::vector<double> exposure;
    /// Mean of `exposure` across features.
    double fairness = 0.0;
    RegretStats regret;
    std::vector<std::size_t> chosen;
    std::size_t skipped = 0;
};

/// Batch-by-batch replay of user arrivals. Holds the history window between
/// batches; everything else is read-only.
class Simulation {
public:
    Simulation(SimulationConfig config, std::span<const UserProfile> profiles,
               const ItemCatalog& catalog, const SensitiveSpec& spec, const ScoreModel& model);

    /// Shuffled arrivals grouped into ceil(1 / batch_fraction) batches (fewer
    /// when there are fewer arrivals). Earlier batches take the remainder, so
    /// only trailing batches can be one smaller.
    std::vector<std::vector<UserIndex>> make_batches() const;

    /// Chooses, re-ranks and delivers one batch, then appends it to the window.
    BatchTrace step_batch(std::span<const UserIndex> batch_users);

    SimulationResult run();

    const HistoryWindow& window() const { return window_; }
    const ProtectionMask& mask() const { return mask_; }
    std::size_t batches_done() const { return batch_index_; }

private:
    struct Outcome {
        std::optional<std::size_t> chosen;
        RecommendationList slate;
        double ndcg = 0.0;
        bool has_test = false;
    };

    Outcome serve(UserIndex user, const Lottery& lottery, std::size_t position) const;

    SimulationConfig config_;
    std::span<const UserProfile> profiles_;
    const ItemCatalog* catalog_;
    const SensitiveSpec* spec_;
    ProtectionMask mask_;
    Recommender recommender_;
    std::vector<std::vector<std::size_t>> preferences_;
    std::vector<Reranker> rerankers_;
    HistoryWindow window_;
    std::size_t batch_index_ = 0;
};

SimulationResult run(const SimulationConfig& config, std::span<const UserProfile> profiles,
                     const ItemCatalog& catalog, const SensitiveSpec& spec,
                     const ScoreModel& model);

/// Summary statistics recomputed from a trace (used by the evaluate command
/// and by run()).
void summarize(SimulationResult& result);

}  // namespace scruf
