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
#include <deque>
#include <span>
#include <vector>

#include "scruf/catalog.hpp"
#include "scruf/list.hpp"
#include "scruf/profiles.hpp"

namespace scruf {

struct DeliveredList {
    UserIndex user = 0;
    RecommendationList list;
};

using DeliveredBatch = std::vector<DeliveredList>;

/// The most recent `capacity` batches of delivered lists, oldest first.
class HistoryWindow {
public:
    explicit HistoryWindow(std::size_t capacity);

    /// Appends a batch and evicts the oldest ones beyond capacity.
    void push(DeliveredBatch batch);

    std::size_t capacity() const { return capacity_; }
    std::size_t batches() const { return batches_.size(); }
    std::size_t lists() const;
    bool empty() const { return lists() == 0; }
    const std::deque<DeliveredBatch>& contents() const { return batches_; }

private:
    std::size_t capacity_;
    std::deque<DeliveredBatch> batches_;
};

/// Fraction of the list's items that are protected for `feature`.
/// Throws DataError on an empty list.
double exposure(const RecommendationList& list, const ProtectionMask& mask, std::size_t feature);

/// Absolute-unfairness form: 1 - |1 - 2 * mean_exposure|.
double metric_from_exposure(double mean_exposure);

/// Mean exposure over every list in the window, mapped through
/// metric_from_exposure. The user side of each delivery is carried but the
/// exposure metric does not depend on it. Throws DataError on an empty window.
double metric_m(const HistoryWindow& window, const ProtectionMask& mask, std::size_t feature);

/// metric_m for every sensitive feature.
std::vector<double> window_metrics(const HistoryWindow& window, const ProtectionMask& mask);

struct FairnessState {
    std::vector<double> metrics;
    double epsilon = 0.05;
    /// 1 - (M_j - epsilon), before eligibility masking and normalisation.
    std::vector<double> raw;
    std::vector<bool> eligible;
    /// Normalised over eligible features; zero elsewhere.
    std::vector<double> uf;
    /// No eligible feature: deliver base lists.
    bool skip = false;

    std::size_t eligible_count() const;
};

/// A feature is eligible when its unfairness 1 - M_j is at least epsilon
/// (equivalently M_j <= 1 - epsilon).
FairnessState unfairness_vector(std::span<const double> metrics, double epsilon);

/// Graded nDCG@k with relevance = test rating, 1/log2(rank+1) discount and
/// ideal DCG over the user's test items. Zero when no test item is positive.
double ndcg(const RecommendationList& slate, std::span<const ProfileRating> test,
            std::size_t display_length);

struct RegretRecord {
    std::size_t batch_index = 0;
    std::vector<double> omega;
    double average = 0.0;
};

RegretRecord make_regret(std::size_t batch_index, std::span<const double> metrics);

struct RegretStats {
    double mean = 0.0;
    double variance = 0.0;
};

/// Mean and population variance of the per-batch average regret.
RegretStats regret_stats(std::span<const RegretRecord> series);
RegretStats mean_and_variance(std::span<const double> values);

}  // namespace scruf
