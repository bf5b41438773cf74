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

#include "scruf/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <unordered_map>

namespace scruf {

HistoryWindow::HistoryWindow(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) {
        throw ConfigError("history window must hold at least one batch");
    }
}

void HistoryWindow::push(DeliveredBatch batch) {
    batches_.push_back(std::move(batch));
    while (batches_.size() > capacity_) {
        batches_.pop_front();
    }
}

std::size_t HistoryWindow::lists() const {
    std::size_t n = 0;
    for (const auto& b : batches_) {
        n += b.size();
    }
    return n;
}

double exposure(const RecommendationList& list, const ProtectionMask& mask, std::size_t feature) {
    if (list.empty()) {
        throw DataError("exposure of an empty list is undefined");
    }
    std::size_t hits = 0;
    for (const auto& e : list.entries) {
        hits += mask(feature, e.item) ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(list.size());
}

double metric_from_exposure(double mean_exposure) {
    return 1.0 - std::abs(1.0 - 2.0 * mean_exposure);
}

double metric_m(const HistoryWindow& window, const ProtectionMask& mask, std::size_t feature) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& batch : window.contents()) {
        for (const auto& d : batch) {
            sum += exposure(d.list, mask, feature);
            ++n;
        }
    }
    if (n == 0) {
        throw DataError("fairness metric over an empty window is undefined");
    }
    return metric_from_exposure(sum / static_cast<double>(n));
}

std::vector<double> window_metrics(const HistoryWindow& window, const ProtectionMask& mask) {
    std::vector<double> m(mask.features());
    for (std::size_t j = 0; j < m.size(); ++j) {
        m[j] = metric_m(window, mask, j);
    }
    return m;
}

std::size_t FairnessState::eligible_count() const {
    return static_cast<std::size_t>(std::count(eligible.begin(), eligible.end(), true));
}

FairnessState unfairness_vector(std::span<const double> metrics, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw ConfigError("epsilon must lie in (0, 1)");
    }
    FairnessState state;
    state.metrics.assign(metrics.begin(), metrics.end());
    state.epsilon = epsilon;
    state.raw.resize(metrics.size());
    state.eligible.resize(metrics.size());
    state.uf.assign(metrics.size(), 0.0);
    double total = 0.0;
    for (std::size_t j = 0; j < metrics.size(); ++j) {
        double m = metrics[j];
        if (!(m >= 0.0 && m <= 1.0)) {
            throw DataError("fairness metric outside [0, 1]");
        }
        state.raw[j] = 1.0 - (m - epsilon);
        state.eligible[j] = m <= 1.0 - epsilon;
        if (state.eligible[j]) {
            total += state.raw[j];
        }
    }
    if (total <= 0.0) {
        state.skip = true;
        return state;
    }
    // Equal unfairness must give exactly the uniform distribution; raw / total
    // can miss 1/n in the last bit because the running sum rounds.
    std::optional<double> common;
    bool all_equal = true;
    for (std::size_t j = 0; j < metrics.size(); ++j) {
        if (state.eligible[j]) {
            if (common && *common != state.raw[j]) {
                all_equal = false;
            }
            common = state.raw[j];
        }
    }
    double uniform = 1.0 / static_cast<double>(state.eligible_count());
    for (std::size_t j = 0; j < metrics.size(); ++j) {
        if (state.eligible[j]) {
            state.uf[j] = all_equal ? uniform : state.raw[j] / total;
        }
    }
    return state;
}

double ndcg(const RecommendationList& slate, std::span<const ProfileRating> test,
            std::size_t display_length) {
    if (display_length == 0) {
        throw ConfigError("display length must be at least 1");
    }
    std::unordered_map<ItemIndex, double> relevance;
    std::vector<double> gains;
    for (const auto& r : test) {
        relevance[r.item] = r.value;
        if (r.value > 0.0) {
            gains.push_back(r.value);
        }
    }
    if (gains.empty()) {
        return 0.0;
    }
    std::sort(gains.begin(), gains.end(), std::greater<>());
    double ideal = 0.0;
    for (std::size_t i = 0; i < std::min(display_length, gains.size()); ++i) {
        ideal += gains[i] / std::log2(static_cast<double>(i) + 2.0);
    }
    double dcg = 0.0;
    for (std::size_t i = 0; i < std::min(display_length, slate.size()); ++i) {
        auto it = relevance.find(slate.entries[i].item);
        if (it != relevance.end() && it->second > 0.0) {
            dcg += it->second / std::log2(static_cast<double>(i) + 2.0);
        }
    }
    return dcg / ideal;
}

RegretRecord make_regret(std::size_t batch_index, std::span<const double> metrics) {
    RegretRecord r;
    r.batch_index = batch_index;
    r.omega.reserve(metrics.size());
    double sum = 0.0;
    for (double m : metrics) {
        r.omega.push_back(1.0 - m);
        sum += 1.0 - m;
    }
    r.average = metrics.empty() ? 0.0 : sum / static_cast<double>(metrics.size());
    return r;
}

RegretStats mean_and_variance(std::span<const double> values) {
    RegretStats s;
    if (values.empty()) {
        return s;
    }
    const auto n = static_cast<double>(values.size());
    for (double v : values) {
        s.mean += v;
    }
    s.mean /= n;
    for (double v : values) {
        s.variance += (v - s.mean) * (v - s.mean);
    }
    s.variance /= n;
    return s;
}

RegretStats regret_stats(std::span<const RegretRecord> series) {
    if (series.empty()) {
        throw DataError("regret statistics need a non-empty series");
    }
    std::vector<double> avg;
    avg.reserve(series.size());
    for (const auto& r : series) {
        avg.push_back(r.average);
    }
    return mean_and_variance(avg);
}

}  // namespace scruf
