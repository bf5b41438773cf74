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

#include "scruf/rerank.hpp"

#include <algorithm>
#include <numeric>

namespace scruf {

double rho(const Reranker& reranker, double normalized_score, bool is_protected) {
    return reranker.lambda * normalized_score + (1.0 - reranker.lambda) * (is_protected ? 1.0 : 0.0);
}

RecommendationList rerank(const Reranker& reranker, const RecommendationList& pool,
                          const ProtectionMask& mask, std::size_t display_length) {
    const auto n = pool.size();
    if (n == 0) {
        return RecommendationList{pool.owner, {}};
    }
    auto [lo_it, hi_it] = std::minmax_element(
        pool.entries.begin(), pool.entries.end(),
        [](const ScoredItem& a, const ScoredItem& b) { return a.score < b.score; });
    const double lo = lo_it->score;
    const double span = hi_it->score - lo;

    std::vector<double> value(n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& e = pool.entries[r];
        double normalized = span > 0.0 ? (e.score - lo) / span : 0.5;
        value[r] = rho(reranker, normalized, mask(reranker.feature, e.item));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return value[a] > value[b]; });

    RecommendationList out{pool.owner, {}};
    auto k = std::min(display_length, n);
    out.entries.reserve(k);
    for (std::size_t r = 0; r < k; ++r) {
        out.entries.push_back({pool.entries[order[r]].item, value[order[r]]});
    }
    return out;
}

RecommendationList truncate(const RecommendationList& pool, std::size_t display_length) {
    RecommendationList out{pool.owner, {}};
    auto k = std::min(display_length, pool.size());
    out.entries.assign(pool.entries.begin(), pool.entries.begin() + static_cast<std::ptrdiff_t>(k));
    return out;
}

}  // namespace scruf
