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

#include "scruf/catalog.hpp"
#include "scruf/list.hpp"

namespace scruf {

/// Re-ranker for one sensitive feature (index into SensitiveSpec).
struct Reranker {
    std::size_t feature = 0;
    double lambda = 0.5;
};

/// lambda * score + (1 - lambda) * [protected].
double rho(const Reranker& reranker, double normalized_score, bool is_protected);

/// Min-max normalises pool scores to [0, 1] (0.5 for all when the pool is
/// flat), rescores with rho, sorts descending with ties kept in pool order and
/// truncates to display_length. Output scores are the rho values.
RecommendationList rerank(const Reranker& reranker, const RecommendationList& pool,
                          const ProtectionMask& mask, std::size_t display_length);

/// The first display_length entries of the pool, unchanged.
RecommendationList truncate(const RecommendationList& pool, std::size_t display_length);

}  // namespace scruf
