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

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scruf/catalog.hpp"
#include "scruf/config.hpp"
#include "scruf/profiles.hpp"
#include "scruf/recommender.hpp"
#include "scruf/simulator.hpp"

namespace scruf {

/// Everything a simulation needs, loaded and fitted once and shared across
/// choice functions.
struct PreparedRun {
    RunConfig config;
    ItemCatalog catalog;
    std::vector<UserProfile> profiles;
    ScoreModel model;
    SensitiveSpec spec;
};

/// Base-recommender top-k lists for the trial run behind protected-value
/// identification.
std::vector<RecommendationList> trial_lists(const RunConfig& config, const ItemCatalog& catalog,
                                            std::span<const UserProfile> profiles,
                                            const ScoreModel& model);

/// Resolves every sensitive feature to explicit protected values, running the
/// percentile rule where asked. Features that end up with no protected value
/// are dropped with a warning; if none remain, throws ConfigError.
SensitiveSpec resolve_sensitive(const RunConfig& config, const ItemCatalog& catalog,
                                std::span<const RecommendationList> trial);

/// Load, split, fit (or read scores), identify protected values and compute
/// tolerances. `config.dataset.sensitive` in the returned run is rewritten to
/// the explicit protected values that were used.
PreparedRun prepare(const RunConfig& config);

/// Same as prepare but starting from in-memory data.
PreparedRun prepare(const RunConfig& config, ItemCatalog catalog, std::span<const Rating> ratings);

SimulationResult simulate(const PreparedRun& run, ChoiceFunction choice);

}  // namespace scruf
