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

#include "scruf/pipeline.hpp"

#include <numeric>

#include "scruf/rng.hpp"

namespace scruf {

std::vector<RecommendationList> trial_lists(const RunConfig& config, const ItemCatalog& catalog,
                                            std::span<const UserProfile> profiles,
                                            const ScoreModel& model) {
    std::vector<UserIndex> users(profiles.size());
    std::iota(users.begin(), users.end(), UserIndex{0});
    if (config.trial.users > 0 && config.trial.users < users.size()) {
        auto rng = substream(config.simulation.seed, "trial");
        rng.shuffle(std::span(users));
        users.resize(config.trial.users);
        std::sort(users.begin(), users.end());
    }
    auto length = config.trial.list_length > 0 ? config.trial.list_length
                                               : config.simulation.display_length;
    Recommender rec(model, catalog);
    std::vector<RecommendationList> lists;
    lists.reserve(users.size());
    for (auto u : users) {
        std::span<const ProfileRating> exclude;
        if (config.simulation.exclude_train) {
            exclude = profiles[u].train;
        }
        lists.push_back(rec.recommend(u, exclude, length));
    }
    return lists;
}

namespace {

std::vector<SensitiveFeatureConfig> requested_features(const RunConfig& config,
                                                       const ItemCatalog& catalog) {
    if (!config.dataset.sensitive.empty()) {
        return config.dataset.sensitive;
    }
    std::vector<SensitiveFeatureConfig> all;
    for (const auto& f : catalog.schema().features()) {
        all.push_back({f.name, std::nullopt, 0.25, 0.5});
    }
    return all;
}

}  // namespace

SensitiveSpec resolve_sensitive(const RunConfig& config, const ItemCatalog& catalog,
                                std::span<const RecommendationList> trial) {
    SensitiveSpec spec;
    for (const auto& s : requested_features(config, catalog)) {
        std::vector<std::string> values;
        if (s.protected_values) {
            values = *s.protected_values;
        } else {
            catalog.schema().require(s.feature);
            values = identify_protected(trial, catalog, s.feature, s.auto_percentile);
            if (values.empty()) {
                warn("sensitive feature '" + s.feature +
                     "' has no protected values under the percentile rule; dropped");
                continue;
            }
        }
        spec.add(catalog.schema(), s.feature, values, s.lambda);
    }
    if (spec.empty()) {
        throw ConfigError("no sensitive feature has protected values");
    }
    return spec;
}

PreparedRun prepare(const RunConfig& config, ItemCatalog catalog, std::span<const Rating> ratings) {
    PreparedRun run;
    run.config = config;
    run.catalog = std::move(catalog);
    if (run.catalog.empty()) {
        throw DataError("the item catalog is empty");
    }
    run.profiles = split_profiles(ratings, run.catalog, config.train_fraction,
                                  derive_seed(config.simulation.seed, "split"));
    if (config.dataset.scores) {
        run.model = load_score_matrix_file(*config.dataset.scores, run.profiles, run.catalog);
    } else {
        auto params = config.model;
        params.seed = derive_seed(config.simulation.seed, "fit");
        run.model = fit(run.profiles, run.catalog, params);
    }
    auto trial = trial_lists(config, run.catalog, run.profiles, run.model);
    run.spec = resolve_sensitive(config, run.catalog, trial);

    run.config.dataset.sensitive.clear();
    for (const auto& e : run.spec.entries()) {
        std::vector<std::string> names;
        for (auto v : e.protected_values) {
            names.push_back(run.catalog.schema()[e.feature_index].domain[v]);
        }
        run.config.dataset.sensitive.push_back({e.feature, names, 0.25, e.lambda});
    }

    for (auto& p : run.profiles) {
        p.tolerance.assign(run.spec.size(), 0.0);
        if (p.train.empty()) {
            continue;
        }
        for (std::size_t j = 0; j < run.spec.size(); ++j) {
            p.tolerance[j] = compute_tolerance(p, run.catalog, run.spec[j].feature_index);
        }
    }
    return run;
}

PreparedRun prepare(const RunConfig& config) {
    std::optional<FeatureSchema> schema;
    if (config.dataset.schema) {
        schema = FeatureSchema(*config.dataset.schema);
    }
    auto catalog = load_catalog_file(config.dataset.items, schema);
    auto ratings = load_ratings_file(config.dataset.ratings, config.dataset.scale);
    return prepare(config, std::move(catalog), ratings);
}

SimulationResult simulate(const PreparedRun& run, ChoiceFunction choice) {
    auto sim_config = run.config.simulation;
    sim_config.choice = choice;
    return scruf::run(sim_config, run.profiles, run.catalog, run.spec, run.model);
}

}  // namespace scruf
