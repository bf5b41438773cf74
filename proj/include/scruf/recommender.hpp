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
#include <filesystem>
#include <span>
#include <vector>

#include "scruf/catalog.hpp"
#include "scruf/csv.hpp"
#include "scruf/list.hpp"
#include "scruf/profiles.hpp"

namespace scruf {

struct FitParams {
    std::size_t factors = 20;
    std::size_t epochs = 30;
    double learning_rate = 0.01;
    double regularization = 0.02;
    /// Factors start uniform in [0, init_scale).
    double init_scale = 0.1;
    std::uint64_t seed = 0;
};

/// Biased latent-factor model with non-negative factors:
///   score(u, i) = mean + user_bias[u] + item_bias[i] + <P[u], Q[i]>.
/// Alternatively wraps a dense precomputed users x items score matrix.
class ScoreModel {
public:
    ScoreModel() = default;

    /// Zero-initialised factor model (useful as a fixture and for fit).
    ScoreModel(std::size_t users, std::size_t items, std::size_t factors, double global_mean);

    /// Dense precomputed scores; NaN cells fall back to the matrix mean.
    static ScoreModel from_matrix(std::size_t users, std::size_t items, std::vector<double> scores);

    double score(UserIndex user, ItemIndex item) const;

    bool is_cold_user(UserIndex user) const;
    bool is_cold_item(ItemIndex item) const;

    std::size_t users() const { return users_; }
    std::size_t items() const { return items_; }
    std::size_t factors() const { return factors_; }
    double global_mean() const { return global_mean_; }
    bool precomputed() const { return !dense_.empty(); }

    std::span<double> user_factors(UserIndex u) { return {&user_factors_[u * factors_], factors_}; }
    std::span<double> item_factors(ItemIndex i) { return {&item_factors_[i * factors_], factors_}; }
    std::span<const double> user_factors(UserIndex u) const {
        return {&user_factors_[u * factors_], factors_};
    }
    std::span<const double> item_factors(ItemIndex i) const {
        return {&item_factors_[i * factors_], factors_};
    }
    double& user_bias(UserIndex u) { return user_bias_[u]; }
    double& item_bias(ItemIndex i) { return item_bias_[i]; }
    double user_bias(UserIndex u) const { return user_bias_[u]; }
    double item_bias(ItemIndex i) const { return item_bias_[i]; }

    /// Regularised loss recorded after each training epoch.
    const std::vector<double>& epoch_loss() const { return epoch_loss_; }

    friend ScoreModel fit(std::span<const UserProfile> profiles, const ItemCatalog& catalog,
                          const FitParams& params);

    friend bool operator==(const ScoreModel&, const ScoreModel&) = default;

private:
    std::size_t users_ = 0;
    std::size_t items_ = 0;
    std::size_t factors_ = 0;
    double global_mean_ = 0.0;
    std::vector<double> user_bias_;
    std::vector<double> item_bias_;
    std::vector<double> user_factors_;
    std::vector<double> item_factors_;
    std::vector<std::uint8_t> user_known_;
    std::vector<std::uint8_t> item_known_;
    std::vector<double> dense_;
    std::vector<double> epoch_loss_;
};

/// Projected SGD on the regularised squared error of the train ratings.
/// Factors are clamped at zero after every update. An epoch that would raise
/// the loss is rolled back and retried at half the learning rate, so the
/// recorded loss never increases. Users are indexed by profile position.
ScoreModel fit(std::span<const UserProfile> profiles, const ItemCatalog& catalog,
               const FitParams& params);

/// Reads a dense score file: header `user_id,<item ids...>`, one row per user.
/// Users and items are mapped onto profile and catalog positions; anything
/// absent falls back to the matrix mean.
ScoreModel load_score_matrix(const csv::Table& table, std::span<const UserProfile> profiles,
                             const ItemCatalog& catalog);
ScoreModel load_score_matrix_file(const std::filesystem::path& path,
                                  std::span<const UserProfile> profiles,
                                  const ItemCatalog& catalog);

/// Ranks catalog items for users; ties are broken by ascending item_id.
class Recommender {
public:
    Recommender(const ScoreModel& model, const ItemCatalog& catalog);

    /// Top `pool_size` items by score, skipping `exclude` (e.g. the user's
    /// train items). Pool larger than the candidate set is truncated.
    RecommendationList recommend(UserIndex user, std::span<const ProfileRating> exclude,
                                 std::size_t pool_size) const;

private:
    const ScoreModel* model_;
    const ItemCatalog* catalog_;
    std::vector<std::size_t> id_rank_;
};

/// One-shot form; warns when the pool exceeds the catalog.
RecommendationList recommend(const ScoreModel& model, const ItemCatalog& catalog, UserIndex user,
                             const UserProfile& profile, std::size_t pool_size, bool exclude_train);

}  // namespace scruf
