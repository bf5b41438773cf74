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
#include <string>
#include <vector>

#include "scruf/catalog.hpp"
#include "scruf/csv.hpp"

namespace scruf {

struct RatingScale {
    double min = 1.0;
    double max = 5.0;
};

struct Rating {
    std::string user_id;
    std::string item_id;
    double value = 0.0;
};

struct ProfileRating {
    ItemIndex item = 0;
    double value = 0.0;
};

struct UserProfile {
    std::string user_id;
    std::vector<ProfileRating> train;
    std::vector<ProfileRating> test;
    /// Entropy per sensitive feature, in SensitiveSpec order (nats).
    std::vector<double> tolerance;
    /// Set when the user had a single rating and got no test split.
    bool flagged = false;
};

/// Reads `user_id,item_id,rating[,timestamp]`. Extra timestamp column is ignored.
std::vector<Rating> load_ratings(const csv::Table& table, RatingScale scale = {});
std::vector<Rating> load_ratings_file(const std::filesystem::path& path, RatingScale scale = {});

/// Per-user seeded partition with ceil(train_fraction * n) ratings in train.
/// Profiles are returned sorted by user_id. Item ids must resolve in the catalog.
std::vector<UserProfile> split_profiles(std::span<const Rating> ratings, const ItemCatalog& catalog,
                                        double train_fraction, std::uint64_t seed);

/// Shannon entropy (natural log) of the feature-value distribution over the
/// profile's train items. Throws DataError for an empty train set.
double compute_tolerance(const UserProfile& profile, const ItemCatalog& catalog,
                         std::size_t feature);

/// Fills profile.tolerance for each sensitive feature.
void assign_tolerances(std::span<UserProfile> profiles, const ItemCatalog& catalog,
                       const SensitiveSpec& spec);

/// Feature positions sorted by descending tolerance; exact ties are broken
/// by a uniform permutation drawn from `seed`.
std::vector<std::size_t> preference_order(std::span<const double> tolerance, std::uint64_t seed);

}  // namespace scruf
