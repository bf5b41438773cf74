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

#include "scruf/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "scruf/rng.hpp"

namespace scruf {

std::vector<Rating> load_ratings(const csv::Table& table, RatingScale scale) {
    auto user = table.column("user_id");
    auto item = table.column("item_id");
    auto value = table.column("rating");
    if (!user || !item || !value) {
        throw DataError("ratings table needs user_id, item_id and rating columns");
    }
    std::vector<Rating> ratings;
    ratings.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        Rating r{std::string(csv::trim(row[*user])), std::string(csv::trim(row[*item])),
                 csv::parse_double(row[*value])};
        if (!(r.value >= scale.min && r.value <= scale.max)) {
            throw DataError("rating " + row[*value] + " for user '" + r.user_id + "' item '" +
                            r.item_id + "' is outside the rating scale");
        }
        ratings.push_back(std::move(r));
    }
    return ratings;
}

std::vector<Rating> load_ratings_file(const std::filesystem::path& path, RatingScale scale) {
    return load_ratings(csv::read_file(path), scale);
}

std::vector<UserProfile> split_profiles(std::span<const Rating> ratings, const ItemCatalog& catalog,
                                        double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("train_fraction must lie in (0, 1)");
    }
    std::map<std::string, std::vector<ProfileRating>> by_user;
    std::set<std::pair<std::string, ItemIndex>> seen;
    for (const auto& r : ratings) {
        auto item = catalog.find(r.item_id);
        if (!item) {
            throw DataError("rating references unknown item '" + r.item_id + "'");
        }
        if (!seen.emplace(r.user_id, *item).second) {
            throw DataError("user '" + r.user_id + "' rated item '" + r.item_id + "' twice");
        }
        by_user[r.user_id].push_back({*item, r.value});
    }

    std::vector<UserProfile> profiles;
    profiles.reserve(by_user.size());
    for (auto& [user_id, list] : by_user) {
        // Canonical order first so the partition does not depend on file order.
        std::sort(list.begin(), list.end(),
                  [](const auto& a, const auto& b) { return a.item < b.item; });
        UserProfile p;
        p.user_id = user_id;
        if (list.size() < 2) {
            warn("user '" + user_id + "' has a single rating; placed wholly in train");
            p.train = std::move(list);
            p.flagged = true;
            profiles.push_back(std::move(p));
            continue;
        }
        auto rng = substream(seed, "split", hash_name(user_id));
        rng.shuffle(std::span(list));
        auto n_train = static_cast<std::size_t>(
            std::ceil(train_fraction * static_cast<double>(list.size()) - 1e-12));
        n_train = std::clamp<std::size_t>(n_train, 1, list.size());
        p.train.assign(list.begin(), list.begin() + static_cast<std::ptrdiff_t>(n_train));
        p.test.assign(list.begin() + static_cast<std::ptrdiff_t>(n_train), list.end());
        auto by_item = [](const auto& a, const auto& b) { return a.item < b.item; };
        std::sort(p.train.begin(), p.train.end(), by_item);
        std::sort(p.test.begin(), p.test.end(), by_item);
        profiles.push_back(std::move(p));
    }
    return profiles;
}

double compute_tolerance(const UserProfile& profile, const ItemCatalog& catalog,
                         std::size_t feature) {
    if (profile.train.empty()) {
        throw DataError("user '" + profile.user_id + "' has no train items; tolerance undefined");
    }
    if (feature >= catalog.schema().size()) {
        throw DataError("feature index out of range");
    }
    std::vector<std::size_t> counts(catalog.schema()[feature].domain.size(), 0);
    for (const auto& r : profile.train) {
        ++counts[catalog[r.item].values[feature]];
    }
    const auto n = static_cast<double>(profile.train.size());
    double entropy = 0.0;
    for (auto c : counts) {
        if (c > 0) {
            double p = static_cast<double>(c) / n;
            entropy -= p * std::log(p);
        }
    }
    return std::max(entropy, 0.0);
}

void assign_tolerances(std::span<UserProfile> profiles, const ItemCatalog& catalog,
                       const SensitiveSpec& spec) {
    for (auto& p : profiles) {
        p.tolerance.clear();
        for (const auto& e : spec.entries()) {
            p.tolerance.push_back(compute_tolerance(p, catalog, e.feature_index));
        }
    }
}

std::vector<std::size_t> preference_order(std::span<const double> tolerance, std::uint64_t seed) {
    RandomStream rng(seed);
    std::vector<std::uint64_t> tie_key(tolerance.size());
    for (auto& k : tie_key) {
        k = rng.next_u64();
    }
    std::vector<std::size_t> order(tolerance.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (tolerance[a] != tolerance[b]) {
            return tolerance[a] > tolerance[b];
        }
        if (tie_key[a] != tie_key[b]) {
            return tie_key[a] < tie_key[b];
        }
        return a < b;
    });
    return order;
}

}  // namespace scruf
