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


#include <cmath>
#include <limits>

#include "doctest.h"
#include "fixtures.hpp"
#include "scruf/recommender.hpp"

using namespace scruf;
using namespace scruf::testing;

namespace {

// Ratings u_a * v_b on a rank-1 grid, every cell observed.
struct RankOne {
    ItemCatalog catalog;
    std::vector<UserProfile> profiles;
    std::vector<double> u{1.0, 1.5, 2.0, 1.2, 1.8, 1.1};
    std::vector<double> v{2.0, 1.0, 2.5, 1.5, 2.2, 1.3, 1.9, 2.4};

    RankOne() : catalog(single_feature_catalog({"x"}, std::vector<ValueIndex>(8, 0))) {
        for (std::size_t a = 0; a < u.size(); ++a) {
            UserProfile p;
            p.user_id = "u" + std::to_string(a);
            for (std::size_t b = 0; b < v.size(); ++b) {
                p.train.push_back({b, u[a] * v[b]});
            }
            profiles.push_back(p);
        }
    }
};

FitParams rank_one_params() {
    FitParams params;
    params.factors = 1;
    params.epochs = 3000;
    params.learning_rate = 0.01;
    params.regularization = 0.0;
    params.init_scale = 0.5;
    params.seed = 9;
    return params;
}

UserProfile profile_with(std::vector<ProfileRating> train) {
    UserProfile p;
    p.user_id = "u";
    p.train = std::move(train);
    return p;
}

}  // namespace

TEST_CASE("a rank-one matrix is recovered") {
    RankOne data;
    auto model = fit(data.profiles, data.catalog, rank_one_params());
    double sq = 0.0;
    std::size_t n = 0;
    for (std::size_t a = 0; a < data.profiles.size(); ++a) {
        for (const auto& r : data.profiles[a].train) {
            double e = model.score(a, r.item) - r.value;
            sq += e * e;
            ++n;
        }
    }
    CHECK(std::sqrt(sq / static_cast<double>(n)) < 0.05);
}

TEST_CASE("zero factors is a configuration error") {
    RankOne data;
    auto params = rank_one_params();
    params.factors = 0;
    CHECK_THROWS(fit(data.profiles, data.catalog, params));
    CHECK_THROWS(ScoreModel(2, 2, 0, 3.0));
}

TEST_CASE("fitting is deterministic and the loss never rises") {
    RankOne data;
    auto params = rank_one_params();
    params.factors = 3;
    params.epochs = 200;
    params.regularization = 0.05;
    params.learning_rate = 0.05;
    auto a = fit(data.profiles, data.catalog, params);
    auto b = fit(data.profiles, data.catalog, params);
    CHECK(a == b);
    const auto& loss = a.epoch_loss();
    REQUIRE(loss.size() == params.epochs);
    for (std::size_t e = 1; e < loss.size(); ++e) {
        CHECK(loss[e] <= loss[e - 1] + 1e-9);
    }
    for (std::size_t u = 0; u < a.users(); ++u) {
        for (double f : a.user_factors(u)) {
            CHECK(f >= 0.0);
        }
    }
}

TEST_CASE("cold users and items fall back to biases") {
    ScoreModel zero(2, 3, 4, 3.5);
    CHECK(zero.score(0, 0) == 3.5);

    auto catalog = single_feature_catalog({"x"}, {0, 0, 0});
    std::vector<UserProfile> profiles{profile_with({{0, 5.0}, {1, 3.0}}), profile_with({})};
    FitParams params;
    params.factors = 2;
    params.epochs = 5;
    auto model = fit(profiles, catalog, params);
    CHECK(model.is_cold_user(1));
    CHECK(model.is_cold_item(2));
    CHECK_FALSE(model.is_cold_item(0));
    CHECK(model.score(1, 2) == model.global_mean());
    CHECK(model.global_mean() == 4.0);
    CHECK(std::isfinite(model.score(0, 2)));
}

TEST_CASE("ties rank by ascending item id") {
    auto catalog = single_feature_catalog({"x"}, {0, 0, 0, 0});
    auto model = ScoreModel::from_matrix(1, 4, {2.0, 2.0, 2.0, 2.0});
    Recommender rec(model, catalog);
    auto list = rec.recommend(0, {}, 4);
    REQUIRE(list.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(list.entries[i].item == i);
    }
}

TEST_CASE("three-item catalog gives a full permutation by score") {
    auto catalog = load_catalog(table_from(loan_items_csv()), loan_schema());
    auto model = ScoreModel::from_matrix(1, 3, {3.0, 4.5, 1.0});
    auto list = Recommender(model, catalog).recommend(0, {}, 3);
    std::vector<ItemIndex> order;
    for (const auto& e : list.entries) {
        order.push_back(e.item);
    }
    CHECK(order == std::vector<ItemIndex>{1, 0, 2});
}

TEST_CASE("excluded train items never appear and oversized pools warn") {
    auto catalog = single_feature_catalog({"x"}, std::vector<ValueIndex>(6, 0));
    auto model = ScoreModel::from_matrix(1, 6, {6, 5, 4, 3, 2, 1});
    auto p = profile_with({{0, 5}, {2, 5}});
    WarningCapture warnings;
    auto list = recommend(model, catalog, 0, p, 10, true);
    CHECK(list.size() == 4);
    CHECK(warnings.messages.size() == 1);
    for (const auto& e : list.entries) {
        CHECK(e.item != 0);
        CHECK(e.item != 2);
    }
}

TEST_CASE("NaN cells in a score matrix take the matrix mean") {
    double nan = std::numeric_limits<double>::quiet_NaN();
    auto model = ScoreModel::from_matrix(1, 3, {1.0, nan, 3.0});
    CHECK(model.score(0, 1) == 2.0);
}

TEST_CASE("recommendation lists are sorted and stable under restriction") {
    RandomStream rng(12);
    for (int t = 0; t < 50; ++t) {
        std::size_t items = 5 + rng.below(40);
        std::vector<double> scores(items);
        for (auto& s : scores) {
            s = static_cast<double>(rng.below(6));  // plenty of ties
        }
        auto catalog = single_feature_catalog({"x"}, std::vector<ValueIndex>(items, 0));
        auto model = ScoreModel::from_matrix(1, items, scores);
        std::size_t pool = 1 + rng.below(items);
        auto list = Recommender(model, catalog).recommend(0, {}, pool);
        for (std::size_t i = 1; i < list.size(); ++i) {
            CHECK(list.entries[i - 1].score >= list.entries[i].score);
        }

        // Rebuild a catalog with just the pool (ids keep their relative order).
        std::vector<Item> kept;
        std::vector<double> kept_scores;
        std::vector<ItemIndex> by_id;
        for (const auto& e : list.entries) {
            by_id.push_back(e.item);
        }
        std::sort(by_id.begin(), by_id.end());
        for (auto i : by_id) {
            kept.push_back(catalog[i]);
            kept_scores.push_back(scores[i]);
        }
        ItemCatalog small(catalog.schema(), kept);
        auto small_model = ScoreModel::from_matrix(1, kept.size(), kept_scores);
        auto again = Recommender(small_model, small).recommend(0, {}, kept.size());
        REQUIRE(again.size() == list.size());
        for (std::size_t i = 0; i < list.size(); ++i) {
            CHECK(by_id[again.entries[i].item] == list.entries[i].item);
        }
    }
}
