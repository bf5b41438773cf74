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


#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "scruf/synthetic.hpp"

using namespace scruf;
using namespace scruf::testing;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("scruf_synthetic_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("the same seed writes identical files") {
    SyntheticSpec spec;
    spec.users = 60;
    spec.items = 80;
    spec.density = 0.1;
    spec.seed = 4;
    auto a = scratch("a");
    auto b = scratch("b");
    write_synthetic(spec, generate_synthetic(spec), a);
    write_synthetic(spec, generate_synthetic(spec), b);
    for (auto name : {"items.csv", "ratings.csv", "scruf.ini"}) {
        CHECK(slurp(a / name) == slurp(b / name));
        CHECK_FALSE(slurp(a / name).empty());
    }
    spec.seed = 5;
    CHECK(items_csv(generate_synthetic(spec).schema, generate_synthetic(spec).items) !=
          slurp(a / "items.csv"));
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
}

TEST_CASE("three items over four features have the loan-table shape") {
    SyntheticSpec spec;
    spec.users = 5;
    spec.items = 3;
    spec.density = 0.7;
    auto data = generate_synthetic(spec);
    auto table = table_from(items_csv(data.schema, data.items));
    CHECK(table.header.size() == 5);
    CHECK(table.header.front() == "item_id");
    CHECK(table.rows.size() == 3);
}

TEST_CASE("infeasible density is a configuration error") {
    SyntheticSpec spec;
    spec.users = 5;
    spec.items = 10;
    spec.density = 0.05;
    CHECK_THROWS_AS(generate_synthetic(spec), ConfigError);
}

TEST_CASE("the files round-trip to the generated structures") {
    SyntheticSpec spec;
    spec.users = 40;
    spec.items = 50;
    spec.density = 0.2;
    auto data = generate_synthetic(spec);
    auto dir = scratch("roundtrip");
    auto ini = write_synthetic(spec, data, dir);
    auto config = parse_config_file(ini);
    auto catalog = load_catalog_file(config.dataset.items, FeatureSchema(*config.dataset.schema));
    REQUIRE(catalog.size() == data.items.size());
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        CHECK(catalog[i].id == data.items[i].id);
        CHECK(catalog[i].values == data.items[i].values);
    }
    auto ratings = load_ratings_file(config.dataset.ratings);
    REQUIRE(ratings.size() == data.ratings.size());
    for (std::size_t i = 0; i < ratings.size(); ++i) {
        CHECK(ratings[i].user_id == data.ratings[i].user_id);
        CHECK(ratings[i].item_id == data.ratings[i].item_id);
        CHECK(ratings[i].value == data.ratings[i].value);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("uniform popularity leaves about a quarter of values protected") {
    SyntheticSpec spec;
    spec.users = 10;
    spec.items = 4000;
    spec.density = 0.001;
    spec.skew = 1.0;
    spec.features = {{"F", 12}};
    spec.sensitive = {"F"};
    auto data = generate_synthetic(spec);
    ItemCatalog catalog(data.schema, data.items);

    // Every item appears once, so the trial frequency is the sampled frequency.
    RecommendationList all;
    for (ItemIndex i = 0; i < catalog.size(); ++i) {
        all.entries.push_back({i, 0.0});
    }
    std::vector<RecommendationList> trial{all};
    auto chosen = identify_protected(trial, catalog, "F");

    std::vector<std::size_t> counts(12, 0);
    for (const auto& item : data.items) {
        counts[item.values[0]]++;
    }
    auto sorted = counts;
    std::sort(sorted.begin(), sorted.end());
    std::size_t cutoff = sorted[2];  // nearest rank of 0.25 over 12 values
    std::vector<std::string> expected;
    for (std::size_t v = 0; v < 12; ++v) {
        if (counts[v] <= cutoff) {
            expected.push_back(data.schema[0].domain[v]);
        }
    }
    CHECK(chosen == expected);
    CHECK(chosen.size() >= 3);
    CHECK(chosen.size() <= 5);
}
