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

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "scruf/catalog.hpp"
#include "scruf/common.hpp"
#include "scruf/csv.hpp"
#include "scruf/profiles.hpp"
#include "scruf/pipeline.hpp"
#include "scruf/rng.hpp"
#include "scruf/synthetic.hpp"

namespace scruf::testing {

inline csv::Table table_from(const std::string& text) {
    std::istringstream in(text);
    return csv::read(in);
}

inline FeatureSchema loan_schema() {
    return FeatureSchema({{"Region", {"Africa", "Middle-East", "India"}},
                          {"Gender", {"Male", "Female"}},
                          {"Sector", {"Agriculture", "Health", "Clothing"}},
                          {"Amount", {"$0-$500", "$500-$1,000"}}});
}

inline const char* loan_items_csv() {
    return "item_id,Region,Gender,Sector,Amount\n"
           "v1,Africa,Male,Agriculture,$0-$500\n"
           "v2,Africa,Female,Health,\"$500-$1,000\"\n"
           "v3,Middle-East,Female,Clothing,$0-$500\n";
}

/// Catalog with one feature "F"; item i (id "i000", "i001", ...) takes values[i].
inline ItemCatalog single_feature_catalog(const std::vector<std::string>& domain,
                                          const std::vector<ValueIndex>& values) {
    std::vector<Item> items;
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::string id = std::to_string(i);
        id.insert(0, 3 - std::min<std::size_t>(3, id.size()), '0');
        items.push_back({"i" + id, {values[i]}});
    }
    return ItemCatalog(FeatureSchema({{"F", domain}}), std::move(items));
}

/// Collects warnings for the lifetime of the object.
struct WarningCapture {
    std::vector<std::string> messages;
    ScopedWarningSink sink{[this](std::string_view m) { messages.emplace_back(m); }};
};

/// A small synthetic world, prepared end to end.
inline PreparedRun small_world(std::size_t users = 200, std::uint64_t seed = 1) {
    SyntheticSpec spec;
    spec.users = users;
    spec.items = 150;
    spec.density = 0.08;
    spec.seed = seed;
    auto data = generate_synthetic(spec);
    RunConfig config;
    config.simulation.seed = seed;
    config.simulation.candidate_pool_size = 40;
    config.model.epochs = 10;
    for (const auto& name : spec.sensitive) {
        config.dataset.sensitive.push_back({name, std::nullopt, 0.25, 0.5});
    }
    WarningCapture quiet;
    return prepare(config, ItemCatalog(data.schema, data.items), data.ratings);
}

}  // namespace scruf::testing
