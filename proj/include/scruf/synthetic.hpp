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
#include <string>
#include <vector>

#include "scruf/catalog.hpp"
#include "scruf/config.hpp"
#include "scruf/profiles.hpp"

namespace scruf {

/// In-memory synthetic dataset.
///
/// Item feature values are drawn with popularity (rank + 1)^-(skew - 1), so
/// high-rank values are rare. Users and items get planted 2-d latent vectors;
/// each user rates round(density * items) items picked without replacement
/// with weight exp(<u, v>), and the rating is
/// clamp(round(3 + <u, v> + noise * N(0, 1)), 1, 5).
struct SyntheticData {
    FeatureSchema schema;
    std::vector<Item> items;
    std::vector<Rating> ratings;
};

/// Throws ConfigError when the spec is invalid or the density leaves users
/// with fewer than two ratings.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

/// Writes items.csv, ratings.csv and scruf.ini (a config pointing at both,
/// with the declared schema and the sensitive features on the percentile
/// rule) into `out_dir`. Returns the config path.
std::filesystem::path write_synthetic(const SyntheticSpec& spec, const SyntheticData& data,
                                      const std::filesystem::path& out_dir);

std::string items_csv(const FeatureSchema& schema, const std::vector<Item>& items);
std::string ratings_csv(const std::vector<Rating>& ratings);

}  // namespace scruf
