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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scruf/catalog.hpp"
#include "scruf/profiles.hpp"
#include "scruf/recommender.hpp"
#include "scruf/simulator.hpp"

namespace scruf {

/// Protected values are either listed or found by the frequency-percentile rule
/// over a trial run of the base recommender.
struct SensitiveFeatureConfig {
    std::string feature;
    std::optional<std::vector<std::string>> protected_values;
    double auto_percentile = 0.25;
    double lambda = 0.5;
};

struct DatasetBundle {
    std::filesystem::path items;
    std::filesystem::path ratings;
    std::optional<std::filesystem::path> scores;
    /// Declared schema; inferred from the items file when absent.
    std::optional<std::vector<Feature>> schema;
    /// Empty means every schema feature is sensitive with defaults.
    std::vector<SensitiveFeatureConfig> sensitive;
    RatingScale scale;
};

/// Size of the trial run used to find protected values. Zero means "all users"
/// and "display_length" respectively.
struct TrialConfig {
    std::size_t users = 0;
    std::size_t list_length = 0;
};

struct SyntheticFeature {
    std::string name;
    std::size_t domain_size = 2;
};

struct SyntheticSpec {
    std::size_t users = 4000;
    std::size_t items = 2500;
    std::vector<SyntheticFeature> features = {
        {"Region", 8}, {"Gender", 3}, {"Sector", 12}, {"Amount", 10}};
    /// Features written into the generated config as sensitive.
    std::vector<std::string> sensitive = {"Region", "Gender", "Sector"};
    /// Value popularity follows (rank + 1)^-(skew - 1); 1 is uniform.
    double skew = 3.0;
    double density = 0.04;
    double noise = 0.5;
    std::uint64_t seed = 0;

    void validate() const;
};

struct RunConfig {
    SimulationConfig simulation;
    FitParams model;
    double train_fraction = 0.8;
    DatasetBundle dataset;
    TrialConfig trial;
    std::optional<SyntheticSpec> synthetic;
};

/// Parses the sectioned key = value format (see README). Unknown sections or
/// keys, bad types and out-of-range values throw ConfigError. Relative paths
/// are resolved against `base_dir`.
RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
RunConfig parse_config_file(const std::filesystem::path& path);

/// Serialises a resolved configuration in the same format (used for manifests).
std::string to_config_text(const RunConfig& config);

}  // namespace scruf
