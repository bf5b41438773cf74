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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "scruf/common.hpp"
#include "scruf/csv.hpp"
#include "scruf/list.hpp"

namespace scruf {

using ValueIndex = std::size_t;

struct Feature {
    std::string name;
    std::vector<std::string> domain;

    std::optional<ValueIndex> value_index(std::string_view value) const;
};

/// Ordered categorical features. Names are unique, domains non-empty and
/// free of duplicates; enforced at construction.
class FeatureSchema {
public:
    FeatureSchema() = default;
    explicit FeatureSchema(std::vector<Feature> features);

    std::size_t size() const { return features_.size(); }
    const Feature& operator[](std::size_t i) const { return features_[i]; }
    std::span<const Feature> features() const { return features_; }

    std::optional<std::size_t> index_of(std::string_view name) const;
    /// Like index_of but throws DataError for an unknown name.
    std::size_t require(std::string_view name) const;

private:
    std::vector<Feature> features_;
};

/// One item: a value index into each feature's domain, in schema order.
struct Item {
    std::string id;
    std::vector<ValueIndex> values;
};

class ItemCatalog {
public:
    ItemCatalog() = default;
    ItemCatalog(FeatureSchema schema, std::vector<Item> items);

    const FeatureSchema& schema() const { return schema_; }
    std::span<const Item> items() const { return items_; }
    const Item& operator[](ItemIndex i) const { return items_[i]; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }

    std::optional<ItemIndex> find(std::string_view id) const;
    const std::string& value_name(ItemIndex item, std::size_t feature) const;

private:
    FeatureSchema schema_;
    std::vector<Item> items_;
    std::unordered_map<std::string, ItemIndex> by_id_;
};

/// Builds a catalog from a table whose first column is `item_id` and which has
/// one column per schema feature (any column order after item_id).
ItemCatalog load_catalog(const csv::Table& table, const FeatureSchema& schema);

/// Schema whose features are the table's non-id columns and whose domains are
/// the distinct observed values, sorted.
FeatureSchema infer_schema(const csv::Table& table);

ItemCatalog load_catalog_file(const std::filesystem::path& path,
                              const std::optional<FeatureSchema>& schema = std::nullopt);

struct SensitiveEntry {
    std::string feature;
    std::size_t feature_index = 0;
    std::vector<ValueIndex> protected_values;  // sorted, unique
    double lambda = 0.5;
};

/// Sensitive features with their protected values and re-ranking trade-off.
class SensitiveSpec {
public:
    SensitiveSpec() = default;

    /// Validates that the feature exists, the value set is a non-empty strict
    /// subset of its domain and lambda lies in [0, 1].
    void add(const FeatureSchema& schema, std::string_view feature,
             std::span<const std::string> protected_values, double lambda);

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const SensitiveEntry& operator[](std::size_t j) const { return entries_[j]; }
    std::span<const SensitiveEntry> entries() const { return entries_; }
    std::vector<std::string> feature_names() const;

    std::optional<std::size_t> index_of(std::string_view feature) const;

    bool is_protected_value(std::size_t entry, ValueIndex value) const;

private:
    std::vector<SensitiveEntry> entries_;
};

/// True iff the item's value for `feature` is in that feature's protected set.
/// Throws DataError when the feature is not sensitive.
bool is_protected(const SensitiveSpec& spec, const FeatureSchema& schema, const Item& item,
                  std::string_view feature);

/// Precomputed per-(sensitive feature, item) protection flags.
class ProtectionMask {
public:
    ProtectionMask() = default;
    ProtectionMask(const ItemCatalog& catalog, const SensitiveSpec& spec);

    std::size_t features() const { return flags_.size(); }
    bool operator()(std::size_t feature, ItemIndex item) const { return flags_[feature][item] != 0; }

private:
    std::vector<std::vector<std::uint8_t>> flags_;
};

/// Values whose frequency is at or below the nearest-rank `percentile`
/// quantile of the frequency multiset. Returns an empty set (with a warning)
/// when that would cover the whole domain.
std::vector<std::string> protected_by_frequency(const std::map<std::string, std::size_t>& frequency,
                                                double percentile);

/// Counts how often each domain value of `feature` appears across the trial
/// lists (values never recommended count as zero) and applies
/// protected_by_frequency.
std::vector<std::string> identify_protected(std::span<const RecommendationList> trial_lists,
                                            const ItemCatalog& catalog, std::string_view feature,
                                            double percentile = 0.25);

}  // namespace scruf
