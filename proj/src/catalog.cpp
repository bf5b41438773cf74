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

#include "scruf/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

namespace scruf {

std::optional<ValueIndex> Feature::value_index(std::string_view value) const {
    auto v = csv::trim(value);
    for (ValueIndex i = 0; i < domain.size(); ++i) {
        if (domain[i] == v) {
            return i;
        }
    }
    return std::nullopt;
}

FeatureSchema::FeatureSchema(std::vector<Feature> features) : features_(std::move(features)) {
    std::unordered_set<std::string> names;
    for (auto& f : features_) {
        if (f.name.empty()) {
            throw DataError("feature with empty name");
        }
        if (!names.insert(f.name).second) {
            throw DataError("duplicate feature name '" + f.name + "'");
        }
        if (f.domain.empty()) {
            throw DataError("feature '" + f.name + "' has an empty domain");
        }
        std::unordered_set<std::string> values;
        for (auto& v : f.domain) {
            v = std::string(csv::trim(v));
            if (!values.insert(v).second) {
                throw DataError("feature '" + f.name + "' lists value '" + v + "' twice");
            }
        }
    }
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < features_.size(); ++i) {
        if (features_[i].name == name) {
            return i;
        }
    }
    return std::nullopt;
}

std::size_t FeatureSchema::require(std::string_view name) const {
    auto i = index_of(name);
    if (!i) {
        throw DataError("unknown feature '" + std::string(name) + "'");
    }
    return *i;
}

ItemCatalog::ItemCatalog(FeatureSchema schema, std::vector<Item> items)
    : schema_(std::move(schema)), items_(std::move(items)) {
    by_id_.reserve(items_.size());
    for (ItemIndex i = 0; i < items_.size(); ++i) {
        const auto& item = items_[i];
        if (item.values.size() != schema_.size()) {
            throw DataError("item '" + item.id + "' has " + std::to_string(item.values.size()) +
                            " values, schema has " + std::to_string(schema_.size()));
        }
        for (std::size_t f = 0; f < schema_.size(); ++f) {
            if (item.values[f] >= schema_[f].domain.size()) {
                throw DataError("item '" + item.id + "' value index out of domain for feature '" +
                                schema_[f].name + "'");
            }
        }
        if (!by_id_.emplace(item.id, i).second) {
            throw DataError("duplicate item_id '" + item.id + "'");
        }
    }
}

std::optional<ItemIndex> ItemCatalog::find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    if (it == by_id_.end()) {
        return std::nullopt;
    }
    return it->second;
}

const std::string& ItemCatalog::value_name(ItemIndex item, std::size_t feature) const {
    return schema_[feature].domain[items_[item].values[feature]];
}

namespace {

std::size_t require_id_column(const csv::Table& table) {
    auto id = table.column("item_id");
    if (!id) {
        throw DataError("items table has no item_id column");
    }
    return *id;
}

}  // namespace

ItemCatalog load_catalog(const csv::Table& table, const FeatureSchema& schema) {
    auto id_col = require_id_column(table);
    std::vector<std::size_t> columns;
    for (const auto& f : schema.features()) {
        auto c = table.column(f.name);
        if (!c) {
            throw DataError("items table is missing feature column '" + f.name + "'");
        }
        columns.push_back(*c);
    }

    std::vector<Item> items;
    items.reserve(table.rows.size());
    std::unordered_set<std::string> seen;
    for (const auto& row : table.rows) {
        Item item;
        item.id = std::string(csv::trim(row[id_col]));
        if (!seen.insert(item.id).second) {
            throw DataError("duplicate item_id '" + item.id + "'");
        }
        for (std::size_t f = 0; f < schema.size(); ++f) {
            const auto& raw = row[columns[f]];
            auto v = schema[f].value_index(raw);
            if (!v) {
                throw DataError("item '" + item.id + "': value '" + std::string(csv::trim(raw)) +
                                "' is not in the domain of feature '" + schema[f].name + "'");
            }
            item.values.push_back(*v);
        }
        items.push_back(std::move(item));
    }
    return ItemCatalog(schema, std::move(items));
}

FeatureSchema infer_schema(const csv::Table& table) {
    auto id_col = require_id_column(table);
    std::vector<Feature> features;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c == id_col) {
            continue;
        }
        std::set<std::string> values;
        for (const auto& row : table.rows) {
            values.emplace(csv::trim(row[c]));
        }
        if (values.empty()) {
            values.emplace("");
        }
        features.push_back({table.header[c], {values.begin(), values.end()}});
    }
    return FeatureSchema(std::move(features));
}

ItemCatalog load_catalog_file(const std::filesystem::path& path,
                              const std::optional<FeatureSchema>& schema) {
    auto table = csv::read_file(path);
    if (schema) {
        return load_catalog(table, *schema);
    }
    return load_catalog(table, infer_schema(table));
}

void SensitiveSpec::add(const FeatureSchema& schema, std::string_view feature,
                        std::span<const std::string> protected_values, double lambda) {
    auto f = schema.index_of(feature);
    if (!f) {
        throw ConfigError("sensitive feature '" + std::string(feature) + "' is not in the schema");
    }
    if (index_of(feature)) {
        throw ConfigError("sensitive feature '" + std::string(feature) + "' declared twice");
    }
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw ConfigError("lambda for '" + std::string(feature) + "' must lie in [0, 1]");
    }
    const auto& domain = schema[*f].domain;
    std::set<ValueIndex> values;
    for (const auto& v : protected_values) {
        auto idx = schema[*f].value_index(v);
        if (!idx) {
            throw ConfigError("protected value '" + v + "' is not in the domain of '" +
                              std::string(feature) + "'");
        }
        values.insert(*idx);
    }
    if (values.empty()) {
        throw ConfigError("protected value set for '" + std::string(feature) + "' is empty");
    }
    if (values.size() >= domain.size()) {
        throw ConfigError("protected value set for '" + std::string(feature) +
                          "' must be a strict subset of its domain");
    }
    entries_.push_back({std::string(feature), *f, {values.begin(), values.end()}, lambda});
}

std::vector<std::string> SensitiveSpec::feature_names() const {
    std::vector<std::string> names;
    for (const auto& e : entries_) {
        names.push_back(e.feature);
    }
    return names;
}

std::optional<std::size_t> SensitiveSpec::index_of(std::string_view feature) const {
    for (std::size_t j = 0; j < entries_.size(); ++j) {
        if (entries_[j].feature == feature) {
            return j;
        }
    }
    return std::nullopt;
}

bool SensitiveSpec::is_protected_value(std::size_t entry, ValueIndex value) const {
    const auto& pv = entries_[entry].protected_values;
    return std::binary_search(pv.begin(), pv.end(), value);
}

bool is_protected(const SensitiveSpec& spec, const FeatureSchema& schema, const Item& item,
                  std::string_view feature) {
    auto j = spec.index_of(feature);
    if (!j) {
        throw DataError("feature '" + std::string(feature) + "' is not sensitive");
    }
    auto f = spec[*j].feature_index;
    if (f >= schema.size() || f >= item.values.size()) {
        throw DataError("item '" + item.id + "' does not match the schema");
    }
    return spec.is_protected_value(*j, item.values[f]);
}

ProtectionMask::ProtectionMask(const ItemCatalog& catalog, const SensitiveSpec& spec)
    : flags_(spec.size(), std::vector<std::uint8_t>(catalog.size(), 0)) {
    for (std::size_t j = 0; j < spec.size(); ++j) {
        auto f = spec[j].feature_index;
        for (ItemIndex i = 0; i < catalog.size(); ++i) {
            flags_[j][i] = spec.is_protected_value(j, catalog[i].values[f]) ? 1 : 0;
        }
    }
}

std::vector<std::string> protected_by_frequency(const std::map<std::string, std::size_t>& frequency,
                                                double percentile) {
    if (!(percentile > 0.0 && percentile < 1.0)) {
        throw ConfigError("percentile must lie in (0, 1)");
    }
    if (frequency.empty()) {
        return {};
    }
    std::vector<std::size_t> counts;
    counts.reserve(frequency.size());
    for (const auto& [value, count] : frequency) {
        counts.push_back(count);
    }
    std::sort(counts.begin(), counts.end());
    // Nearest-rank quantile: the ceil(p * N)-th smallest value (1-based).
    auto rank = static_cast<std::size_t>(std::ceil(percentile * static_cast<double>(counts.size())));
    rank = std::clamp<std::size_t>(rank, 1, counts.size());
    auto cutoff = counts[rank - 1];

    std::vector<std::string> result;
    for (const auto& [value, count] : frequency) {
        if (count <= cutoff) {
            result.push_back(value);
        }
    }
    if (result.size() == frequency.size()) {
        warn("every value is at or below the frequency cutoff; no protected values selected");
        return {};
    }
    return result;
}

std::vector<std::string> identify_protected(std::span<const RecommendationList> trial_lists,
                                            const ItemCatalog& catalog, std::string_view feature,
                                            double percentile) {
    if (trial_lists.empty()) {
        throw DataError("identify_protected needs at least one trial list");
    }
    auto f = catalog.schema().require(feature);
    const auto& domain = catalog.schema()[f].domain;
    std::vector<std::size_t> counts(domain.size(), 0);
    for (const auto& list : trial_lists) {
        for (const auto& e : list.entries) {
            ++counts[catalog[e.item].values[f]];
        }
    }
    std::map<std::string, std::size_t> frequency;
    for (ValueIndex v = 0; v < domain.size(); ++v) {
        frequency[domain[v]] = counts[v];
    }
    auto selected = protected_by_frequency(frequency, percentile);
    // Report in domain order.
    std::vector<std::string> ordered;
    for (const auto& v : domain) {
        if (std::find(selected.begin(), selected.end(), v) != selected.end()) {
            ordered.push_back(v);
        }
    }
    return ordered;
}

}  // namespace scruf
