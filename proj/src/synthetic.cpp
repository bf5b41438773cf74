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

#include "scruf/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "scruf/csv.hpp"
#include "scruf/rng.hpp"

namespace scruf {

namespace {

constexpr std::size_t kLatentDim = 2;
constexpr double kRatingCentre = 3.0;

std::string padded(char prefix, std::size_t i, std::size_t n) {
    auto digits = std::to_string(n).size();
    auto s = std::to_string(i);
    return std::string(1, prefix) + std::string(digits - std::min(digits, s.size()), '0') + s;
}

ValueIndex draw_value(RandomStream& rng, const std::vector<double>& cumulative) {
    double u = rng.uniform() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    return static_cast<ValueIndex>(std::min<std::ptrdiff_t>(
        it - cumulative.begin(), static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    auto per_user = static_cast<std::size_t>(std::llround(spec.density * static_cast<double>(spec.items)));
    if (per_user < 2) {
        throw ConfigError("synthetic.density " + csv::format_double(spec.density) + " with " +
                          std::to_string(spec.items) +
                          " items gives users fewer than two ratings; infeasible");
    }

    SyntheticData data;
    std::vector<Feature> features;
    std::vector<std::vector<double>> cumulative;
    for (const auto& f : spec.features) {
        Feature feature{f.name, {}};
        std::vector<double> cum;
        double acc = 0.0;
        for (std::size_t k = 0; k < f.domain_size; ++k) {
            feature.domain.push_back(f.name + "_" + std::to_string(k));
            acc += std::pow(static_cast<double>(k + 1), -(spec.skew - 1.0));
            cum.push_back(acc);
        }
        features.push_back(std::move(feature));
        cumulative.push_back(std::move(cum));
    }
    data.schema = FeatureSchema(std::move(features));

    auto item_rng = substream(spec.seed, "generator-items");
    std::vector<double> item_latent(spec.items * kLatentDim);
    for (std::size_t i = 0; i < spec.items; ++i) {
        Item item{padded('v', i + 1, spec.items), {}};
        for (std::size_t f = 0; f < spec.features.size(); ++f) {
            item.values.push_back(draw_value(item_rng, cumulative[f]));
        }
        for (std::size_t k = 0; k < kLatentDim; ++k) {
            item_latent[i * kLatentDim + k] = item_rng.normal();
        }
        data.items.push_back(std::move(item));
    }

    std::vector<double> affinity(spec.items);
    std::vector<std::pair<double, std::size_t>> keys(spec.items);
    for (std::size_t u = 0; u < spec.users; ++u) {
        auto rng = substream(spec.seed, "generator-user", u);
        double latent[kLatentDim];
        for (auto& x : latent) {
            x = rng.normal();
        }
        for (std::size_t i = 0; i < spec.items; ++i) {
            double a = 0.0;
            for (std::size_t k = 0; k < kLatentDim; ++k) {
                a += latent[k] * item_latent[i * kLatentDim + k];
            }
            affinity[i] = a;
            // Weighted sampling without replacement: largest log(U) / w.
            double r = rng.uniform();
            if (r <= 0.0) {
                r = 0x1.0p-53;
            }
            keys[i] = {std::log(r) / std::exp(a), i};
        }
        std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(per_user),
                          keys.end(), [](const auto& x, const auto& y) {
                              return x.first != y.first ? x.first > y.first : x.second < y.second;
                          });
        std::vector<std::size_t> chosen;
        for (std::size_t r = 0; r < per_user; ++r) {
            chosen.push_back(keys[r].second);
        }
        std::sort(chosen.begin(), chosen.end());
        auto user_id = padded('u', u + 1, spec.users);
        for (auto i : chosen) {
            double value = kRatingCentre + affinity[i] + spec.noise * rng.normal();
            value = std::clamp(std::round(value), 1.0, 5.0);
            data.ratings.push_back({user_id, data.items[i].id, value});
        }
    }
    return data;
}

std::string items_csv(const FeatureSchema& schema, const std::vector<Item>& items) {
    std::ostringstream out;
    std::vector<std::string> header{"item_id"};
    for (const auto& f : schema.features()) {
        header.push_back(f.name);
    }
    csv::write_row(out, header);
    for (const auto& item : items) {
        std::vector<std::string> row{item.id};
        for (std::size_t f = 0; f < schema.size(); ++f) {
            row.push_back(schema[f].domain[item.values[f]]);
        }
        csv::write_row(out, row);
    }
    return out.str();
}

std::string ratings_csv(const std::vector<Rating>& ratings) {
    std::ostringstream out;
    csv::write_row(out, {"user_id", "item_id", "rating"});
    for (const auto& r : ratings) {
        csv::write_row(out, {r.user_id, r.item_id, csv::format_double(r.value)});
    }
    return out.str();
}

std::filesystem::path write_synthetic(const SyntheticSpec& spec, const SyntheticData& data,
                                      const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    csv::write_atomically(out_dir / "items.csv", items_csv(data.schema, data.items));
    csv::write_atomically(out_dir / "ratings.csv", ratings_csv(data.ratings));

    RunConfig config;
    config.simulation.seed = spec.seed;
    config.model.seed = spec.seed;
    config.dataset.items = "items.csv";
    config.dataset.ratings = "ratings.csv";
    config.dataset.schema = std::vector<Feature>(data.schema.features().begin(),
                                                 data.schema.features().end());
    for (const auto& name : spec.sensitive) {
        config.dataset.sensitive.push_back({name, std::nullopt, 0.25, 0.5});
    }
    auto path = out_dir / "scruf.ini";
    csv::write_atomically(path, to_config_text(config));
    return path;
}

}  // namespace scruf
