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

#include "scruf/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "scruf/rng.hpp"

namespace scruf {

ScoreModel::ScoreModel(std::size_t users, std::size_t items, std::size_t factors,
                       double global_mean)
    : users_(users),
      items_(items),
      factors_(factors),
      global_mean_(global_mean),
      user_bias_(users, 0.0),
      item_bias_(items, 0.0),
      user_factors_(users * factors, 0.0),
      item_factors_(items * factors, 0.0),
      user_known_(users, 1),
      item_known_(items, 1) {
    if (factors == 0) {
        throw ConfigError("factor dimension must be at least 1");
    }
}

ScoreModel ScoreModel::from_matrix(std::size_t users, std::size_t items,
                                   std::vector<double> scores) {
    if (scores.size() != users * items) {
        throw DataError("score matrix has the wrong number of cells");
    }
    ScoreModel m;
    m.users_ = users;
    m.items_ = items;
    m.user_known_.assign(users, 0);
    m.item_known_.assign(items, 0);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t u = 0; u < users; ++u) {
        for (std::size_t i = 0; i < items; ++i) {
            double s = scores[u * items + i];
            if (std::isfinite(s)) {
                sum += s;
                ++n;
                m.user_known_[u] = 1;
                m.item_known_[i] = 1;
            }
        }
    }
    m.global_mean_ = n > 0 ? sum / static_cast<double>(n) : 0.0;
    for (auto& s : scores) {
        if (!std::isfinite(s)) {
            s = m.global_mean_;
        }
    }
    m.dense_ = std::move(scores);
    return m;
}

bool ScoreModel::is_cold_user(UserIndex user) const {
    return user >= users_ || user_known_[user] == 0;
}

bool ScoreModel::is_cold_item(ItemIndex item) const {
    return item >= items_ || item_known_[item] == 0;
}

double ScoreModel::score(UserIndex user, ItemIndex item) const {
    bool user_ok = user < users_;
    bool item_ok = item < items_;
    if (!dense_.empty()) {
        return user_ok && item_ok ? dense_[user * items_ + item] : global_mean_;
    }
    double s = global_mean_;
    if (user_ok) {
        s += user_bias_[user];
    }
    if (item_ok) {
        s += item_bias_[item];
    }
    if (user_ok && item_ok) {
        const double* p = &user_factors_[user * factors_];
        const double* q = &item_factors_[item * factors_];
        for (std::size_t k = 0; k < factors_; ++k) {
            s += p[k] * q[k];
        }
    }
    return s;
}

namespace {

struct Observation {
    UserIndex user;
    ItemIndex item;
    double value;
};

double regularised_loss(const ScoreModel& m, std::span<const Observation> obs, double reg) {
    double loss = 0.0;
    for (const auto& o : obs) {
        double e = o.value - m.score(o.user, o.item);
        loss += e * e;
    }
    double penalty = 0.0;
    for (UserIndex u = 0; u < m.users(); ++u) {
        penalty += m.user_bias(u) * m.user_bias(u);
        for (double p : m.user_factors(u)) {
            penalty += p * p;
        }
    }
    for (ItemIndex i = 0; i < m.items(); ++i) {
        penalty += m.item_bias(i) * m.item_bias(i);
        for (double q : m.item_factors(i)) {
            penalty += q * q;
        }
    }
    return loss + reg * penalty;
}

void sgd_epoch(ScoreModel& m, std::span<const Observation> obs, std::span<const std::size_t> order,
               double lr, double reg) {
    const auto d = m.factors();
    for (auto idx : order) {
        const auto& o = obs[idx];
        double e = o.value - m.score(o.user, o.item);
        double& bu = m.user_bias(o.user);
        double& bi = m.item_bias(o.item);
        bu += lr * (e - reg * bu);
        bi += lr * (e - reg * bi);
        auto p = m.user_factors(o.user);
        auto q = m.item_factors(o.item);
        for (std::size_t k = 0; k < d; ++k) {
            double pk = p[k];
            double qk = q[k];
            p[k] = std::max(0.0, pk + lr * (e * qk - reg * pk));
            q[k] = std::max(0.0, qk + lr * (e * pk - reg * qk));
        }
    }
}

}  // namespace

ScoreModel fit(std::span<const UserProfile> profiles, const ItemCatalog& catalog,
               const FitParams& params) {
    if (params.factors == 0) {
        throw ConfigError("factor dimension must be at least 1");
    }
    if (!(params.learning_rate > 0.0) || params.regularization < 0.0) {
        throw ConfigError("learning_rate must be positive and regularization non-negative");
    }
    std::vector<Observation> obs;
    for (UserIndex u = 0; u < profiles.size(); ++u) {
        for (const auto& r : profiles[u].train) {
            obs.push_back({u, r.item, r.value});
        }
    }
    if (obs.empty()) {
        throw DataError("cannot fit a model without train ratings");
    }
    double mean = 0.0;
    for (const auto& o : obs) {
        mean += o.value;
    }
    mean /= static_cast<double>(obs.size());

    ScoreModel model(profiles.size(), catalog.size(), params.factors, mean);
    std::fill(model.user_known_.begin(), model.user_known_.end(), 0);
    std::fill(model.item_known_.begin(), model.item_known_.end(), 0);
    for (const auto& o : obs) {
        model.user_known_[o.user] = 1;
        model.item_known_[o.item] = 1;
    }

    auto init = substream(params.seed, "fit-init");
    for (UserIndex u = 0; u < model.users(); ++u) {
        if (model.user_known_[u] == 0) {
            continue;
        }
        for (auto& p : model.user_factors(u)) {
            p = init.uniform() * params.init_scale;
        }
    }
    for (ItemIndex i = 0; i < model.items(); ++i) {
        if (model.item_known_[i] == 0) {
            continue;
        }
        for (auto& q : model.item_factors(i)) {
            q = init.uniform() * params.init_scale;
        }
    }

    std::vector<std::size_t> order(obs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    double lr = params.learning_rate;
    double loss = regularised_loss(model, obs, params.regularization);
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        auto rng = substream(params.seed, "fit-epoch", epoch);
        rng.shuffle(std::span(order));
        // Bounded number of halvings; with a tiny step the epoch is a no-op
        // in the limit, so the loss cannot rise.
        for (int attempt = 0; attempt < 30; ++attempt) {
            ScoreModel trial = model;
            sgd_epoch(trial, obs, order, lr, params.regularization);
            double trial_loss = regularised_loss(trial, obs, params.regularization);
            if (trial_loss <= loss) {
                model = std::move(trial);
                loss = trial_loss;
                break;
            }
            lr *= 0.5;
        }
        model.epoch_loss_.push_back(loss);
    }
    return model;
}

ScoreModel load_score_matrix(const csv::Table& table, std::span<const UserProfile> profiles,
                             const ItemCatalog& catalog) {
    if (table.header.empty() || table.header[0] != "user_id") {
        throw DataError("score matrix header must start with user_id");
    }
    std::unordered_map<std::string, UserIndex> user_pos;
    for (UserIndex u = 0; u < profiles.size(); ++u) {
        user_pos.emplace(profiles[u].user_id, u);
    }
    std::vector<std::optional<ItemIndex>> column_item(table.header.size());
    for (std::size_t c = 1; c < table.header.size(); ++c) {
        column_item[c] = catalog.find(table.header[c]);
        if (!column_item[c]) {
            warn("score matrix column '" + table.header[c] + "' is not a catalog item; ignored");
        }
    }
    std::vector<double> cells(profiles.size() * catalog.size(),
                              std::numeric_limits<double>::quiet_NaN());
    for (const auto& row : table.rows) {
        auto it = user_pos.find(std::string(csv::trim(row[0])));
        if (it == user_pos.end()) {
            continue;
        }
        for (std::size_t c = 1; c < row.size(); ++c) {
            if (!column_item[c] || csv::trim(row[c]).empty()) {
                continue;
            }
            double v = csv::parse_double(row[c]);
            if (!std::isfinite(v)) {
                throw DataError("non-finite score in score matrix");
            }
            cells[it->second * catalog.size() + *column_item[c]] = v;
        }
    }
    return ScoreModel::from_matrix(profiles.size(), catalog.size(), std::move(cells));
}

ScoreModel load_score_matrix_file(const std::filesystem::path& path,
                                  std::span<const UserProfile> profiles,
                                  const ItemCatalog& catalog) {
    return load_score_matrix(csv::read_file(path), profiles, catalog);
}

Recommender::Recommender(const ScoreModel& model, const ItemCatalog& catalog)
    : model_(&model), catalog_(&catalog), id_rank_(catalog.size()) {
    std::vector<ItemIndex> by_id(catalog.size());
    std::iota(by_id.begin(), by_id.end(), ItemIndex{0});
    std::sort(by_id.begin(), by_id.end(),
              [&](ItemIndex a, ItemIndex b) { return catalog[a].id < catalog[b].id; });
    for (std::size_t r = 0; r < by_id.size(); ++r) {
        id_rank_[by_id[r]] = r;
    }
}

RecommendationList Recommender::recommend(UserIndex user, std::span<const ProfileRating> exclude,
                                          std::size_t pool_size) const {
    const auto n = catalog_->size();
    std::vector<std::uint8_t> skip(n, 0);
    for (const auto& r : exclude) {
        if (r.item < n) {
            skip[r.item] = 1;
        }
    }
    std::vector<ScoredItem> candidates;
    candidates.reserve(n);
    for (ItemIndex i = 0; i < n; ++i) {
        if (skip[i] == 0) {
            candidates.push_back({i, model_->score(user, i)});
        }
    }
    auto better = [this](const ScoredItem& a, const ScoredItem& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return id_rank_[a.item] < id_rank_[b.item];
    };
    auto k = std::min(pool_size, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                      candidates.end(), better);
    candidates.resize(k);
    return RecommendationList{user, std::move(candidates)};
}

RecommendationList recommend(const ScoreModel& model, const ItemCatalog& catalog, UserIndex user,
                             const UserProfile& profile, std::size_t pool_size, bool exclude_train) {
    if (pool_size > catalog.size()) {
        warn("candidate pool of " + std::to_string(pool_size) + " exceeds the catalog size " +
             std::to_string(catalog.size()) + "; truncated");
    }
    Recommender rec(model, catalog);
    std::span<const ProfileRating> exclude;
    if (exclude_train) {
        exclude = profile.train;
    }
    return rec.recommend(user, exclude, pool_size);
}

}  // namespace scruf
