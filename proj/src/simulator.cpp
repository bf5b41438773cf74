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

#include "scruf/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "scruf/rng.hpp"

namespace scruf {

void SimulationConfig::validate() const {
    if (!(batch_fraction > 0.0 && batch_fraction <= 1.0)) {
        throw ConfigError("batch_fraction must lie in (0, 1]");
    }
    if (window_batches < 1) {
        throw ConfigError("window_batches must be at least 1");
    }
    if (display_length < 1) {
        throw ConfigError("display_length must be at least 1");
    }
    if (candidate_pool_size < display_length) {
        throw ConfigError("candidate_pool_size must be at least display_length");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw ConfigError("epsilon must lie in (0, 1)");
    }
    if (arrivals_per_user < 1) {
        throw ConfigError("arrivals_per_user must be at least 1");
    }
    if (threads < 1) {
        throw ConfigError("threads must be at least 1");
    }
}

Simulation::Simulation(SimulationConfig config, std::span<const UserProfile> profiles,
                       const ItemCatalog& catalog, const SensitiveSpec& spec,
                       const ScoreModel& model)
    : config_(config),
      profiles_(profiles),
      catalog_(&catalog),
      spec_(&spec),
      mask_(catalog, spec),
      recommender_(model, catalog),
      window_(config.window_batches) {
    config_.validate();
    if (profiles.empty()) {
        throw DataError("simulation needs at least one user");
    }
    if (spec.empty()) {
        throw ConfigError("simulation needs at least one sensitive feature");
    }
    if (catalog.empty()) {
        throw DataError("simulation needs a non-empty catalog");
    }
    bool any_test = std::any_of(profiles.begin(), profiles.end(),
                                [](const UserProfile& p) { return !p.test.empty(); });
    if (!any_test) {
        throw DataError("simulation needs at least one user with test ratings");
    }
    if (config_.candidate_pool_size > catalog.size()) {
        warn("candidate pool of " + std::to_string(config_.candidate_pool_size) +
             " exceeds the catalog size " + std::to_string(catalog.size()) + "; truncated");
        config_.candidate_pool_size = catalog.size();
    }

    for (std::size_t j = 0; j < spec.size(); ++j) {
        rerankers_.push_back({j, spec[j].lambda});
    }
    preferences_.reserve(profiles.size());
    for (UserIndex u = 0; u < profiles.size(); ++u) {
        std::vector<double> tol = profiles[u].tolerance;
        if (tol.size() != spec.size()) {
            tol.assign(spec.size(), 0.0);
            if (!profiles[u].train.empty()) {
                for (std::size_t j = 0; j < spec.size(); ++j) {
                    tol[j] = compute_tolerance(profiles[u], catalog, spec[j].feature_index);
                }
            }
        }
        preferences_.push_back(preference_order(tol, derive_seed(config_.seed, "ties", u)));
    }
}

std::vector<std::vector<UserIndex>> Simulation::make_batches() const {
    std::vector<UserIndex> arrivals;
    arrivals.reserve(profiles_.size() * config_.arrivals_per_user);
    for (std::size_t pass = 0; pass < config_.arrivals_per_user; ++pass) {
        std::vector<UserIndex> order(profiles_.size());
        std::iota(order.begin(), order.end(), UserIndex{0});
        auto rng = substream(config_.seed, "shuffle", pass);
        rng.shuffle(std::span(order));
        arrivals.insert(arrivals.end(), order.begin(), order.end());
    }
    auto wanted = static_cast<std::size_t>(std::ceil(1.0 / config_.batch_fraction - 1e-9));
    auto count = std::clamp<std::size_t>(wanted, 1, arrivals.size());
    auto base = arrivals.size() / count;
    auto extra = arrivals.size() % count;

    std::vector<std::vector<UserIndex>> batches;
    batches.reserve(count);
    std::size_t pos = 0;
    for (std::size_t b = 0; b < count; ++b) {
        auto size = base + (b < extra ? 1 : 0);
        batches.emplace_back(arrivals.begin() + static_cast<std::ptrdiff_t>(pos),
                             arrivals.begin() + static_cast<std::ptrdiff_t>(pos + size));
        pos += size;
    }
    return batches;
}

Simulation::Outcome Simulation::serve(UserIndex user, const Lottery& lottery,
                                      std::size_t position) const {
    Outcome out;
    const auto& profile = profiles_[user];
    std::span<const ProfileRating> exclude;
    if (config_.exclude_train) {
        exclude = profile.train;
    }
    auto pool = recommender_.recommend(user, exclude, config_.candidate_pool_size);
    auto rng = substream(config_.seed, "sample", batch_index_, position);
    out.chosen = sample(lottery, rng);
    if (out.chosen) {
        out.slate = rerank(rerankers_[*out.chosen], pool, mask_, config_.display_length);
    } else {
        out.slate = truncate(pool, config_.display_length);
    }
    out.has_test = !profile.test.empty();
    if (out.has_test) {
        out.ndcg = ndcg(out.slate, profile.test, config_.display_length);
    }
    return out;
}

BatchTrace Simulation::step_batch(std::span<const UserIndex> batch_users) {
    const auto features = spec_->size();
    const auto n = batch_users.size();
    BatchTrace row;
    row.batch_index = batch_index_;
    row.users = n;
    row.chosen.assign(features, 0);
    row.exposure.assign(features, 0.0);

    std::vector<Lottery> lotteries;
    if (config_.choice == ChoiceFunction::none) {
        lotteries.assign(n, Lottery::skip_all(features));
    } else if (window_.empty()) {
        row.fixed_fallback = true;
        lotteries.assign(n, fixed_lottery(std::vector<bool>(features, true)));
    } else {
        auto state = unfairness_vector(window_metrics(window_, mask_), config_.epsilon);
        switch (config_.choice) {
            case ChoiceFunction::fixed:
                lotteries.assign(n, fixed_lottery(state.eligible));
                break;
            case ChoiceFunction::least_misery: {
                auto pick = least_misery(state);
                lotteries.assign(n, pick ? Lottery::degenerate(features, *pick)
                                         : Lottery::skip_all(features));
                break;
            }
            case ChoiceFunction::dynamic:
                lotteries.assign(n, dynamic_lottery(state));
                break;
            case ChoiceFunction::allocation: {
                std::vector<std::vector<std::size_t>> prefs;
                prefs.reserve(n);
                for (auto u : batch_users) {
                    prefs.push_back(preferences_[u]);
                }
                lotteries = allocation_lottery(state, prefs, n);
                break;
            }
            case ChoiceFunction::none:
                break;
        }
    }

    std::vector<Outcome> outcomes(n);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            outcomes[k] = serve(batch_users[k], lotteries[k], k);
        }
    };
    auto workers = std::min(config_.threads, n);
    if (workers <= 1) {
        work(0, n);
    } else {
        std::vector<std::jthread> pool;
        auto chunk = (n + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            auto begin = std::min(n, w * chunk);
            auto end = std::min(n, begin + chunk);
            if (begin < end) {
                pool.emplace_back(work, begin, end);
            }
        }
    }

    DeliveredBatch delivered;
    delivered.reserve(n);
    double ndcg_sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        auto& o = outcomes[k];
        if (o.chosen) {
            ++row.chosen[*o.chosen];
        } else {
            ++row.skipped;
        }
        if (o.has_test) {
            ndcg_sum += o.ndcg;
            ++row.ndcg_users;
        }
        for (std::size_t j = 0; j < features; ++j) {
            row.exposure[j] += exposure(o.slate, mask_, j);
        }
        delivered.push_back({batch_users[k], std::move(o.slate)});
    }
    if (n > 0) {
        for (auto& e : row.exposure) {
            e /= static_cast<double>(n);
        }
    }
    row.ndcg = row.ndcg_users > 0 ? ndcg_sum / static_cast<double>(row.ndcg_users) : 0.0;

    if (n > 0) {
        window_.push(std::move(delivered));
    }
    if (!window_.empty()) {
        row.metrics = window_metrics(window_, mask_);
    } else {
        row.metrics.assign(features, 0.0);
    }
    row.regret = make_regret(batch_index_, row.metrics);
    ++batch_index_;
    return row;
}

SimulationResult Simulation::run() {
    SimulationResult result;
    result.choice = config_.choice;
    result.features = spec_->feature_names();
    for (const auto& batch : make_batches()) {
        result.trace.push_back(step_batch(batch));
    }
    summarize(result);
    return result;
}

void summarize(SimulationResult& result) {
    const auto features = result.features.size();
    result.exposure.assign(features, 0.0);
    result.chosen.assign(features, 0);
    result.skipped = 0;
    double ndcg_sum = 0.0;
    std::size_t ndcg_users = 0;
    std::size_t users = 0;
    std::vector<double> avg_regret;
    for (const auto& row : result.trace) {
        ndcg_sum += row.ndcg * static_cast<double>(row.ndcg_users);
        ndcg_users += row.ndcg_users;
        users += row.users;
        for (std::size_t j = 0; j < features; ++j) {
            result.exposure[j] += row.exposure[j] * static_cast<double>(row.users);
            result.chosen[j] += row.chosen[j];
        }
        result.skipped += row.skipped;
        avg_regret.push_back(row.regret.average);
    }
    result.ndcg = ndcg_users > 0 ? ndcg_sum / static_cast<double>(ndcg_users) : 0.0;
    for (auto& e : result.exposure) {
        e = users > 0 ? e / static_cast<double>(users) : 0.0;
    }
    result.fairness =
        features > 0
            ? std::accumulate(result.exposure.begin(), result.exposure.end(), 0.0) /
                  static_cast<double>(features)
            : 0.0;
    result.regret = mean_and_variance(avg_regret);
}

SimulationResult run(const SimulationConfig& config, std::span<const UserProfile> profiles,
                     const ItemCatalog& catalog, const SensitiveSpec& spec,
                     const ScoreModel& model) {
    Simulation sim(config, profiles, catalog, spec, model);
    return sim.run();
}

}  // namespace scruf
