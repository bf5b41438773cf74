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

#include "scruf/choice.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace scruf {

std::string_view to_string(ChoiceFunction choice) {
    switch (choice) {
        case ChoiceFunction::none:
            return "none";
        case ChoiceFunction::fixed:
            return "fixed";
        case ChoiceFunction::least_misery:
            return "least_misery";
        case ChoiceFunction::dynamic:
            return "dynamic";
        case ChoiceFunction::allocation:
            return "allocation";
    }
    return "unknown";
}

ChoiceFunction parse_choice(std::string_view name) {
    for (auto c : {ChoiceFunction::fixed, ChoiceFunction::least_misery, ChoiceFunction::dynamic,
                   ChoiceFunction::allocation, ChoiceFunction::none}) {
        if (to_string(c) == name) {
            return c;
        }
    }
    throw ConfigError("unknown choice function '" + std::string(name) +
                      "'; valid names: fixed, least_misery, dynamic, allocation, none");
}

bool Lottery::skip() const {
    return std::all_of(probabilities.begin(), probabilities.end(),
                       [](double p) { return p == 0.0; });
}

Lottery Lottery::skip_all(std::size_t features) {
    return Lottery{std::vector<double>(features, 0.0)};
}

Lottery Lottery::degenerate(std::size_t features, std::size_t chosen) {
    Lottery l = skip_all(features);
    l.probabilities.at(chosen) = 1.0;
    return l;
}

Lottery fixed_lottery(const std::vector<bool>& eligible) {
    auto count = static_cast<std::size_t>(std::count(eligible.begin(), eligible.end(), true));
    Lottery l = Lottery::skip_all(eligible.size());
    if (count == 0) {
        return l;
    }
    for (std::size_t j = 0; j < eligible.size(); ++j) {
        if (eligible[j]) {
            l.probabilities[j] = 1.0 / static_cast<double>(count);
        }
    }
    return l;
}

std::optional<std::size_t> least_misery(const FairnessState& state) {
    if (state.skip) {
        return std::nullopt;
    }
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < state.uf.size(); ++j) {
        if (!state.eligible[j]) {
            continue;
        }
        if (!best || state.uf[j] > state.uf[*best]) {
            best = j;
        }
    }
    return best;
}

Lottery dynamic_lottery(const FairnessState& state) {
    if (state.skip) {
        return Lottery::skip_all(state.uf.size());
    }
    return Lottery{state.uf};
}

double AllocationMatrix::row_sum(std::size_t agent) const {
    double s = 0.0;
    for (std::size_t j = 0; j < objects; ++j) {
        s += (*this)(agent, j);
    }
    return s;
}

double AllocationMatrix::column_sum(std::size_t object) const {
    double s = 0.0;
    for (std::size_t i = 0; i < agents; ++i) {
        s += (*this)(i, object);
    }
    return s;
}

AllocationMatrix probabilistic_serial(std::span<const std::vector<std::size_t>> preferences,
                                      std::span<const double> capacities) {
    const auto n = preferences.size();
    const auto m = capacities.size();
    AllocationMatrix alloc{n, m, std::vector<double>(n * m, 0.0)};
    if (n == 0 || m == 0) {
        return alloc;
    }
    double total = 0.0;
    for (double c : capacities) {
        if (!(c >= 0.0)) {
            throw DataError("object capacities must be non-negative");
        }
        total += c;
    }
    if (total <= 0.0) {
        return alloc;
    }
    for (const auto& pref : preferences) {
        if (pref.size() != m) {
            throw DataError("every preference order must rank all objects");
        }
        std::vector<bool> seen(m, false);
        for (auto j : pref) {
            if (j >= m || seen[j]) {
                throw DataError("preference order is not a permutation of the objects");
            }
            seen[j] = true;
        }
    }

    std::vector<double> remaining(capacities.begin(), capacities.end());
    std::vector<bool> exhausted(m);
    for (std::size_t j = 0; j < m; ++j) {
        exhausted[j] = remaining[j] <= 0.0;
    }
    const double end_time = std::min(1.0, total / static_cast<double>(n));
    std::vector<std::size_t> cursor(n, 0);
    std::vector<std::size_t> eaters(m);
    double t = 0.0;

    // Each iteration exhausts at least one object or reaches end_time, so the
    // loop runs at most m + 1 times.
    while (t < end_time) {
        std::fill(eaters.begin(), eaters.end(), 0);
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) {
            while (cursor[i] < m && exhausted[preferences[i][cursor[i]]]) {
                ++cursor[i];
            }
            if (cursor[i] < m) {
                ++eaters[preferences[i][cursor[i]]];
                any = true;
            }
        }
        if (!any) {
            break;
        }
        double dt = end_time - t;
        for (std::size_t j = 0; j < m; ++j) {
            if (eaters[j] > 0) {
                dt = std::min(dt, remaining[j] / static_cast<double>(eaters[j]));
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (cursor[i] < m) {
                alloc.cells[i * m + preferences[i][cursor[i]]] += dt;
            }
        }
        bool reached_end = dt >= end_time - t;
        for (std::size_t j = 0; j < m; ++j) {
            if (eaters[j] == 0) {
                continue;
            }
            double finish = remaining[j] / static_cast<double>(eaters[j]);
            if (finish <= dt) {
                remaining[j] = 0.0;
                exhausted[j] = true;
            } else {
                remaining[j] -= dt * static_cast<double>(eaters[j]);
            }
        }
        t = reached_end ? end_time : t + dt;
    }
    return alloc;
}

std::vector<Lottery> allocation_lottery(const FairnessState& state,
                                        std::span<const std::vector<std::size_t>> preferences,
                                        std::size_t batch_size) {
    const auto features = state.uf.size();
    const auto n = preferences.size();
    if (state.skip) {
        return std::vector<Lottery>(n, Lottery::skip_all(features));
    }
    std::vector<std::size_t> columns;  // eligible feature per PS object
    std::vector<std::size_t> column_of(features, features);
    for (std::size_t j = 0; j < features; ++j) {
        if (state.eligible[j]) {
            column_of[j] = columns.size();
            columns.push_back(j);
        }
    }
    std::vector<double> capacity;
    for (auto j : columns) {
        capacity.push_back(static_cast<double>(batch_size) * state.uf[j]);
    }
    std::vector<std::vector<std::size_t>> restricted;
    restricted.reserve(n);
    for (const auto& order : preferences) {
        std::vector<std::size_t> r;
        for (auto j : order) {
            if (j < features && column_of[j] < features) {
                r.push_back(column_of[j]);
            }
        }
        if (r.size() != columns.size()) {
            throw DataError("preference order does not cover every eligible feature");
        }
        restricted.push_back(std::move(r));
    }

    auto alloc = probabilistic_serial(restricted, capacity);
    std::vector<Lottery> lotteries;
    lotteries.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double row = alloc.row_sum(i);
        if (row <= 0.0) {
            lotteries.push_back(dynamic_lottery(state));
            continue;
        }
        Lottery l = Lottery::skip_all(features);
        for (std::size_t c = 0; c < columns.size(); ++c) {
            l.probabilities[columns[c]] = alloc(i, c) / row;
        }
        lotteries.push_back(std::move(l));
    }
    return lotteries;
}

std::optional<std::size_t> sample(const Lottery& lottery, RandomStream& rng) {
    if (lottery.skip()) {
        return std::nullopt;
    }
    double total = std::accumulate(lottery.probabilities.begin(), lottery.probabilities.end(), 0.0);
    double u = rng.uniform() * total;
    std::optional<std::size_t> last;
    double acc = 0.0;
    for (std::size_t j = 0; j < lottery.probabilities.size(); ++j) {
        double p = lottery.probabilities[j];
        if (p <= 0.0) {
            continue;
        }
        last = j;
        acc += p;
        if (u < acc) {
            return j;
        }
    }
    return last;
}

}  // namespace scruf
