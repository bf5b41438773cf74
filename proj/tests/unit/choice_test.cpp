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


#include <cmath>
#include <numeric>

#include "doctest.h"
#include "fixtures.hpp"
#include "scruf/choice.hpp"

using namespace scruf;
using namespace scruf::testing;

namespace {

FairnessState state_from_uf(std::vector<double> uf) {
    FairnessState s;
    s.uf = uf;
    for (double u : uf) {
        s.eligible.push_back(u > 0.0);
        s.metrics.push_back(0.5);
        s.raw.push_back(u);
    }
    s.skip = s.eligible_count() == 0;
    return s;
}

void check_distribution(const Lottery& l) {
    if (l.skip()) {
        return;
    }
    double total = 0.0;
    for (double p : l.probabilities) {
        CHECK(p >= 0.0);
        total += p;
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
}

}  // namespace

TEST_CASE("choice names parse and unknown ones list the valid names") {
    CHECK(parse_choice("least_misery") == ChoiceFunction::least_misery);
    CHECK(to_string(ChoiceFunction::allocation) == "allocation");
    try {
        parse_choice("borda");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        std::string what = e.what();
        for (auto name : {"fixed", "least_misery", "dynamic", "allocation"}) {
            CHECK(what.find(name) != std::string::npos);
        }
    }
}

TEST_CASE("fixed lottery is uniform over eligible features") {
    auto three = fixed_lottery({true, true, true});
    for (double p : three.probabilities) {
        CHECK(std::abs(p - 1.0 / 3.0) < 1e-15);
    }
    CHECK(fixed_lottery({true}).probabilities == std::vector<double>{1.0});
    CHECK(fixed_lottery({false, false}).skip());
    CHECK(fixed_lottery({true, false}).probabilities == std::vector<double>{1.0, 0.0});
}

TEST_CASE("least misery picks the largest unfairness, lowest index on ties") {
    CHECK(least_misery(state_from_uf({0.2, 0.6, 0.2})) == 1u);
    CHECK(least_misery(state_from_uf({0.5, 0.5})) == 0u);
    CHECK(least_misery(state_from_uf({1.0})) == 0u);
    CHECK_FALSE(least_misery(state_from_uf({0.0, 0.0})).has_value());
}

TEST_CASE("dynamic lottery is the unfairness vector") {
    CHECK(dynamic_lottery(state_from_uf({0.25, 0.75})).probabilities ==
          std::vector<double>{0.25, 0.75});
    CHECK(dynamic_lottery(state_from_uf({1.0})).probabilities == std::vector<double>{1.0});
    CHECK(dynamic_lottery(state_from_uf({0.0, 0.0})).skip());

    std::vector<double> equal{0.3, 0.3, 0.3};
    auto state = unfairness_vector(equal, 0.05);
    CHECK(dynamic_lottery(state) == fixed_lottery(state.eligible));
}

TEST_CASE("probabilistic serial hand examples") {
    std::vector<std::vector<std::size_t>> same{{0, 1}, {0, 1}};
    std::vector<double> ones{1.0, 1.0};
    auto a = probabilistic_serial(same, ones);
    CHECK(std::abs(a(0, 0) - 0.5) < 1e-12);
    CHECK(std::abs(a(1, 1) - 0.5) < 1e-12);

    std::vector<std::vector<std::size_t>> opposed{{0, 1}, {1, 0}};
    auto b = probabilistic_serial(opposed, ones);
    CHECK(b(0, 0) == 1.0);
    CHECK(b(0, 1) == 0.0);
    CHECK(b(1, 1) == 1.0);

    std::vector<double> skewed{0.5, 1.5};
    auto c = probabilistic_serial(same, skewed);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(std::abs(c(i, 0) - 0.25) < 1e-12);
        CHECK(std::abs(c(i, 1) - 0.75) < 1e-12);
    }

    std::vector<double> zero{0.0, 0.0};
    auto d = probabilistic_serial(same, zero);
    CHECK(d.row_sum(0) == 0.0);

    std::vector<std::vector<std::size_t>> not_a_permutation{{0, 0}};
    CHECK_THROWS(probabilistic_serial(not_a_permutation, ones));
    std::vector<double> negative{-1.0, 1.0};
    CHECK_THROWS(probabilistic_serial(same, negative));
}

TEST_CASE("probabilistic serial conserves capacity and treats equals equally") {
    RandomStream rng(99);
    for (int t = 0; t < 300; ++t) {
        std::size_t n = 1 + rng.below(6);
        std::size_t m = 1 + rng.below(5);
        std::vector<double> caps(m);
        for (auto& c : caps) {
            c = rng.uniform() < 0.2 ? 0.0 : 2.0 * rng.uniform();
        }
        std::vector<std::vector<std::size_t>> prefs(n, std::vector<std::size_t>(m));
        for (auto& p : prefs) {
            std::iota(p.begin(), p.end(), std::size_t{0});
            rng.shuffle(std::span(p));
        }
        auto a = probabilistic_serial(prefs, caps);
        double total_cap = std::accumulate(caps.begin(), caps.end(), 0.0);
        double quota = std::min(1.0, total_cap / static_cast<double>(n));
        double eaten = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            CHECK(a.column_sum(j) <= caps[j] + 1e-9);
        }
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(a.row_sum(i) <= quota + 1e-9);
            eaten += a.row_sum(i);
        }
        CHECK(std::abs(eaten - std::min(static_cast<double>(n) * quota, total_cap)) < 1e-9);
    }

    std::vector<std::vector<std::size_t>> same(4, {2, 0, 1});
    std::vector<double> caps{0.7, 1.1, 0.9};
    auto a = probabilistic_serial(same, caps);
    for (std::size_t i = 1; i < 4; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(std::abs(a(i, j) - a(0, j)) < 1e-12);
        }
    }
}

TEST_CASE("allocation lotteries") {
    std::vector<std::vector<std::size_t>> prefs{{0, 1}, {0, 1}};
    auto lotteries = allocation_lottery(state_from_uf({0.25, 0.75}), prefs, 2);
    REQUIRE(lotteries.size() == 2);
    for (const auto& l : lotteries) {
        CHECK(std::abs(l.probabilities[0] - 0.25) < 1e-12);
        CHECK(std::abs(l.probabilities[1] - 0.75) < 1e-12);
    }

    std::vector<std::vector<std::size_t>> three{{1, 0, 2}, {2, 1, 0}, {0, 2, 1}};
    auto single = allocation_lottery(state_from_uf({0.0, 1.0, 0.0}), three, 3);
    for (const auto& l : single) {
        CHECK(l == Lottery::degenerate(3, 1));
    }

    std::vector<std::vector<std::size_t>> same(5, {1, 0, 2});
    auto uniform = allocation_lottery(state_from_uf({1.0 / 3, 1.0 / 3, 1.0 / 3}), same, 5);
    for (const auto& l : uniform) {
        check_distribution(l);
        CHECK(l == uniform.front());
    }

    auto skipped = allocation_lottery(state_from_uf({0.0, 0.0}), prefs, 2);
    CHECK(skipped.front().skip());
}

TEST_CASE("sampling follows the lottery") {
    RandomStream rng(2024);
    CHECK(sample(Lottery::degenerate(3, 2), rng) == 2u);
    CHECK_FALSE(sample(Lottery::skip_all(3), rng).has_value());

    Lottery l{{0.25, 0.75}};
    std::size_t ones = 0;
    const std::size_t draws = 10000;
    for (std::size_t d = 0; d < draws; ++d) {
        ones += *sample(l, rng) == 1 ? 1 : 0;
    }
    CHECK(std::abs(static_cast<double>(ones) / draws - 0.75) < 0.02);
}
