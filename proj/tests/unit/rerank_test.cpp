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


#include "doctest.h"
#include "fixtures.hpp"
#include "scruf/rerank.hpp"

using namespace scruf;
using namespace scruf::testing;

namespace {

struct Pool {
    ItemCatalog catalog;
    SensitiveSpec spec;
    ProtectionMask mask;
    RecommendationList list;
};

// Item i is protected iff flags[i]; the pool lists items 0..n-1 with `scores`.
Pool make_pool(const std::vector<bool>& flags, const std::vector<double>& scores) {
    std::vector<ValueIndex> values;
    for (bool f : flags) {
        values.push_back(f ? 1 : 0);
    }
    Pool p{single_feature_catalog({"no", "yes"}, values), {}, {}, {}};
    std::vector<std::string> yes{"yes"};
    p.spec.add(p.catalog.schema(), "F", yes, 0.5);
    p.mask = ProtectionMask(p.catalog, p.spec);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        p.list.entries.push_back({i, scores[i]});
    }
    return p;
}

double slate_exposure(const RecommendationList& slate, const ProtectionMask& mask) {
    double n = 0;
    for (const auto& e : slate.entries) {
        n += mask(0, e.item) ? 1 : 0;
    }
    return n / static_cast<double>(slate.size());
}

}  // namespace

TEST_CASE("rho interpolates between accuracy and the protected indicator") {
    CHECK(rho({0, 1.0}, 0.7, true) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(rho({0, 0.0}, 0.7, true) == 1.0);
    CHECK(rho({0, 0.0}, 0.7, false) == 0.0);
    CHECK(rho({0, 0.5}, 0.4, true) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("hand-worked four-item pool") {
    auto p = make_pool({false, false, true, true}, {1.0, 0.8, 0.5, 0.0});
    auto slate = rerank({0, 0.6}, p.list, p.mask, 4);
    REQUIRE(slate.size() == 4);
    std::vector<ItemIndex> order;
    for (const auto& e : slate.entries) {
        order.push_back(e.item);
    }
    CHECK(order == std::vector<ItemIndex>{2, 0, 1, 3});
    CHECK(slate.entries[0].score == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(slate.entries[1].score == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(slate.entries[2].score == doctest::Approx(0.48).epsilon(1e-12));
    CHECK(slate.entries[3].score == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("lambda one is the identity and lambda zero fills with protected items") {
    auto p = make_pool({false, true, false, true, false, true, true}, {9, 8, 7, 6, 5, 4, 3});
    auto same = rerank({0, 1.0}, p.list, p.mask, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(same.entries[i].item == i);
    }
    auto fair = rerank({0, 0.0}, p.list, p.mask, 4);
    std::vector<ItemIndex> order;
    for (const auto& e : fair.entries) {
        order.push_back(e.item);
    }
    CHECK(order == std::vector<ItemIndex>{1, 3, 5, 6});
}

TEST_CASE("a flat pool keeps pool order") {
    auto p = make_pool({false, false, false}, {2, 2, 2});
    auto slate = rerank({0, 0.3}, p.list, p.mask, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(slate.entries[i].item == i);
    }
    CHECK(truncate(p.list, 2).size() == 2);
}

TEST_CASE("re-ranking keeps class order, never lowers exposure, and grows with lower lambda") {
    RandomStream rng(21);
    for (int t = 0; t < 300; ++t) {
        std::size_t n = 2 + rng.below(30);
        std::size_t k = 1 + rng.below(n);
        std::vector<bool> flags(n);
        std::vector<double> scores(n);
        double s = 10.0;
        for (std::size_t i = 0; i < n; ++i) {
            flags[i] = rng.uniform() < 0.3;
            s -= rng.uniform();
            scores[i] = s;
        }
        auto p = make_pool(flags, scores);
        double base = slate_exposure(truncate(p.list, k), p.mask);
        double previous = -1.0;
        for (double lambda : {1.0, 0.8, 0.6, 0.4, 0.2, 0.0}) {
            auto slate = rerank({0, lambda}, p.list, p.mask, k);
            double e = slate_exposure(slate, p.mask);
            CHECK(e >= base);
            CHECK(e >= previous);
            previous = e;
            for (std::size_t i = 1; i < slate.size(); ++i) {
                for (std::size_t j = 0; j < i; ++j) {
                    auto a = slate.entries[j].item;
                    auto b = slate.entries[i].item;
                    if (flags[a] == flags[b]) {
                        CHECK(a < b);
                    }
                }
            }
        }
    }
}
