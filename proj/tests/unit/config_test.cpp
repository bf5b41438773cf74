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


#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "scruf/config.hpp"

using namespace scruf;

namespace {

RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "/data");
}

std::string error_of(const std::string& text) {
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("a minimal config takes the defaults") {
    auto c = parse("[dataset]\nitems = items.csv\nratings = ratings.csv\n");
    CHECK(c.dataset.items == "/data/items.csv");
    CHECK(c.dataset.ratings == "/data/ratings.csv");
    CHECK(c.simulation.epsilon == 0.05);
    CHECK(c.simulation.batch_fraction == 0.005);
    CHECK(c.simulation.window_batches == 20);
    CHECK(c.simulation.display_length == 10);
    CHECK(c.simulation.choice == ChoiceFunction::fixed);
    CHECK(c.dataset.sensitive.empty());
}

TEST_CASE("sensitive sections") {
    auto c = parse(
        "[dataset]\nitems = /abs/items.csv\nratings = r.csv\n"
        "[sensitive.Region]\nprotected = Africa, \"India, North\"\n"
        "[sensitive.Gender]\nlambda = 0.25\n");
    REQUIRE(c.dataset.sensitive.size() == 2);
    CHECK(c.dataset.items == "/abs/items.csv");
    CHECK(*c.dataset.sensitive[0].protected_values ==
          std::vector<std::string>{"Africa", "India, North"});
    CHECK(c.dataset.sensitive[0].lambda == 0.5);
    CHECK_FALSE(c.dataset.sensitive[1].protected_values.has_value());
    CHECK(c.dataset.sensitive[1].lambda == 0.25);
}

TEST_CASE("trailing comments are ignored outside quotes") {
    auto c = parse(
        "[simulation]   # replay\nepsilon = 0.1  ; tolerance\n"
        "[dataset]\nitems = i.csv # items\nratings = r.csv\n"
        "[schema]\nLang = C#, \"F #2\"\n");
    CHECK(c.simulation.epsilon == 0.1);
    CHECK(c.dataset.items == "/data/i.csv");
    CHECK(c.dataset.schema->front().domain == std::vector<std::string>{"C#", "F #2"});
}

TEST_CASE("bad values name the offending key") {
    const std::string paths = "[dataset]\nitems = a\nratings = b\n";
    CHECK(error_of(paths + "[sensitive.Region]\nlambda = 1.3\n").find("lambda") != std::string::npos);
    auto borda = error_of(paths + "[simulation]\nchoice_function = borda\n");
    CHECK(borda.find("least_misery") != std::string::npos);
    CHECK(error_of(paths + "[simulation]\nwindow = 3\n").find("window") != std::string::npos);
    CHECK(error_of(paths + "[simulation]\nepsilon = 0\n").find("epsilon") != std::string::npos);
    CHECK(error_of(paths + "[simulation]\nseed = 1\nseed = 2\n").find("seed") != std::string::npos);
    CHECK(error_of(paths + "[weights]\nx = 1\n").find("weights") != std::string::npos);
    CHECK(error_of(paths + "[sensitive.R]\nprotected = a\nauto_percentile = 0.3\n") != "");
    CHECK(error_of("[simulation]\nseed = 3\n").find("dataset") != std::string::npos);
}

TEST_CASE("the serialised form parses back to the same settings") {
    auto c = parse(
        "# run\n[simulation]\nseed = 17\nepsilon = 0.1\nchoice_function = allocation\n"
        "[dataset]\nitems = i.csv\nratings = r.csv\n"
        "[schema]\nRegion = Africa, India\n"
        "[sensitive.Region]\nprotected = India\nlambda = 0.75\n");
    auto again = parse(to_config_text(c));
    CHECK(again.simulation.seed == 17);
    CHECK(again.model.seed == 17);
    CHECK(again.simulation.epsilon == 0.1);
    CHECK(again.simulation.choice == ChoiceFunction::allocation);
    CHECK(again.dataset.schema->front().domain == std::vector<std::string>{"Africa", "India"});
    CHECK(again.dataset.sensitive.front().lambda == 0.75);
    CHECK(to_config_text(again) == to_config_text(c));
}
