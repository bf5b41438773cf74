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
#include <filesystem>

#include "doctest.h"
#include "fixtures.hpp"
#include "scruf/results.hpp"

using namespace scruf;
using namespace scruf::testing;

namespace {

std::vector<SimulationResult> two_runs() {
    auto world = small_world();
    return {simulate(world, ChoiceFunction::none), simulate(world, ChoiceFunction::dynamic)};
}

}  // namespace

TEST_CASE("trace and summary layout") {
    auto results = two_runs();
    auto trace = table_from(trace_csv(results));
    CHECK(trace.rows.size() == 400);
    CHECK(trace.header.front() == "algorithm");
    CHECK(trace.rows.front().front() == "base");

    auto summary = table_from(summary_csv(results));
    REQUIRE(summary.rows.size() == 2);
    CHECK(summary.header[1] == "ndcg");
    CHECK(summary.header[2] == "fairness");
    CHECK(summary.header[3] == "fairness_variance");
    CHECK(summary.rows[1][0] == "dynamic");
}

TEST_CASE("re-reading the trace recovers the summary") {
    auto results = two_runs();
    auto back = read_trace(table_from(trace_csv(results)));
    REQUIRE(back.size() == 2);
    for (std::size_t r = 0; r < 2; ++r) {
        CHECK(back[r].choice == results[r].choice);
        CHECK(std::abs(back[r].ndcg - results[r].ndcg) < 1e-9);
        CHECK(std::abs(back[r].fairness - results[r].fairness) < 1e-9);
        CHECK(std::abs(back[r].regret.variance - results[r].regret.variance) < 1e-9);
        for (std::size_t b = 0; b < results[r].trace.size(); ++b) {
            for (std::size_t j = 0; j < results[r].features.size(); ++j) {
                CHECK(std::abs(back[r].trace[b].metrics[j] - results[r].trace[b].metrics[j]) < 1e-9);
            }
        }
    }
    CHECK(summary_csv(back) == summary_csv(results));
}

TEST_CASE("results land on disk and unwritable targets fail") {
    auto results = two_runs();
    auto dir = std::filesystem::temp_directory_path() / "scruf_results_test";
    std::filesystem::remove_all(dir);
    write_results(results, dir);
    CHECK(std::filesystem::exists(dir / "trace.csv"));
    CHECK(std::filesystem::exists(dir / "summary.csv"));

    auto blocker = dir / "file";
    csv::write_atomically(blocker, "x");
    CHECK_THROWS(write_results(results, blocker / "sub"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("number formatting is finite and exact") {
    CHECK(csv::format_double(0.0) == "0");
    CHECK(csv::parse_double(csv::format_double(0.1 + 0.2)) == 0.1 + 0.2);
    CHECK_THROWS(csv::format_double(std::nan("")));
    CHECK(csv::split_line(" a ,\"b,c\",\"d\"\"e\"") == std::vector<std::string>{"a", "b,c", "d\"e"});
}
