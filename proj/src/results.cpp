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

#include "scruf/results.hpp"

#include <algorithm>
#include <sstream>

namespace scruf {

namespace {

const std::vector<std::string>& shared_features(std::span<const SimulationResult> results) {
    static const std::vector<std::string> none;
    if (results.empty()) {
        return none;
    }
    for (const auto& r : results) {
        if (r.features != results.front().features) {
            throw std::invalid_argument("runs written together must share sensitive features");
        }
    }
    return results.front().features;
}

std::vector<std::string> prefixed(std::string_view prefix, const std::vector<std::string>& names) {
    std::vector<std::string> out;
    for (const auto& n : names) {
        out.push_back(std::string(prefix) + n);
    }
    return out;
}

void append(std::vector<std::string>& to, const std::vector<std::string>& from) {
    to.insert(to.end(), from.begin(), from.end());
}

}  // namespace

std::string algorithm_label(ChoiceFunction choice) {
    return choice == ChoiceFunction::none ? "base" : std::string(to_string(choice));
}

ChoiceFunction parse_algorithm_label(std::string_view label) {
    if (label == "base") {
        return ChoiceFunction::none;
    }
    return parse_choice(label);
}

std::string trace_csv(std::span<const SimulationResult> results) {
    const auto& features = shared_features(results);
    std::ostringstream out;
    std::vector<std::string> header{"algorithm", "batch_index", "users", "fixed_fallback"};
    append(header, prefixed("M_", features));
    append(header, prefixed("omega_", features));
    header.push_back("avg_regret");
    append(header, prefixed("count_", features));
    header.insert(header.end(), {"count_skip", "ndcg", "ndcg_users"});
    append(header, prefixed("exposure_", features));
    csv::write_row(out, header);

    for (const auto& result : results) {
        auto label = algorithm_label(result.choice);
        for (const auto& row : result.trace) {
            std::vector<std::string> f{label, std::to_string(row.batch_index),
                                       std::to_string(row.users), row.fixed_fallback ? "1" : "0"};
            for (double m : row.metrics) {
                f.push_back(csv::format_double(m));
            }
            for (double w : row.regret.omega) {
                f.push_back(csv::format_double(w));
            }
            f.push_back(csv::format_double(row.regret.average));
            for (auto c : row.chosen) {
                f.push_back(std::to_string(c));
            }
            f.push_back(std::to_string(row.skipped));
            f.push_back(csv::format_double(row.ndcg));
            f.push_back(std::to_string(row.ndcg_users));
            for (double e : row.exposure) {
                f.push_back(csv::format_double(e));
            }
            csv::write_row(out, f);
        }
    }
    return out.str();
}

std::string summary_csv(std::span<const SimulationResult> results) {
    const auto& features = shared_features(results);
    std::ostringstream out;
    std::vector<std::string> header{"algorithm",   "ndcg",        "fairness",
                                    "fairness_variance", "mean_regret", "batches"};
    append(header, prefixed("exposure_", features));
    append(header, prefixed("selected_", features));
    header.push_back("skipped");
    csv::write_row(out, header);
    for (const auto& r : results) {
        std::vector<std::string> f{algorithm_label(r.choice),
                                   csv::format_double(r.ndcg),
                                   csv::format_double(r.fairness),
                                   csv::format_double(r.regret.variance),
                                   csv::format_double(r.regret.mean),
                                   std::to_string(r.trace.size())};
        for (double e : r.exposure) {
            f.push_back(csv::format_double(e));
        }
        for (auto c : r.chosen) {
            f.push_back(std::to_string(c));
        }
        f.push_back(std::to_string(r.skipped));
        csv::write_row(out, f);
    }
    return out.str();
}

void write_results(std::span<const SimulationResult> results, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir)) {
        throw std::runtime_error("cannot create output directory " + out_dir.string());
    }
    csv::write_atomically(out_dir / "trace.csv", trace_csv(results));
    csv::write_atomically(out_dir / "summary.csv", summary_csv(results));
}

std::vector<SimulationResult> read_trace(const csv::Table& table) {
    std::vector<std::string> features;
    for (const auto& h : table.header) {
        if (h.rfind("M_", 0) == 0) {
            features.push_back(h.substr(2));
        }
    }
    auto col = [&](const std::string& name) {
        auto c = table.column(name);
        if (!c) {
            throw DataError("trace is missing column '" + name + "'");
        }
        return *c;
    };
    auto algorithm = col("algorithm");
    auto batch = col("batch_index");
    auto users = col("users");
    auto fallback = col("fixed_fallback");
    auto avg = col("avg_regret");
    auto skip = col("count_skip");
    auto ndcg_col = col("ndcg");
    auto ndcg_users = col("ndcg_users");
    std::vector<std::size_t> m_cols, w_cols, c_cols, e_cols;
    for (const auto& f : features) {
        m_cols.push_back(col("M_" + f));
        w_cols.push_back(col("omega_" + f));
        c_cols.push_back(col("count_" + f));
        e_cols.push_back(col("exposure_" + f));
    }

    std::vector<SimulationResult> results;
    std::vector<std::string> labels;
    for (const auto& row : table.rows) {
        const auto& label = row[algorithm];
        auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end()) {
            labels.push_back(label);
            SimulationResult r;
            r.choice = parse_algorithm_label(label);
            r.features = features;
            results.push_back(std::move(r));
            it = labels.end() - 1;
        }
        auto& result = results[static_cast<std::size_t>(it - labels.begin())];
        BatchTrace t;
        t.batch_index = static_cast<std::size_t>(csv::parse_int(row[batch]));
        t.users = static_cast<std::size_t>(csv::parse_int(row[users]));
        t.fixed_fallback = csv::parse_int(row[fallback]) != 0;
        for (std::size_t j = 0; j < features.size(); ++j) {
            t.metrics.push_back(csv::parse_double(row[m_cols[j]]));
            t.regret.omega.push_back(csv::parse_double(row[w_cols[j]]));
            t.chosen.push_back(static_cast<std::size_t>(csv::parse_int(row[c_cols[j]])));
            t.exposure.push_back(csv::parse_double(row[e_cols[j]]));
        }
        t.regret.batch_index = t.batch_index;
        t.regret.average = csv::parse_double(row[avg]);
        t.skipped = static_cast<std::size_t>(csv::parse_int(row[skip]));
        t.ndcg = csv::parse_double(row[ndcg_col]);
        t.ndcg_users = static_cast<std::size_t>(csv::parse_int(row[ndcg_users]));
        result.trace.push_back(std::move(t));
    }
    for (auto& r : results) {
        summarize(r);
    }
    return results;
}

}  // namespace scruf
