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

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scruf/csv.hpp"
#include "scruf/simulator.hpp"

namespace scruf {

/// Row label for a run: the choice function name, or "base" for none.
std::string algorithm_label(ChoiceFunction choice);
ChoiceFunction parse_algorithm_label(std::string_view label);

/// trace.csv: one row per batch per run. Columns:
///   algorithm, batch_index, users, fixed_fallback, M_<f>..., omega_<f>...,
///   avg_regret, count_<f>..., count_skip, ndcg, ndcg_users, exposure_<f>...
std::string trace_csv(std::span<const SimulationResult> results);

/// summary.csv: one row per run. Columns:
///   algorithm, ndcg, fairness, fairness_variance, mean_regret, batches,
///   exposure_<f>..., selected_<f>..., skipped
std::string summary_csv(std::span<const SimulationResult> results);

/// Writes trace.csv and summary.csv atomically; throws std::runtime_error
/// when the directory cannot be created or written.
void write_results(std::span<const SimulationResult> results, const std::filesystem::path& out_dir);

/// Rebuilds per-run traces from trace.csv and recomputes the summaries.
std::vector<SimulationResult> read_trace(const csv::Table& table);

}  // namespace scruf
