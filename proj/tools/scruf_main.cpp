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

// scruf: command-line driver.
//
//   scruf generate [--config synth.ini] --out DIR [--seed N]
//   scruf simulate --config run.ini --out DIR [--seed N] [--choice NAME[,NAME...]|all]
//   scruf identify-protected --config run.ini [--out DIR] [--seed N]
//   scruf evaluate --trace DIR/trace.csv [--out DIR]
//
// When --out is omitted, SCRUF_OUT_DIR is used.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scruf/config.hpp"
#include "scruf/csv.hpp"
#include "scruf/pipeline.hpp"
#include "scruf/results.hpp"
#include "scruf/synthetic.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

fs::path output_dir(const std::string& flag, bool required) {
    if (!flag.empty()) {
        return flag;
    }
    if (const char* env = std::getenv("SCRUF_OUT_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    if (required) {
        throw scruf::ConfigError("no output directory: pass --out or set SCRUF_OUT_DIR");
    }
    return {};
}

std::vector<scruf::ChoiceFunction> parse_choices(const std::string& text,
                                                 scruf::ChoiceFunction fallback) {
    using scruf::ChoiceFunction;
    if (text.empty()) {
        return {fallback};
    }
    if (text == "all") {
        return {ChoiceFunction::none, ChoiceFunction::fixed, ChoiceFunction::least_misery,
                ChoiceFunction::dynamic, ChoiceFunction::allocation};
    }
    std::vector<ChoiceFunction> out;
    for (const auto& name : scruf::csv::split_line(text)) {
        out.push_back(scruf::parse_algorithm_label(name));
    }
    return out;
}

int cmd_generate(const std::string& config_path, const std::string& out_flag,
                 std::optional<std::uint64_t> seed) {
    scruf::SyntheticSpec spec;
    if (!config_path.empty()) {
        auto config = scruf::parse_config_file(config_path);
        if (!config.synthetic) {
            throw scruf::ConfigError(config_path + " has no [synthetic] section");
        }
        spec = *config.synthetic;
    }
    if (seed) {
        spec.seed = *seed;
    }
    auto out = output_dir(out_flag, true);
    auto data = scruf::generate_synthetic(spec);
    auto ini = scruf::write_synthetic(spec, data, out);
    std::cout << "wrote " << data.items.size() << " items and " << data.ratings.size()
              << " ratings; config at " << ini.string() << '\n';
    return 0;
}

scruf::RunConfig load_run_config(const std::string& path, std::optional<std::uint64_t> seed) {
    auto config = scruf::parse_config_file(path);
    if (config.dataset.items.empty() || config.dataset.ratings.empty()) {
        throw scruf::ConfigError("missing required key dataset.items or dataset.ratings");
    }
    if (seed) {
        config.simulation.seed = *seed;
        config.model.seed = *seed;
    }
    return config;
}

int cmd_simulate(const std::string& config_path, const std::string& out_flag,
                 std::optional<std::uint64_t> seed, const std::string& choice_text) {
    auto config = load_run_config(config_path, seed);
    auto out = output_dir(out_flag, true);
    auto choices = parse_choices(choice_text, config.simulation.choice);

    auto prepared = scruf::prepare(config);
    std::vector<scruf::SimulationResult> results;
    for (auto c : choices) {
        results.push_back(scruf::simulate(prepared, c));
        const auto& r = results.back();
        std::cout << scruf::algorithm_label(c) << ": ndcg=" << r.ndcg << " fairness=" << r.fairness
                  << " fairness_variance=" << r.regret.variance << '\n';
    }
    scruf::write_results(results, out);

    std::ostringstream manifest;
    manifest << "# resolved configuration for this run\n# seed: " << prepared.config.simulation.seed
             << "\n# algorithms:";
    for (auto c : choices) {
        manifest << ' ' << scruf::algorithm_label(c);
    }
    manifest << "\n\n" << scruf::to_config_text(prepared.config);
    scruf::csv::write_atomically(out / "run_manifest.ini", manifest.str());
    return 0;
}

int cmd_identify(const std::string& config_path, const std::string& out_flag,
                 std::optional<std::uint64_t> seed) {
    auto config = load_run_config(config_path, seed);
    auto prepared = scruf::prepare(config);
    std::ostringstream table;
    scruf::csv::write_row(table, {"feature", "protected_values", "lambda"});
    for (const auto& e : prepared.spec.entries()) {
        std::string values;
        for (auto v : e.protected_values) {
            if (!values.empty()) {
                values += '|';
            }
            values += prepared.catalog.schema()[e.feature_index].domain[v];
        }
        scruf::csv::write_row(table, {e.feature, values, scruf::csv::format_double(e.lambda)});
    }
    std::cout << table.str();
    auto out = output_dir(out_flag, false);
    if (!out.empty()) {
        fs::create_directories(out);
        scruf::csv::write_atomically(out / "protected.csv", table.str());
    }
    return 0;
}

int cmd_evaluate(const std::string& trace_path, const std::string& out_flag) {
    auto results = scruf::read_trace(scruf::csv::read_file(trace_path));
    if (results.empty()) {
        throw scruf::DataError(trace_path + " holds no trace rows");
    }
    auto summary = scruf::summary_csv(results);
    std::cout << summary;
    auto out = output_dir(out_flag, false);
    if (!out.empty()) {
        fs::create_directories(out);
        scruf::csv::write_atomically(out / "evaluation.csv", summary);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fairness-aware re-ranking simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_flag;
    std::string choice_text;
    std::string trace_path;
    std::optional<std::uint64_t> seed;

    auto* generate = app.add_subcommand("generate", "Write a synthetic dataset and config");
    generate->add_option("--config", config_path, "Config with a [synthetic] section");
    generate->add_option("--out", out_flag, "Output directory");
    generate->add_option("--seed", seed, "Override the generator seed");

    auto* simulate = app.add_subcommand("simulate", "Run the replay and write results");
    simulate->add_option("--config", config_path, "Run configuration")->required();
    simulate->add_option("--out", out_flag, "Output directory");
    simulate->add_option("--seed", seed, "Override the configured seed");
    simulate->add_option("--choice", choice_text,
                         "Choice function(s): fixed, least_misery, dynamic, allocation, none; "
                         "comma-separated or 'all'");

    auto* identify = app.add_subcommand("identify-protected",
                                        "Print the protected values the config resolves to");
    identify->add_option("--config", config_path, "Run configuration")->required();
    identify->add_option("--out", out_flag, "Also write protected.csv here");
    identify->add_option("--seed", seed, "Override the configured seed");

    auto* evaluate = app.add_subcommand("evaluate", "Summarise an existing trace.csv");
    evaluate->add_option("--trace", trace_path, "trace.csv to read")->required();
    evaluate->add_option("--out", out_flag, "Also write evaluation.csv here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            return cmd_generate(config_path, out_flag, seed);
        }
        if (simulate->parsed()) {
            return cmd_simulate(config_path, out_flag, seed, choice_text);
        }
        if (identify->parsed()) {
            return cmd_identify(config_path, out_flag, seed);
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(trace_path, out_flag);
        }
    } catch (const scruf::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const scruf::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
