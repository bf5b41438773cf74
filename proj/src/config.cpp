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

#include "scruf/config.hpp"

#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "scruf/csv.hpp"

namespace scruf {

void SyntheticSpec::validate() const {
    if (users < 1 || items < 1) {
        throw ConfigError("synthetic.users and synthetic.items must be at least 1");
    }
    if (features.empty()) {
        throw ConfigError("synthetic.features must list at least one feature");
    }
    std::set<std::string> names;
    for (const auto& f : features) {
        if (f.domain_size < 1) {
            throw ConfigError("synthetic feature '" + f.name + "' needs a domain of at least 1");
        }
        if (!names.insert(f.name).second) {
            throw ConfigError("synthetic feature '" + f.name + "' listed twice");
        }
    }
    for (const auto& s : sensitive) {
        if (!names.count(s)) {
            throw ConfigError("synthetic.sensitive names unknown feature '" + s + "'");
        }
    }
    if (!(density > 0.0 && density <= 1.0)) {
        throw ConfigError("synthetic.density must lie in (0, 1]");
    }
    if (!(skew >= 1.0)) {
        throw ConfigError("synthetic.skew must be at least 1");
    }
    if (!(noise >= 0.0)) {
        throw ConfigError("synthetic.noise must be non-negative");
    }
}

namespace {

struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
    std::string raw;
};

std::string where(const Entry& e) {
    return e.section + "." + e.key + " (line " + std::to_string(e.line) + ")";
}

// Drops a trailing comment: '#' or ';' preceded by whitespace and outside quotes.
std::string_view strip_comment(std::string_view line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (c == '"') {
            quoted = !quoted;
        } else if (!quoted && (c == '#' || c == ';') && i > 0 &&
                   (line[i - 1] == ' ' || line[i - 1] == '\t')) {
            return line.substr(0, i);
        }
    }
    return line;
}

std::string unquote(std::string_view v) {
    v = csv::trim(v);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"' &&
        v.substr(1, v.size() - 2).find('"') == std::string_view::npos) {
        return std::string(v.substr(1, v.size() - 2));
    }
    return std::string(v);
}

double as_double(const Entry& e) {
    try {
        return csv::parse_double(e.value);
    } catch (const DataError&) {
        throw ConfigError(where(e) + ": expected a number, got '" + e.value + "'");
    }
}

std::size_t as_count(const Entry& e) {
    long long v = 0;
    try {
        v = csv::parse_int(e.value);
    } catch (const DataError&) {
        throw ConfigError(where(e) + ": expected an integer, got '" + e.value + "'");
    }
    if (v < 0) {
        throw ConfigError(where(e) + ": must be non-negative");
    }
    return static_cast<std::size_t>(v);
}

std::uint64_t as_seed(const Entry& e) {
    return static_cast<std::uint64_t>(as_count(e));
}

bool as_bool(const Entry& e) {
    if (e.value == "true") {
        return true;
    }
    if (e.value == "false") {
        return false;
    }
    throw ConfigError(where(e) + ": expected true or false, got '" + e.value + "'");
}

std::vector<std::string> as_list(const Entry& e) {
    auto fields = csv::split_line(e.raw.empty() ? e.value : e.raw);
    std::vector<std::string> out;
    for (auto& f : fields) {
        if (!f.empty()) {
            out.push_back(std::move(f));
        }
    }
    return out;
}

double in_range(const Entry& e, double v, double lo, double hi, bool open_lo, bool open_hi) {
    bool ok = (open_lo ? v > lo : v >= lo) && (open_hi ? v < hi : v <= hi);
    if (!ok) {
        throw ConfigError(where(e) + ": value " + e.value + " is outside " + (open_lo ? "(" : "[") +
                          csv::format_double(lo) + ", " + csv::format_double(hi) +
                          (open_hi ? ")" : "]"));
    }
    return v;
}

[[noreturn]] void unknown_key(const Entry& e) {
    throw ConfigError("unknown key '" + e.key + "' in section [" + e.section + "] (line " +
                      std::to_string(e.line) + ")");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
    std::filesystem::path p(value);
    if (p.is_relative() && !base.empty()) {
        return base / p;
    }
    return p;
}

void apply_simulation(RunConfig& c, const Entry& e) {
    auto& s = c.simulation;
    if (e.key == "seed") {
        s.seed = as_seed(e);
        c.model.seed = s.seed;
    } else if (e.key == "batch_fraction") {
        s.batch_fraction = in_range(e, as_double(e), 0.0, 1.0, true, false);
    } else if (e.key == "window_batches") {
        s.window_batches = as_count(e);
        if (s.window_batches < 1) {
            throw ConfigError(where(e) + ": must be at least 1");
        }
    } else if (e.key == "display_length") {
        s.display_length = as_count(e);
        if (s.display_length < 1) {
            throw ConfigError(where(e) + ": must be at least 1");
        }
    } else if (e.key == "candidate_pool_size") {
        s.candidate_pool_size = as_count(e);
    } else if (e.key == "choice_function") {
        s.choice = parse_choice(e.value);
    } else if (e.key == "epsilon") {
        s.epsilon = in_range(e, as_double(e), 0.0, 1.0, true, true);
    } else if (e.key == "exclude_train") {
        s.exclude_train = as_bool(e);
    } else if (e.key == "arrivals_per_user") {
        s.arrivals_per_user = as_count(e);
    } else if (e.key == "threads") {
        s.threads = as_count(e);
    } else if (e.key == "train_fraction") {
        c.train_fraction = in_range(e, as_double(e), 0.0, 1.0, true, true);
    } else {
        unknown_key(e);
    }
}

void apply_model(RunConfig& c, const Entry& e) {
    auto& m = c.model;
    if (e.key == "factors") {
        m.factors = as_count(e);
        if (m.factors < 1) {
            throw ConfigError(where(e) + ": factor dimension must be at least 1");
        }
    } else if (e.key == "epochs") {
        m.epochs = as_count(e);
    } else if (e.key == "learning_rate") {
        m.learning_rate = as_double(e);
        if (!(m.learning_rate > 0.0)) {
            throw ConfigError(where(e) + ": must be positive");
        }
    } else if (e.key == "regularization") {
        m.regularization = as_double(e);
        if (!(m.regularization >= 0.0)) {
            throw ConfigError(where(e) + ": must be non-negative");
        }
    } else if (e.key == "init_scale") {
        m.init_scale = as_double(e);
    } else {
        unknown_key(e);
    }
}

void apply_dataset(RunConfig& c, const Entry& e, const std::filesystem::path& base) {
    auto& d = c.dataset;
    if (e.key == "items") {
        d.items = resolve(base, e.value);
    } else if (e.key == "ratings") {
        d.ratings = resolve(base, e.value);
    } else if (e.key == "scores") {
        d.scores = resolve(base, e.value);
    } else if (e.key == "rating_min") {
        d.scale.min = as_double(e);
    } else if (e.key == "rating_max") {
        d.scale.max = as_double(e);
    } else {
        unknown_key(e);
    }
}

void apply_trial(RunConfig& c, const Entry& e) {
    if (e.key == "users") {
        c.trial.users = as_count(e);
    } else if (e.key == "list_length") {
        c.trial.list_length = as_count(e);
    } else {
        unknown_key(e);
    }
}

void apply_synthetic(SyntheticSpec& s, const Entry& e) {
    if (e.key == "users") {
        s.users = as_count(e);
    } else if (e.key == "items") {
        s.items = as_count(e);
    } else if (e.key == "features") {
        s.features.clear();
        for (const auto& f : as_list(e)) {
            auto colon = f.find(':');
            if (colon == std::string::npos) {
                throw ConfigError(where(e) + ": features are written name:domain_size");
            }
            Entry sub = e;
            sub.value = f.substr(colon + 1);
            sub.raw.clear();
            s.features.push_back({std::string(csv::trim(f.substr(0, colon))), as_count(sub)});
        }
    } else if (e.key == "sensitive") {
        s.sensitive = as_list(e);
    } else if (e.key == "skew") {
        s.skew = as_double(e);
    } else if (e.key == "density") {
        s.density = as_double(e);
    } else if (e.key == "noise") {
        s.noise = as_double(e);
    } else if (e.key == "seed") {
        s.seed = as_seed(e);
    } else {
        unknown_key(e);
    }
}

SensitiveFeatureConfig& sensitive_entry(RunConfig& c, const std::string& feature) {
    for (auto& s : c.dataset.sensitive) {
        if (s.feature == feature) {
            return s;
        }
    }
    c.dataset.sensitive.push_back({feature, std::nullopt, 0.25, 0.5});
    return c.dataset.sensitive.back();
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    RunConfig config;
    std::string line;
    std::string section;
    int line_no = 0;
    std::set<std::string> seen_keys;
    std::set<std::string> sensitive_with_auto;

    while (std::getline(in, line)) {
        ++line_no;
        auto t = csv::trim(line);
        if (t.empty() || t.front() == '#' || t.front() == ';') {
            continue;
        }
        t = csv::trim(strip_comment(t));
        if (t.front() == '[') {
            if (t.back() != ']') {
                throw ConfigError("malformed section header on line " + std::to_string(line_no));
            }
            section = std::string(csv::trim(t.substr(1, t.size() - 2)));
            bool known = section == "simulation" || section == "model" || section == "dataset" ||
                         section == "trial" || section == "schema" || section == "synthetic" ||
                         (section.rfind("sensitive.", 0) == 0 && section.size() > 10);
            if (!known) {
                throw ConfigError("unknown section [" + section + "] on line " +
                                  std::to_string(line_no));
            }
            if (section == "synthetic" && !config.synthetic) {
                config.synthetic.emplace();
            }
            if (section == "schema" && !config.dataset.schema) {
                config.dataset.schema.emplace();
            }
            if (section.rfind("sensitive.", 0) == 0) {
                sensitive_entry(config, section.substr(10));
            }
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("expected key = value on line " + std::to_string(line_no));
        }
        if (section.empty()) {
            throw ConfigError("key outside of any section on line " + std::to_string(line_no));
        }
        Entry e{section, std::string(csv::trim(t.substr(0, eq))), unquote(t.substr(eq + 1)),
                line_no, std::string(csv::trim(t.substr(eq + 1)))};
        if (!seen_keys.insert(section + "\n" + e.key).second) {
            throw ConfigError("duplicate key " + where(e));
        }

        if (section == "simulation") {
            apply_simulation(config, e);
        } else if (section == "model") {
            apply_model(config, e);
        } else if (section == "dataset") {
            apply_dataset(config, e, base_dir);
        } else if (section == "trial") {
            apply_trial(config, e);
        } else if (section == "synthetic") {
            apply_synthetic(*config.synthetic, e);
        } else if (section == "schema") {
            config.dataset.schema->push_back({e.key, as_list(e)});
        } else {
            auto feature = section.substr(10);
            auto& s = sensitive_entry(config, feature);
            if (e.key == "protected") {
                s.protected_values = as_list(e);
            } else if (e.key == "auto_percentile") {
                s.auto_percentile = in_range(e, as_double(e), 0.0, 1.0, true, true);
                sensitive_with_auto.insert(feature);
            } else if (e.key == "lambda") {
                s.lambda = in_range(e, as_double(e), 0.0, 1.0, false, false);
            } else {
                unknown_key(e);
            }
            if (s.protected_values && sensitive_with_auto.count(feature)) {
                throw ConfigError("[" + section +
                                  "] sets both protected and auto_percentile; pick one");
            }
        }
    }

    if (config.synthetic) {
        config.synthetic->validate();
    } else {
        if (config.dataset.items.empty()) {
            throw ConfigError("missing required key dataset.items");
        }
        if (config.dataset.ratings.empty()) {
            throw ConfigError("missing required key dataset.ratings");
        }
    }
    if (!(config.dataset.scale.min < config.dataset.scale.max)) {
        throw ConfigError("dataset.rating_min must be below dataset.rating_max");
    }
    config.simulation.validate();
    return config;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read configuration file " + path.string());
    }
    return parse_config(in, path.parent_path());
}

namespace {

std::string list_text(const std::vector<std::string>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += csv::escape(values[i]);
    }
    return out;
}

}  // namespace

std::string to_config_text(const RunConfig& c) {
    std::ostringstream out;
    const auto& s = c.simulation;
    out << "[simulation]\n"
        << "seed = " << s.seed << '\n'
        << "batch_fraction = " << csv::format_double(s.batch_fraction) << '\n'
        << "window_batches = " << s.window_batches << '\n'
        << "display_length = " << s.display_length << '\n'
        << "candidate_pool_size = " << s.candidate_pool_size << '\n'
        << "choice_function = " << to_string(s.choice) << '\n'
        << "epsilon = " << csv::format_double(s.epsilon) << '\n'
        << "exclude_train = " << (s.exclude_train ? "true" : "false") << '\n'
        << "arrivals_per_user = " << s.arrivals_per_user << '\n'
        << "threads = " << s.threads << '\n'
        << "train_fraction = " << csv::format_double(c.train_fraction) << "\n\n";
    const auto& m = c.model;
    out << "[model]\n"
        << "factors = " << m.factors << '\n'
        << "epochs = " << m.epochs << '\n'
        << "learning_rate = " << csv::format_double(m.learning_rate) << '\n'
        << "regularization = " << csv::format_double(m.regularization) << '\n'
        << "init_scale = " << csv::format_double(m.init_scale) << "\n\n";
    const auto& d = c.dataset;
    out << "[dataset]\n";
    if (!d.items.empty()) {
        out << "items = " << d.items.string() << '\n';
    }
    if (!d.ratings.empty()) {
        out << "ratings = " << d.ratings.string() << '\n';
    }
    if (d.scores) {
        out << "scores = " << d.scores->string() << '\n';
    }
    out << "rating_min = " << csv::format_double(d.scale.min) << '\n'
        << "rating_max = " << csv::format_double(d.scale.max) << "\n\n";
    out << "[trial]\n"
        << "users = " << c.trial.users << '\n'
        << "list_length = " << c.trial.list_length << "\n\n";
    if (d.schema) {
        out << "[schema]\n";
        for (const auto& f : *d.schema) {
            out << f.name << " = " << list_text(f.domain) << '\n';
        }
        out << '\n';
    }
    for (const auto& e : d.sensitive) {
        out << "[sensitive." << e.feature << "]\n";
        if (e.protected_values) {
            out << "protected = " << list_text(*e.protected_values) << '\n';
        } else {
            out << "auto_percentile = " << csv::format_double(e.auto_percentile) << '\n';
        }
        out << "lambda = " << csv::format_double(e.lambda) << "\n\n";
    }
    if (c.synthetic) {
        const auto& y = *c.synthetic;
        std::vector<std::string> feats;
        for (const auto& f : y.features) {
            feats.push_back(f.name + ":" + std::to_string(f.domain_size));
        }
        out << "[synthetic]\n"
            << "users = " << y.users << '\n'
            << "items = " << y.items << '\n'
            << "features = " << list_text(feats) << '\n'
            << "sensitive = " << list_text(y.sensitive) << '\n'
            << "skew = " << csv::format_double(y.skew) << '\n'
            << "density = " << csv::format_double(y.density) << '\n'
            << "noise = " << csv::format_double(y.noise) << '\n'
            << "seed = " << y.seed << '\n';
    }
    return out.str();
}

}  // namespace scruf
