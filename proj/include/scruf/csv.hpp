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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scruf::csv {

/// Comma-separated table with a header row. Fields may be double-quoted
/// (RFC 4180 style, "" escapes a quote). Surrounding whitespace on unquoted
/// fields is trimmed.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column, or nullopt.
    std::optional<std::size_t> column(std::string_view name) const;
};

Table read(std::istream& in);
Table read_file(const std::filesystem::path& path);

std::vector<std::string> split_line(std::string_view line);

/// Quotes a field only when needed.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double value);

double parse_double(std::string_view text);
long long parse_int(std::string_view text);

std::string_view trim(std::string_view s);

/// Writes `content` to a sibling temporary file, then renames it over `path`.
void write_atomically(const std::filesystem::path& path, std::string_view content);

}  // namespace scruf::csv
