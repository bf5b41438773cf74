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

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace scruf {

/// Seeded random stream. Every draw is computed from raw 64-bit engine output
/// so results do not depend on the standard library's distribution classes.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound);

    /// Standard normal via Box-Muller.
    double normal();

    template <typename T>
    void shuffle(std::span<T> values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Stable 64-bit FNV-1a hash, used to name substreams.
std::uint64_t hash_name(std::string_view name);

/// Derives an independent seed from a root seed and a substream name plus
/// optional integer coordinates (batch, user, ...).
std::uint64_t derive_seed(std::uint64_t root, std::string_view name, std::uint64_t a = 0,
                          std::uint64_t b = 0);

inline RandomStream substream(std::uint64_t root, std::string_view name, std::uint64_t a = 0,
                              std::uint64_t b = 0) {
    return RandomStream(derive_seed(root, name, a, b));
}

}  // namespace scruf
