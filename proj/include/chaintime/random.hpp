// Copyright 2026 The chaintime Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <utility>

#include "chaintime/sim_time.hpp"

namespace chaintime {

/// Seeded 64-bit generator with portable transforms. The standard library
/// distributions are implementation-defined, so traces would differ across
/// toolchains if they were used here.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on the closed range [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    double standard_normal();

    bool bernoulli(double p) { return uniform01() < p; }

    template <class RandomIt>
    void shuffle(RandomIt first, RandomIt last) {
        const auto n = last - first;
        for (auto i = n - 1; i > 0; --i) {
            const auto j = uniform_int(0, static_cast<std::int64_t>(i));
            using std::swap;
            swap(first[i], first[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_normal_;
};

/// Derives the seed of a named substream from the run seed. Each actor owns
/// one name, so adding an actor leaves every other actor's draws untouched.
std::uint64_t substream_seed(std::uint64_t run_seed, std::string_view name);

inline RandomStream substream(std::uint64_t run_seed, std::string_view name) {
    return RandomStream(substream_seed(run_seed, name));
}

/// Sampling distribution over integer milliseconds.
struct Distribution {
    enum class Kind { Constant, Uniform, Normal };

    Kind kind = Kind::Constant;
    Millis value = 0;  // constant
    Millis min = 0;    // uniform bounds; normal clamp
    Millis max = 0;
    double mean = 0;  // normal
    double stddev = 0;

    static Distribution constant(Millis v) { return {Kind::Constant, v, v, v, double(v), 0}; }
    static Distribution uniform(Millis lo, Millis hi) {
        return {Kind::Uniform, 0, lo, hi, (double(lo) + double(hi)) / 2, 0};
    }
    static Distribution normal(double mean, double stddev, Millis lo, Millis hi) {
        return {Kind::Normal, 0, lo, hi, mean, stddev};
    }

    Millis sample(RandomStream& rng) const;

    /// Smallest and largest value `sample` can return.
    Millis lower_bound() const { return kind == Kind::Constant ? value : min; }
    Millis upper_bound() const { return kind == Kind::Constant ? value : max; }

    bool operator==(const Distribution&) const = default;
};

}  // namespace chaintime
