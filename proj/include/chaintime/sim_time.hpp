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

#include <compare>
#include <cstdint>
#include <string>

namespace chaintime {

/// Signed span of simulated time in milliseconds.
using Millis = std::int64_t;

inline constexpr Millis kSecond = 1000;
inline constexpr Millis kMinute = 60 * kSecond;
inline constexpr Millis kHour = 60 * kMinute;
inline constexpr Millis kDay = 24 * kHour;

/// Instant on the simulation clock: milliseconds since the Unix epoch,
/// leap-second free.
struct SimTime {
    std::int64_t ms = 0;

    constexpr auto operator<=>(const SimTime&) const = default;

    static constexpr SimTime from_seconds(std::int64_t s) { return SimTime{s * kSecond}; }
};

constexpr SimTime operator+(SimTime t, Millis d) { return SimTime{t.ms + d}; }
constexpr SimTime operator-(SimTime t, Millis d) { return SimTime{t.ms - d}; }
constexpr Millis operator-(SimTime a, SimTime b) { return a.ms - b.ms; }
constexpr SimTime& operator+=(SimTime& t, Millis d) { t.ms += d; return t; }

struct CivilTime {
    int year = 1970;
    unsigned month = 1;  // 1..12
    unsigned day = 1;    // 1..31
    int hour = 0;
    int minute = 0;
    int second = 0;
    int millisecond = 0;
};

SimTime from_civil(const CivilTime& c);
CivilTime to_civil(SimTime t);

/// Number of days in a proleptic Gregorian month.
unsigned days_in_month(int year, unsigned month);

/// Shifts `t` by whole calendar months, clamping the day of month
/// (Jan 31 + 1 month = Feb 28/29). Time of day is preserved.
SimTime add_months(SimTime t, int months);

/// `YYYY-MM-DDThh:mm:ssZ`, with `.fff` appended only for non-zero milliseconds.
std::string format_utc(SimTime t);

}  // namespace chaintime
