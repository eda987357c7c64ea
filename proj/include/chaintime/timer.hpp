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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "chaintime/sim_time.hpp"

namespace chaintime {

/// Period of an anchored cycle: whole calendar months first, then a fixed span.
struct CalendarPeriod {
    int months = 0;
    Millis fixed = 0;

    bool operator==(const CalendarPeriod&) const = default;
};

struct DateTimer {
    SimTime instant;
    bool operator==(const DateTimer&) const = default;
};

struct DurationTimer {
    Millis length = 0;
    bool operator==(const DurationTimer&) const = default;
};

struct CycleAbsTimer {
    SimTime start;
    CalendarPeriod period;
    std::optional<int> repetitions;  // empty: unbounded
    bool operator==(const CycleAbsTimer&) const = default;
};

struct CycleRelTimer {
    Millis period = 0;
    std::optional<int> repetitions;
    bool operator==(const CycleRelTimer&) const = default;
};

using TimerSpec = std::variant<DateTimer, DurationTimer, CycleAbsTimer, CycleRelTimer>;

/// Parses the ISO-8601 subset used by timer events:
///   2020-12-24T12:00:00Z   date
///   P7D, PT1H30M           duration (D/H/M/S, plus W as seven days)
///   R/2020-01-01/P1M       cycle anchored at an instant (calendar months allowed)
///   R7/PT24H               cycle relative to enablement
/// Throws TimerParseError carrying the offending position.
TimerSpec parse_timer(std::string_view text);

/// Inverse of parse_timer up to structural equality. Spans longer than a day
/// use the day designator; one day or less is written in hours.
std::string format_timer(const TimerSpec& spec);

/// Throws Error(ParseError) when a programmatically built spec violates
/// period > 0, length >= 0 or repetitions >= 1.
void validate(const TimerSpec& spec);

bool is_cycle(const TimerSpec& spec);

/// Number of occurrences: 1 for dates and durations, empty for unbounded cycles.
std::optional<int> occurrences(const TimerSpec& spec);

/// Occurrence `k` (0-based). Relative specs are offset from `enablement`;
/// the first relative cycle occurrence is one period after enablement.
SimTime due_at(const TimerSpec& spec, SimTime enablement, std::size_t k);

/// The first min(occurrences, limit) due instants, strictly increasing.
std::vector<SimTime> due_times(const TimerSpec& spec, SimTime enablement, std::size_t limit);

/// One-line structured rendering, e.g. `CycleRel period_ms=86400000 repetitions=7`.
std::string describe(const TimerSpec& spec);

std::string format_span(Millis ms);

}  // namespace chaintime
