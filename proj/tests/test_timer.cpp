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

#include <doctest.h>

#include <random>

#include "chaintime/error.hpp"
#include "chaintime/timer.hpp"

using namespace chaintime;

namespace {

struct Failure {
    ErrorCode code;
    std::size_t position;
};

Failure failure(std::string_view text) {
    try {
        (void)parse_timer(text);
    } catch (const TimerParseError& e) {
        return {e.code(), e.position()};
    }
    FAIL("parsed: " << text);
    return {};
}

}  // namespace

TEST_CASE("the four reference strings") {
    const auto date = parse_timer("2020-12-24T12:00:00Z");
    REQUIRE(std::holds_alternative<DateTimer>(date));
    CHECK(std::get<DateTimer>(date).instant.ms == 1608811200000);
    CHECK(std::get<DateTimer>(date).instant.ms / 1000 == 1608811200);

    const auto dur = parse_timer("P7D");
    REQUIRE(std::holds_alternative<DurationTimer>(dur));
    CHECK(std::get<DurationTimer>(dur).length == 604800000);

    const auto rel = parse_timer("R7/PT24H");
    REQUIRE(std::holds_alternative<CycleRelTimer>(rel));
    CHECK(std::get<CycleRelTimer>(rel).period == 86400000);
    CHECK(std::get<CycleRelTimer>(rel).repetitions == 7);

    const auto abs = parse_timer("R/2020-01-01/P1M");
    REQUIRE(std::holds_alternative<CycleAbsTimer>(abs));
    CHECK(std::get<CycleAbsTimer>(abs).start.ms == 1577836800000);
    CHECK(std::get<CycleAbsTimer>(abs).period == CalendarPeriod{1, 0});
    CHECK_FALSE(std::get<CycleAbsTimer>(abs).repetitions);
}

TEST_CASE("formatting round-trips") {
    CHECK(format_timer(DurationTimer{604800000}) == "P7D");
    CHECK(format_timer(CycleRelTimer{86400000, 7}) == "R7/PT24H");
    CHECK(format_timer(DateTimer{SimTime{1608811200000}}) == "2020-12-24T12:00:00Z");
    for (auto s : {"2020-12-24T12:00:00Z", "P7D", "R7/PT24H", "R/2020-01-01/P1M"}) {
        const auto spec = parse_timer(s);
        CHECK(parse_timer(format_timer(spec)) == spec);
    }
    CHECK(format_timer(parse_timer("R/2020-01-01/P1M")) == "R/2020-01-01T00:00:00Z/P1M");
    CHECK(format_timer(parse_timer("P1W")) == "P7D");
    CHECK(format_timer(parse_timer("PT1.5S")) == "PT1.5S");
}

TEST_CASE("due schedules") {
    CHECK(due_times(DurationTimer{604800000}, SimTime{0}, 10) == std::vector<SimTime>{SimTime{604800000}});
    const auto rel = due_times(CycleRelTimer{86400000, 7}, SimTime{1000}, 100);
    REQUIRE(rel.size() == 7);
    for (std::size_t k = 0; k < 7; ++k) CHECK(rel[k].ms == 1000 + static_cast<std::int64_t>(k + 1) * 86400000);
    // Hand-computed epoch values: 2020 is a leap year, so February has 29 days.
    const auto monthly = due_times(parse_timer("R/2020-01-01/P1M"), SimTime{0}, 3);
    CHECK(monthly == std::vector<SimTime>{SimTime{1577836800000}, SimTime{1580515200000}, SimTime{1583020800000}});
    CHECK(due_at(parse_timer("2020-12-24T12:00:00Z"), SimTime{5}, 0).ms == 1608811200000);
    CHECK(occurrences(parse_timer("R7/PT24H")) == 7);
    CHECK_FALSE(occurrences(parse_timer("R/PT1H")));
    CHECK(occurrences(parse_timer("P7D")) == 1);
    CHECK(is_cycle(parse_timer("R/PT1H")));
    CHECK_FALSE(is_cycle(parse_timer("P7D")));
}

TEST_CASE("monthly cycles clamp to the end of the month") {
    const auto s = due_times(parse_timer("R3/2020-01-31/P1M"), SimTime{0}, 10);
    REQUIRE(s.size() == 3);
    CHECK(format_span(s[1] - s[0]) == "P29D");
    CHECK(s[1].ms == 1582934400000);  // 2020-02-29
    CHECK(s[2].ms == 1585612800000);  // 2020-03-31
}

TEST_CASE("malformed input reports the offending position") {
    CHECK(failure("").code == ErrorCode::ParseError);
    const auto bad_unit = failure("P7X");
    CHECK(bad_unit.code == ErrorCode::ParseError);
    CHECK(bad_unit.position == 2);
    const auto month = failure("2020-13-01T00:00:00Z");
    CHECK(month.code == ErrorCode::ParseError);
    CHECK(month.position == 5);
    CHECK(failure("R0/PT1H").position == 1);
    CHECK(failure("PT1H7D").code == ErrorCode::ParseError);
    CHECK(failure("P7D ").code == ErrorCode::ParseError);
    CHECK(failure("R/PT0S").code == ErrorCode::ParseError);
}

TEST_CASE("valid but unsupported forms") {
    const auto offset = failure("2020-12-24T12:00:00+01:00");
    CHECK(offset.code == ErrorCode::UnsupportedFeature);
    CHECK(offset.position == 19);
    CHECK(failure("P1Y2M").code == ErrorCode::UnsupportedFeature);
}

TEST_CASE("property: random specs survive a format/parse round trip") {
    std::mt19937_64 rng(23);
    auto pick = [&](std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
    };
    for (int n = 0; n < 5000; ++n) {
        TimerSpec spec;
        switch (n % 4) {
            case 0: spec = DateTimer{SimTime{pick(0, 4102444800LL) * 1000 + pick(0, 999)}}; break;
            case 1: spec = DurationTimer{pick(0, 400 * 86400000LL)}; break;
            case 2: {
                std::optional<int> reps;
                if (pick(0, 1)) reps = static_cast<int>(pick(1, 1000));
                spec = CycleRelTimer{pick(1, 90 * 86400000LL), reps};
                break;
            }
            default: {
                std::optional<int> reps;
                if (pick(0, 1)) reps = static_cast<int>(pick(1, 1000));
                CalendarPeriod p = pick(0, 1) ? CalendarPeriod{static_cast<int>(pick(1, 24)), 0}
                                              : CalendarPeriod{0, pick(1, 30) * 86400000LL + pick(0, 86399) * 1000};
                spec = CycleAbsTimer{SimTime{pick(0, 4102444800LL) * 1000}, p, reps};
            }
        }
        const std::string text = format_timer(spec);
        INFO(text);
        REQUIRE(parse_timer(text) == spec);
    }
}
