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

#include <ctime>
#include <random>

#include "chaintime/sim_time.hpp"

using namespace chaintime;

namespace {

// libc is the reference calendar here; the library has its own arithmetic.
std::int64_t libc_epoch(int y, int mo, int d, int h, int mi, int s) {
    std::tm tm{};
    tm.tm_year = y - 1900;
    tm.tm_mon = mo - 1;
    tm.tm_mday = d;
    tm.tm_hour = h;
    tm.tm_min = mi;
    tm.tm_sec = s;
    return static_cast<std::int64_t>(timegm(&tm));
}

}  // namespace

TEST_CASE("arithmetic on instants") {
    SimTime t{1000};
    CHECK((t + 500).ms == 1500);
    CHECK((t - 500).ms == 500);
    CHECK(SimTime{3000} - t == 2000);
    t += kSecond;
    CHECK(t == SimTime{2000});
    CHECK(SimTime::from_seconds(1608811200).ms == 1608811200000);
    CHECK(SimTime{1} < SimTime{2});
}

TEST_CASE("known civil instants") {
    CHECK(from_civil({2020, 12, 24, 12, 0, 0, 0}).ms == 1608811200000);
    CHECK(from_civil({1970, 1, 1}).ms == 0);
    CHECK(from_civil({2020, 1, 1}).ms == 1577836800000);
    CHECK(format_utc(SimTime{1608811200000}) == "2020-12-24T12:00:00Z");
    CHECK(format_utc(SimTime{1500}) == "1970-01-01T00:00:01.500Z");
}

TEST_CASE("month lengths") {
    CHECK(days_in_month(2020, 2) == 29);
    CHECK(days_in_month(2019, 2) == 28);
    CHECK(days_in_month(1900, 2) == 28);
    CHECK(days_in_month(2000, 2) == 29);
    CHECK(days_in_month(2021, 4) == 30);
    CHECK(days_in_month(2021, 12) == 31);
}

TEST_CASE("adding months clamps to the end of the month") {
    const SimTime jan31 = from_civil({2020, 1, 31, 8, 30, 0, 0});
    CHECK(format_utc(add_months(jan31, 1)) == "2020-02-29T08:30:00Z");
    CHECK(format_utc(add_months(jan31, 13)) == "2021-02-28T08:30:00Z");
    CHECK(format_utc(add_months(from_civil({2020, 11, 15}), 2)) == "2021-01-15T00:00:00Z");
}

TEST_CASE("civil conversion agrees with libc on random instants") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> year(1970, 2200), month(1, 12), hour(0, 23), minsec(0, 59);
    for (int n = 0; n < 20000; ++n) {
        const int y = year(rng), mo = month(rng);
        const int d = std::uniform_int_distribution<int>(1, static_cast<int>(days_in_month(y, mo)))(rng);
        const int h = hour(rng), mi = minsec(rng), s = minsec(rng);
        const SimTime t = from_civil({y, static_cast<unsigned>(mo), static_cast<unsigned>(d), h, mi, s, 0});
        REQUIRE(t.ms == libc_epoch(y, mo, d, h, mi, s) * 1000);
        const CivilTime back = to_civil(t);
        REQUIRE(back.year == y);
        REQUIRE(back.month == static_cast<unsigned>(mo));
        REQUIRE(back.day == static_cast<unsigned>(d));
        REQUIRE(back.hour == h);
        REQUIRE(back.minute == mi);
        REQUIRE(back.second == s);
    }
}
