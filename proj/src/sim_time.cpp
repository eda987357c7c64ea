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

#include "chaintime/sim_time.hpp"

#include <chrono>
#include <cstdio>

namespace chaintime {

namespace {

using std::chrono::day;
using std::chrono::month;
using std::chrono::sys_days;
using std::chrono::year;
using std::chrono::year_month_day;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

SimTime from_civil(const CivilTime& c) {
    const year_month_day ymd{year{c.year}, month{c.month}, day{c.day}};
    const std::int64_t days = sys_days{ymd}.time_since_epoch().count();
    return SimTime{days * kDay + c.hour * kHour + c.minute * kMinute +
                   c.second * kSecond + c.millisecond};
}

CivilTime to_civil(SimTime t) {
    const std::int64_t days = floor_div(t.ms, kDay);
    Millis rest = t.ms - days * kDay;
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    CivilTime c;
    c.year = static_cast<int>(ymd.year());
    c.month = static_cast<unsigned>(ymd.month());
    c.day = static_cast<unsigned>(ymd.day());
    c.hour = static_cast<int>(rest / kHour);
    rest %= kHour;
    c.minute = static_cast<int>(rest / kMinute);
    rest %= kMinute;
    c.second = static_cast<int>(rest / kSecond);
    c.millisecond = static_cast<int>(rest % kSecond);
    return c;
}

unsigned days_in_month(int y, unsigned m) {
    const std::chrono::year_month_day_last last{year{y}, std::chrono::month_day_last{month{m}}};
    return static_cast<unsigned>(last.day());
}

SimTime add_months(SimTime t, int months) {
    CivilTime c = to_civil(t);
    const std::int64_t index = static_cast<std::int64_t>(c.year) * 12 + (c.month - 1) + months;
    c.year = static_cast<int>(floor_div(index, 12));
    c.month = static_cast<unsigned>(index - static_cast<std::int64_t>(c.year) * 12) + 1;
    const unsigned last = days_in_month(c.year, c.month);
    if (c.day > last) c.day = last;
    return from_civil(c);
}

std::string format_utc(SimTime t) {
    const CivilTime c = to_civil(t);
    char buf[40];
    if (c.millisecond != 0) {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", c.year, c.month,
                      c.day, c.hour, c.minute, c.second, c.millisecond);
    } else {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", c.year, c.month, c.day,
                      c.hour, c.minute, c.second);
    }
    return buf;
}

}  // namespace chaintime
