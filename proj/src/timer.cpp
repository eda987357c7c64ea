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

#include "chaintime/timer.hpp"

#include <cstdint>
#include <limits>

#include "chaintime/error.hpp"

namespace chaintime {

namespace {

constexpr Millis kWeek = 7 * kDay;

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    bool done() const { return pos_ >= text_.size(); }
    std::size_t pos() const { return pos_; }
    char peek() const { return done() ? '\0' : text_[pos_]; }
    bool peek_digit() const { return !done() && text_[pos_] >= '0' && text_[pos_] <= '9'; }
    void advance() { ++pos_; }

    bool accept(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    void expect(char c, const char* what) {
        if (!accept(c)) fail(std::string("expected ") + what);
    }

    [[noreturn]] void fail(const std::string& reason) const {
        throw TimerParseError(ErrorCode::ParseError, pos_, reason);
    }
    [[noreturn]] void unsupported(const std::string& reason) const {
        throw TimerParseError(ErrorCode::UnsupportedFeature, pos_, reason);
    }

    std::int64_t number(const char* what) {
        if (!peek_digit()) fail(std::string("expected ") + what);
        std::int64_t v = 0;
        while (peek_digit()) {
            const int d = text_[pos_] - '0';
            if (v > (std::numeric_limits<std::int64_t>::max() - d) / 10) fail("number too large");
            v = v * 10 + d;
            ++pos_;
        }
        return v;
    }

    int fixed_digits(int count, const char* what) {
        int v = 0;
        for (int i = 0; i < count; ++i) {
            if (!peek_digit()) fail(std::string("expected ") + what);
            v = v * 10 + (text_[pos_] - '0');
            ++pos_;
        }
        return v;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

Millis checked_mul(const Cursor& cur, std::int64_t a, std::int64_t b) {
    if (a != 0 && b > std::numeric_limits<std::int64_t>::max() / a) cur.fail("duration too large");
    return a * b;
}

Millis checked_add(const Cursor& cur, Millis a, Millis b) {
    if (a > std::numeric_limits<std::int64_t>::max() - b) cur.fail("duration too large");
    return a + b;
}

SimTime parse_datetime(Cursor& cur) {
    const std::size_t start = cur.pos();
    CivilTime c;
    c.year = cur.fixed_digits(4, "four-digit year");
    cur.expect('-', "'-' after year");
    c.month = static_cast<unsigned>(cur.fixed_digits(2, "two-digit month"));
    cur.expect('-', "'-' after month");
    c.day = static_cast<unsigned>(cur.fixed_digits(2, "two-digit day"));
    if (c.month < 1 || c.month > 12) {
        throw TimerParseError(ErrorCode::ParseError, start + 5, "month out of range");
    }
    if (c.day < 1 || c.day > days_in_month(c.year, c.month)) {
        throw TimerParseError(ErrorCode::ParseError, start + 8, "day out of range");
    }
    if (cur.accept('T')) {
        c.hour = cur.fixed_digits(2, "two-digit hour");
        cur.expect(':', "':' after hour");
        c.minute = cur.fixed_digits(2, "two-digit minute");
        cur.expect(':', "':' after minute");
        const std::size_t sec_pos = cur.pos();
        c.second = cur.fixed_digits(2, "two-digit second");
        if (cur.accept('.')) {
            int digits = 0;
            int frac = 0;
            while (cur.peek_digit()) {
                if (digits == 3) cur.unsupported("sub-millisecond precision");
                frac = frac * 10 + (cur.peek() - '0');
                cur.advance();
                ++digits;
            }
            if (digits == 0) cur.fail("expected fraction digits");
            while (digits++ < 3) frac *= 10;
            c.millisecond = frac;
        }
        if (c.hour > 23) throw TimerParseError(ErrorCode::ParseError, sec_pos - 6, "hour out of range");
        if (c.minute > 59) throw TimerParseError(ErrorCode::ParseError, sec_pos - 3, "minute out of range");
        if (c.second == 60) {
            throw TimerParseError(ErrorCode::UnsupportedFeature, sec_pos,
                                  "leap second instants are not representable");
        }
        if (c.second > 59) throw TimerParseError(ErrorCode::ParseError, sec_pos, "second out of range");
        if (cur.peek() == '+' || cur.peek() == '-') cur.unsupported("UTC offsets other than Z");
        cur.expect('Z', "'Z' (UTC designator)");
    }
    return from_civil(c);
}

struct ParsedPeriod {
    int months = 0;
    Millis fixed = 0;
};

// Designators must appear in ISO order and at most once.
ParsedPeriod parse_period(Cursor& cur) {
    cur.expect('P', "'P'");
    ParsedPeriod p;
    bool any = false;
    int rank = 0;  // Y=1 M=2 W=3 D=4
    while (cur.peek_digit()) {
        const std::size_t at = cur.pos();
        const std::int64_t n = cur.number("number");
        int r = 0;
        switch (cur.peek()) {
            case 'Y': r = 1; break;
            case 'M': r = 2; break;
            case 'W': r = 3; break;
            case 'D': r = 4; break;
            case '.': cur.unsupported("fractional date components");
            default: cur.fail("expected designator Y, M, W or D");
        }
        if (r <= rank) throw TimerParseError(ErrorCode::ParseError, cur.pos(), "designator out of order");
        rank = r;
        cur.advance();
        if (r == 1 || r == 2) {
            const std::int64_t months = r == 1 ? checked_mul(cur, n, 12) : n;
            if (months + p.months > std::numeric_limits<int>::max()) {
                throw TimerParseError(ErrorCode::ParseError, at, "period too large");
            }
            p.months += static_cast<int>(months);
        } else {
            p.fixed = checked_add(cur, p.fixed, checked_mul(cur, n, r == 3 ? kWeek : kDay));
        }
        any = true;
    }
    if (cur.accept('T')) {
        bool any_time = false;
        rank = 0;  // H=1 M=2 S=3
        while (cur.peek_digit()) {
            const std::int64_t n = cur.number("number");
            Millis frac = 0;
            bool has_frac = false;
            if (cur.accept('.')) {
                int digits = 0;
                while (cur.peek_digit()) {
                    if (digits == 3) cur.unsupported("sub-millisecond precision");
                    frac = frac * 10 + (cur.peek() - '0');
                    cur.advance();
                    ++digits;
                }
                if (digits == 0) cur.fail("expected fraction digits");
                while (digits++ < 3) frac *= 10;
                has_frac = true;
            }
            int r = 0;
            Millis unit = 0;
            switch (cur.peek()) {
                case 'H': r = 1; unit = kHour; break;
                case 'M': r = 2; unit = kMinute; break;
                case 'S': r = 3; unit = kSecond; break;
                default: cur.fail("expected designator H, M or S");
            }
            if (has_frac && r != 3) cur.unsupported("fractions on hours or minutes");
            if (r <= rank) cur.fail("designator out of order");
            rank = r;
            cur.advance();
            p.fixed = checked_add(cur, p.fixed, checked_add(cur, checked_mul(cur, n, unit), frac));
            any_time = true;
        }
        if (!any_time) cur.fail("expected time components after 'T'");
        any = true;
    }
    if (!any) cur.fail("empty duration");
    return p;
}

Millis fixed_only(Cursor& cur, std::size_t at, const ParsedPeriod& p) {
    if (p.months != 0) {
        throw TimerParseError(ErrorCode::UnsupportedFeature, at,
                              "calendar years/months are only supported in anchored cycles");
    }
    (void)cur;
    return p.fixed;
}

void expect_end(const Cursor& cur) {
    if (!cur.done()) cur.fail("unexpected trailing characters");
}

}  // namespace

TimerSpec parse_timer(std::string_view text) {
    Cursor cur(text);
    if (cur.done()) cur.fail("empty timer");
    if (cur.accept('R')) {
        std::optional<int> reps;
        if (cur.peek_digit()) {
            const std::size_t at = cur.pos();
            const std::int64_t n = cur.number("repetition count");
            if (n < 1 || n > std::numeric_limits<int>::max()) {
                throw TimerParseError(ErrorCode::ParseError, at, "repetition count must be >= 1");
            }
            reps = static_cast<int>(n);
        }
        cur.expect('/', "'/' after repetitions");
        const std::size_t at = cur.pos();
        if (cur.peek() == 'P') {
            const ParsedPeriod p = parse_period(cur);
            if (cur.peek() == '/') cur.unsupported("cycles anchored at their end");
            expect_end(cur);
            const Millis period = fixed_only(cur, at, p);
            if (period <= 0) throw TimerParseError(ErrorCode::ParseError, at, "period must be positive");
            return CycleRelTimer{period, reps};
        }
        const SimTime start = parse_datetime(cur);
        cur.expect('/', "'/' after cycle start");
        const std::size_t period_at = cur.pos();
        const ParsedPeriod p = parse_period(cur);
        expect_end(cur);
        if (p.months <= 0 && p.fixed <= 0) {
            throw TimerParseError(ErrorCode::ParseError, period_at, "period must be positive");
        }
        return CycleAbsTimer{start, CalendarPeriod{p.months, p.fixed}, reps};
    }
    if (cur.peek() == 'P') {
        const ParsedPeriod p = parse_period(cur);
        expect_end(cur);
        return DurationTimer{fixed_only(cur, 0, p)};
    }
    if (cur.peek_digit()) {
        const SimTime t = parse_datetime(cur);
        expect_end(cur);
        return DateTimer{t};
    }
    cur.fail("expected a date, a duration (P...) or a cycle (R...)");
}

std::string format_span(Millis ms) {
    if (ms == 0) return "PT0S";
    std::string out = "P";
    if (ms > kDay) {
        out += std::to_string(ms / kDay) + "D";
        ms %= kDay;
    }
    if (ms == 0) return out;
    out += "T";
    if (ms >= kHour) {
        out += std::to_string(ms / kHour) + "H";
        ms %= kHour;
    }
    if (ms >= kMinute) {
        out += std::to_string(ms / kMinute) + "M";
        ms %= kMinute;
    }
    if (ms > 0) {
        out += std::to_string(ms / kSecond);
        if (const Millis frac = ms % kSecond; frac != 0) {
            std::string f = std::to_string(frac + 1000).substr(1);
            while (f.back() == '0') f.pop_back();
            out += "." + f;
        }
        out += "S";
    }
    return out;
}

namespace {

std::string format_period(const CalendarPeriod& p) {
    if (p.months == 0) return format_span(p.fixed);
    std::string out = "P" + std::to_string(p.months) + "M";
    if (p.fixed != 0) out += format_span(p.fixed).substr(1);
    return out;
}

std::string format_reps(const std::optional<int>& reps) {
    return reps ? "R" + std::to_string(*reps) : std::string("R");
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string format_timer(const TimerSpec& spec) {
    return std::visit(
        overloaded{
            [](const DateTimer& d) { return format_utc(d.instant); },
            [](const DurationTimer& d) { return format_span(d.length); },
            [](const CycleAbsTimer& c) {
                return format_reps(c.repetitions) + "/" + format_utc(c.start) + "/" +
                       format_period(c.period);
            },
            [](const CycleRelTimer& c) {
                return format_reps(c.repetitions) + "/" + format_span(c.period);
            },
        },
        spec);
}

void validate(const TimerSpec& spec) {
    auto bad = [](const std::string& why) { throw Error(ErrorCode::ParseError, why); };
    std::visit(overloaded{
                   [&](const DateTimer&) {},
                   [&](const DurationTimer& d) {
                       if (d.length < 0) bad("duration must be non-negative");
                   },
                   [&](const CycleAbsTimer& c) {
                       if (c.period.months < 0 || c.period.fixed < 0 ||
                           (c.period.months == 0 && c.period.fixed == 0)) {
                           bad("cycle period must be positive");
                       }
                       if (c.repetitions && *c.repetitions < 1) bad("repetitions must be >= 1");
                   },
                   [&](const CycleRelTimer& c) {
                       if (c.period <= 0) bad("cycle period must be positive");
                       if (c.repetitions && *c.repetitions < 1) bad("repetitions must be >= 1");
                   },
               },
               spec);
}

bool is_cycle(const TimerSpec& spec) {
    return std::holds_alternative<CycleAbsTimer>(spec) || std::holds_alternative<CycleRelTimer>(spec);
}

std::optional<int> occurrences(const TimerSpec& spec) {
    if (const auto* c = std::get_if<CycleAbsTimer>(&spec)) return c->repetitions;
    if (const auto* c = std::get_if<CycleRelTimer>(&spec)) return c->repetitions;
    return 1;
}

SimTime due_at(const TimerSpec& spec, SimTime enablement, std::size_t k) {
    const auto kk = static_cast<std::int64_t>(k);
    return std::visit(
        overloaded{
            [&](const DateTimer& d) { return d.instant; },
            [&](const DurationTimer& d) { return enablement + d.length; },
            [&](const CycleAbsTimer& c) {
                const SimTime stepped =
                    c.period.months == 0 ? c.start : add_months(c.start, static_cast<int>(kk * c.period.months));
                return stepped + kk * c.period.fixed;
            },
            [&](const CycleRelTimer& c) { return enablement + (kk + 1) * c.period; },
        },
        spec);
}

std::vector<SimTime> due_times(const TimerSpec& spec, SimTime enablement, std::size_t limit) {
    std::size_t n = limit;
    if (const auto occ = occurrences(spec)) n = std::min(n, static_cast<std::size_t>(*occ));
    std::vector<SimTime> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) out.push_back(due_at(spec, enablement, k));
    return out;
}

std::string describe(const TimerSpec& spec) {
    auto reps = [](const std::optional<int>& r) {
        return r ? std::to_string(*r) : std::string("unbounded");
    };
    return std::visit(
        overloaded{
            [](const DateTimer& d) {
                return "Date instant_ms=" + std::to_string(d.instant.ms) + " (" + format_utc(d.instant) + ")";
            },
            [](const DurationTimer& d) { return "Duration length_ms=" + std::to_string(d.length); },
            [&](const CycleAbsTimer& c) {
                return "CycleAbs start_ms=" + std::to_string(c.start.ms) + " (" + format_utc(c.start) +
                       ") period_months=" + std::to_string(c.period.months) +
                       " period_ms=" + std::to_string(c.period.fixed) + " repetitions=" + reps(c.repetitions);
            },
            [&](const CycleRelTimer& c) {
                return "CycleRel period_ms=" + std::to_string(c.period) + " repetitions=" + reps(c.repetitions);
            },
        },
        spec);
}

}  // namespace chaintime
