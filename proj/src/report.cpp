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

#include "chaintime/report.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>

#include "chaintime/error.hpp"

namespace chaintime {

namespace {

constexpr std::array<ConstraintType, 4> kConstraintOrder = {
    ConstraintType::Absolute, ConstraintType::Relative, ConstraintType::Cycle, ConstraintType::DeferredChoice};

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == sep) {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::int64_t to_int(std::string_view s, std::string_view what) {
    std::int64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        throw Error(ErrorCode::ParseError, "bad " + std::string(what) + ": '" + std::string(s) + "'");
    }
    return v;
}

std::string fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

std::string record_line(std::string_view scenario, std::uint64_t seed, const GuardRecord& r) {
    std::string s;
    s.reserve(128);
    s += scenario;
    s += ',';
    s += std::to_string(seed);
    s += ',';
    s += to_string(r.measure);
    s += ',';
    s += to_string(r.constraint);
    s += ',';
    s += r.element;
    s += ',';
    s += std::to_string(r.ground_truth_ms);
    s += ',';
    if (r.measured_ms) s += std::to_string(*r.measured_ms);
    s += ',';
    s += to_string(r.outcome);
    s += ',';
    s += to_string(r.basis);
    s += ',';
    s += std::to_string(r.threshold_ms);
    s += ',';
    s += r.expected_branch;
    s += ',';
    s += r.actual_branch;
    return s;
}

std::vector<std::string> record_stream(const RunTrace& trace) {
    std::vector<std::string> out;
    out.reserve(trace.records.size());
    for (const auto& r : trace.records) out.push_back(record_line(trace.scenario, trace.seed, r));
    return out;
}

ParsedRecord parse_record_line(std::string_view line) {
    const auto f = split(line, ',');
    if (f.size() != 12) {
        throw Error(ErrorCode::ParseError, "record has " + std::to_string(f.size()) + " fields, expected 12");
    }
    ParsedRecord p;
    p.scenario = std::string(f[0]);
    p.seed = static_cast<std::uint64_t>(to_int(f[1], "seed"));
    GuardRecord& r = p.record;
    const auto m = parse_measure_kind(f[2]);
    const auto c = parse_constraint_type(f[3]);
    const auto o = parse_outcome(f[7]);
    const auto b = parse_basis(f[8]);
    if (!m || !c || !o || !b) throw Error(ErrorCode::ParseError, "unknown enumerator in record");
    r.measure = *m;
    r.constraint = *c;
    r.element = std::string(f[4]);
    r.ground_truth_ms = to_int(f[5], "ground_truth_ms");
    if (!f[6].empty()) r.measured_ms = to_int(f[6], "measured_ms");
    r.outcome = *o;
    r.basis = *b;
    r.threshold_ms = to_int(f[9], "threshold_ms");
    r.expected_branch = std::string(f[10]);
    r.actual_branch = std::string(f[11]);
    return p;
}

std::vector<ParsedRecord> parse_record_stream(std::string_view text) {
    std::vector<ParsedRecord> out;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line == kRecordHeader) continue;
        out.push_back(parse_record_line(line));
    }
    return out;
}

void Cell::add(const GuardRecord& r) {
    switch (r.outcome) {
        case Outcome::TP: ++tp; break;
        case Outcome::TN: ++tn; break;
        case Outcome::FP: ++fp; break;
        case Outcome::FN: ++fn; break;
        case Outcome::Match: ++match; break;
        case Outcome::Mismatch: ++mismatch; break;
        case Outcome::StuckPending: ++stuck; break;
    }
    if (r.measured_ms && r.basis != Basis::Choice) {
        const Millis e = std::llabs(*r.measured_ms - r.ground_truth_ms);
        ++err_count;
        err_sum += static_cast<double>(e);
        err_max = std::max(err_max, e);
    }
}

void MetricsReport::add(const GuardRecord& r) {
    cells[{r.measure, r.constraint}].add(r);
    if (r.basis == Basis::Deadline && r.measured_ms) {
        Accuracy& a = accuracy[r.measure];
        const Millis e = std::llabs(*r.measured_ms - r.ground_truth_ms);
        ++a.count;
        a.sum += static_cast<double>(e);
        a.max = std::max(a.max, e);
    }
}

MetricsReport aggregate(const std::vector<ParsedRecord>& records) {
    MetricsReport rep;
    for (const auto& p : records) {
        if (rep.scenario.empty()) rep.scenario = p.scenario;
        rep.add(p.record);
    }
    return rep;
}

SweepResult sweep(const ScenarioConfig& config, const SweepOptions& options) {
    const auto seeds = options.seeds.empty() ? config.seeds : options.seeds;
    const auto measures = options.measures.empty() ? config.measures : options.measures;
    validate_scenario(config);

    struct Slot {
        MeasureKind measure;
        std::uint64_t seed;
        std::string lines;
        std::optional<std::string> failure;
    };
    std::vector<Slot> slots;
    for (auto m : measures) {
        for (auto s : seeds) slots.push_back({m, s, {}, std::nullopt});
    }

    std::mutex callback_mutex;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < slots.size(); i = next++) {
            Slot& slot = slots[i];
            try {
                RunTrace t = run(config, slot.seed, slot.measure, options.run);
                std::string lines;
                for (const auto& r : t.records) {
                    lines += record_line(t.scenario, t.seed, r);
                    lines += '\n';
                }
                slot.lines = std::move(lines);
                if (options.on_run) {
                    std::lock_guard lock(callback_mutex);
                    options.on_run(t);
                }
            } catch (const std::exception& e) {
                slot.failure = e.what();
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(slots.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    SweepResult out;
    out.records = std::string(kRecordHeader) + "\n";
    for (const auto& s : slots) out.records += s.lines;
    out.report = aggregate(parse_record_stream(out.records));
    out.report.scenario = config.name;
    for (const auto& s : slots) {
        if (s.failure) out.report.failures.push_back({s.seed, s.measure, *s.failure});
    }
    return out;
}

const ReferenceRatings& measure_ratings() {
    static const ReferenceRatings r{
        {"BlockTimestamp", "BlockNumber", "Parameter", "StorageOracle", "RequestResponseOracle"},
        {
            {"Accuracy", {"••◦", "◦◦◦", "•••", "•◦◦", "•◦◦"}},
            {"Trust", {"••◦", "•••", "◦◦◦", "•◦◦", "•◦◦"}},
            {"Immediacy", {"•••", "•••", "•••", "•••", "◦◦◦"}},
            {"Cost", {"•••", "•••", "••◦", "◦◦◦", "◦◦◦"}},
            {"Reliability", {"•••", "•••", "••◦", "•◦◦", "◦◦◦"}},
        }};
    return r;
}

const ReferenceRatings& constraint_ratings() {
    static const ReferenceRatings r{
        {"BlockTimestamp", "BlockNumber", "Parameter", "StorageOracle", "RequestResponseOracle"},
        {
            {"Absolute", {"••◦", "◦◦◦", "•••", "•◦◦", "•◦◦"}},
            {"Relative", {"••◦", "•◦◦", "•••", "◦◦◦", "◦◦◦"}},
        }};
    return r;
}

std::string emit_report(const MetricsReport& report, ReportFormat format) {
    std::ostringstream out;
    auto row_fields = [](MeasureKind m, ConstraintType c, const Cell& cell) {
        std::vector<std::string> f{std::string(to_string(m)), std::string(to_string(c)),
                                   std::to_string(cell.tp), std::to_string(cell.tn), std::to_string(cell.fp),
                                   std::to_string(cell.fn), std::to_string(cell.match), std::to_string(cell.mismatch),
                                   std::to_string(cell.stuck)};
        if (cell.err_count) {
            f.push_back(fixed3(cell.err_sum / static_cast<double>(cell.err_count)));
            f.push_back(std::to_string(cell.err_max));
        } else {
            f.push_back("");
            f.push_back("");
        }
        return f;
    };
    auto each_cell = [&](auto&& fn) {
        for (auto m : kAllMeasures) {
            for (auto c : kConstraintOrder) {
                auto it = report.cells.find({m, c});
                if (it != report.cells.end() && it->second.total() > 0) fn(m, c, it->second);
            }
        }
    };

    if (format == ReportFormat::Csv) {
        out << kReportHeader << '\n';
        each_cell([&](MeasureKind m, ConstraintType c, const Cell& cell) {
            const auto f = row_fields(m, c, cell);
            for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i];
            out << '\n';
        });
        return out.str();
    }

    out << "# Enforcement report: " << (report.scenario.empty() ? "unnamed" : report.scenario) << "\n\n";
    out << "## Guard outcomes\n\n";
    out << "| measure | constraint | TP | TN | FP | FN | Match | Mismatch | Stuck | mean abs err (ms) | max abs err (ms) |\n";
    out << "|---|---|---|---|---|---|---|---|---|---|---|\n";
    each_cell([&](MeasureKind m, ConstraintType c, const Cell& cell) {
        const auto f = row_fields(m, c, cell);
        out << '|';
        for (const auto& x : f) out << ' ' << (x.empty() ? "-" : x) << " |";
        out << '\n';
    });
    out << "\n## Measured accuracy\n\n";
    out << "Absolute error |M(tx) - s_tx| over deadline guards.\n\n";
    out << "| measure | samples | mean (ms) | max (ms) |\n|---|---|---|---|\n";
    for (auto m : kAllMeasures) {
        auto it = report.accuracy.find(m);
        if (it == report.accuracy.end()) continue;
        out << "| " << to_string(m) << " | " << it->second.count << " | " << fixed3(it->second.mean()) << " | "
            << it->second.max << " |\n";
    }
    if (!report.failures.empty()) {
        out << "\n## Failed runs\n\n";
        for (const auto& f : report.failures) {
            out << "- seed " << f.seed << ", " << to_string(f.measure) << ": " << f.message << '\n';
        }
    }
    auto table = [&](const char* title, const char* corner, const ReferenceRatings& r) {
        out << "\n### " << title << "\n\n| " << corner << " |";
        for (const auto& c : r.columns) out << ' ' << c << " |";
        out << "\n|---|";
        for (std::size_t i = 0; i < r.columns.size(); ++i) out << "---|";
        out << '\n';
        for (const auto& [name, vals] : r.rows) {
            out << "| " << name << " |";
            for (const auto& v : vals) out << ' ' << v << " |";
            out << '\n';
        }
    };
    out << "\n## Reference ratings (asserted, not measured)\n\n";
    out << "Qualitative scale from best (•••) to worst (◦◦◦). Trust, cost, immediacy and reliability\n"
           "are not simulated; these rows are static data for side-by-side reading.\n";
    table("Measures", "metric", measure_ratings());
    table("Temporal constraints", "constraint", constraint_ratings());
    return out.str();
}

}  // namespace chaintime
