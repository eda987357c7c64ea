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
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "chaintime/process.hpp"
#include "chaintime/scenario.hpp"
#include "chaintime/simulator.hpp"

namespace chaintime {

/// The first eight columns are the stable contract; the rest make every
/// outcome re-derivable from its own line.
inline constexpr std::string_view kRecordHeader =
    "scenario,seed,measure,constraint,element,ground_truth_ms,measured_ms,outcome,basis,threshold_ms,"
    "expected_branch,actual_branch";

inline constexpr std::string_view kReportHeader =
    "measure,constraint_type,tp,tn,fp,fn,match,mismatch,stuck,mean_abs_err_ms,max_abs_err_ms";

std::string record_line(std::string_view scenario, std::uint64_t seed, const GuardRecord& r);

/// One line per guard record, header excluded.
std::vector<std::string> record_stream(const RunTrace& trace);

struct ParsedRecord {
    std::string scenario;
    std::uint64_t seed = 0;
    GuardRecord record;  // fields carried by the line; the rest default
};

/// Throws Error(ParseError).
ParsedRecord parse_record_line(std::string_view line);

/// Skips the header and blank lines.
std::vector<ParsedRecord> parse_record_stream(std::string_view text);

struct Cell {
    std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0, match = 0, mismatch = 0, stuck = 0;
    std::uint64_t err_count = 0;
    double err_sum = 0;
    Millis err_max = 0;

    std::uint64_t total() const { return tp + tn + fp + fn + match + mismatch + stuck; }
    void add(const GuardRecord& r);
};

/// |M(tx) - s_tx| over deadline-based records.
struct Accuracy {
    std::uint64_t count = 0;
    double sum = 0;
    Millis max = 0;

    double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
};

struct RunFailure {
    std::uint64_t seed = 0;
    MeasureKind measure = MeasureKind::BlockTimestamp;
    std::string message;
};

struct MetricsReport {
    std::string scenario;
    std::map<std::pair<MeasureKind, ConstraintType>, Cell> cells;
    std::map<MeasureKind, Accuracy> accuracy;
    std::vector<RunFailure> failures;

    void add(const GuardRecord& r);
};

MetricsReport aggregate(const std::vector<ParsedRecord>& records);

struct SweepOptions {
    std::vector<std::uint64_t> seeds;   // empty: the scenario's seeds
    std::vector<MeasureKind> measures;  // empty: the scenario's measures
    unsigned threads = 1;
    RunOptions run{false, std::nullopt};
    /// Called once per finished run, serialized, possibly from a worker thread.
    std::function<void(const RunTrace&)> on_run;
};

struct SweepResult {
    std::string records;  // header plus lines, ordered by (measure, seed)
    MetricsReport report;
};

/// One run per (measure, seed). A failing run is reported and does not stop
/// the others. The report is a fold over the emitted record stream.
SweepResult sweep(const ScenarioConfig& config, const SweepOptions& options = {});

enum class ReportFormat { Csv, Markdown };

std::string emit_report(const MetricsReport& report, ReportFormat format);

/// Qualitative ratings from the literature, shipped as data and never
/// computed by the simulator.
struct ReferenceRatings {
    std::vector<std::string> columns;
    std::vector<std::pair<std::string, std::vector<std::string>>> rows;
};

const ReferenceRatings& measure_ratings();
const ReferenceRatings& constraint_ratings();

}  // namespace chaintime
