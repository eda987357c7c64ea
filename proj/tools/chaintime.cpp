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

// Command-line front end: runs scenarios, sweeps seeds and measures, and
// renders reports.
//
// Exit codes: 0 success, 1 scenario error, 2 runtime or usage error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "chaintime/error.hpp"
#include "chaintime/report.hpp"
#include "chaintime/scenario.hpp"
#include "chaintime/simulator.hpp"
#include "chaintime/timer.hpp"

namespace {

using namespace chaintime;

constexpr int kScenarioError = 1;
constexpr int kRuntimeError = 2;

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ScenarioConfig resolve_scenario(const std::string& arg) {
    try {
        if (!std::filesystem::exists(arg)) {
            if (auto preset = find_preset_scenario(arg)) return *preset;
        }
        return load_scenario(arg);
    } catch (const Error& e) {
        throw ScenarioError(e.what());
    }
}

MeasureKind resolve_measure(const std::string& name) {
    if (auto m = parse_measure_kind(name)) return *m;
    throw UsageError("unknown measure " + name +
                        "; expected BlockTimestamp, BlockNumber, Parameter, StorageOracle or RequestResponseOracle");
}

ReportFormat resolve_format(const std::string& name) {
    if (name == "csv") return ReportFormat::Csv;
    if (name == "markdown" || name == "md") return ReportFormat::Markdown;
    throw UsageError("unknown format " + name + "; expected csv or markdown");
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::NotFound, "cannot write " + path);
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::NotFound, "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::uint64_t> seed_list(const ScenarioConfig& c, std::uint64_t count) {
    if (count == 0) return c.seeds;
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = 1; s <= count; ++s) out.push_back(s);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chaintime: on-chain time measures under simulated blockchains"};
    app.require_subcommand(1);

    std::string scenario_arg, out_path, trace_path, records_path, format_name = "csv", timer_text;
    std::vector<std::string> measure_names;
    std::uint64_t seed = 0, seeds = 0;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::size_t due_count = 5;

    auto* run_cmd = app.add_subcommand("run", "Simulate one seed under one measure and print its guard records");
    run_cmd->add_option("scenario", scenario_arg, "Scenario file or preset name")->required();
    run_cmd->add_option("--seed", seed, "Run seed (default: the scenario's first seed)");
    run_cmd->add_option("--measure", measure_names, "Measure kind (default: the scenario's first)")->expected(1);
    run_cmd->add_option("--out", out_path, "Record stream destination (default stdout)");
    run_cmd->add_option("--trace", trace_path, "Also write the chain and oracle trace here");

    auto* sweep_cmd = app.add_subcommand("sweep", "Run every (measure, seed) pair and print the aggregated report");
    sweep_cmd->add_option("scenario", scenario_arg, "Scenario file or preset name")->required();
    sweep_cmd->add_option("--seeds", seeds, "Use seeds 1..N instead of the scenario's list");
    sweep_cmd->add_option("--measure", measure_names, "Restrict to these measures (repeatable)");
    sweep_cmd->add_option("--format", format_name, "csv or markdown");
    sweep_cmd->add_option("--out", out_path, "Report destination (default stdout)");
    sweep_cmd->add_option("--records", records_path, "Also write the full record stream here");
    sweep_cmd->add_option("--threads", threads, "Worker threads; output does not depend on it");

    auto* report_cmd = app.add_subcommand("report", "Aggregate a saved record stream");
    report_cmd->add_option("records", records_path, "Record stream file")->required();
    report_cmd->add_option("--format", format_name, "csv or markdown");
    report_cmd->add_option("--out", out_path, "Report destination (default stdout)");

    auto* timer_cmd = app.add_subcommand("parse-timer", "Parse an ISO-8601 timer and show its schedule");
    timer_cmd->add_option("timer", timer_text, "Timer expression")->required();
    timer_cmd->add_option("--count", due_count, "Due instants to list for anchored timers");

    auto* demo_cmd = app.add_subcommand("demo-invoice", "Sweep the bundled invoicing scenario");
    demo_cmd->add_option("--seeds", seeds, "Use seeds 1..N (default 100)");
    demo_cmd->add_option("--measure", measure_names, "Restrict to these measures (repeatable)");
    demo_cmd->add_option("--format", format_name, "csv or markdown");
    demo_cmd->add_option("--out", out_path, "Report destination (default stdout)");
    demo_cmd->add_option("--records", records_path, "Also write the full record stream here");
    demo_cmd->add_option("--threads", threads, "Worker threads; output does not depend on it");

    auto* config_cmd = app.add_subcommand("print-config", "Print a scenario with every default filled in");
    config_cmd->add_option("scenario", scenario_arg, "Scenario file or preset name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kRuntimeError;
    }

    try {
        if (*run_cmd) {
            const ScenarioConfig cfg = resolve_scenario(scenario_arg);
            const MeasureKind m = measure_names.empty() ? cfg.measures.front() : resolve_measure(measure_names.front());
            const std::uint64_t s = run_cmd->count("--seed") ? seed : cfg.seeds.front();
            RunOptions opts;
            opts.retain_chain = !trace_path.empty();
            const RunTrace trace = run(cfg, s, m, opts);
            std::string text = std::string(kRecordHeader) + "\n";
            for (const auto& line : record_stream(trace)) text += line + "\n";
            emit(text, out_path);
            if (!trace_path.empty()) {
                std::ostringstream t;
                write_trace(t, trace);
                emit(t.str(), trace_path);
            }
            return 0;
        }
        if (*sweep_cmd || *demo_cmd) {
            ScenarioConfig cfg = *sweep_cmd ? resolve_scenario(scenario_arg) : *find_preset_scenario("invoice-demo");
            const ReportFormat fmt = resolve_format(format_name);
            SweepOptions opts;
            opts.seeds = seed_list(cfg, seeds);
            for (const auto& n : measure_names) opts.measures.push_back(resolve_measure(n));
            opts.threads = threads;
            const SweepResult res = sweep(cfg, opts);
            emit(emit_report(res.report, fmt), out_path);
            if (!records_path.empty()) emit(res.records, records_path);
            if (!res.report.failures.empty()) {
                for (const auto& f : res.report.failures) {
                    std::cerr << "run failed: seed " << f.seed << ", " << to_string(f.measure) << ": " << f.message << '\n';
                }
                return kRuntimeError;
            }
            return 0;
        }
        if (*report_cmd) {
            const ReportFormat fmt = resolve_format(format_name);
            const auto records = parse_record_stream(read_file(records_path));
            emit(emit_report(aggregate(records), fmt), out_path);
            return 0;
        }
        if (*timer_cmd) {
            const TimerSpec spec = parse_timer(timer_text);
            std::cout << describe(spec) << '\n' << "canonical " << format_timer(spec) << '\n';
            if (std::holds_alternative<DateTimer>(spec) || std::holds_alternative<CycleAbsTimer>(spec)) {
                for (const auto& t : due_times(spec, SimTime{0}, due_count)) {
                    std::cout << "due " << format_utc(t) << ' ' << t.ms << '\n';
                }
            }
            return 0;
        }
        if (*config_cmd) {
            std::cout << scenario_to_json(resolve_scenario(scenario_arg));
            return 0;
        }
    } catch (const ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << '\n';
        return kScenarioError;
    } catch (const SchemaError& e) {
        std::cerr << "scenario error: " << e.what() << '\n';
        return kScenarioError;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kRuntimeError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kRuntimeError;
}
