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
#include <iosfwd>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "chaintime/chain.hpp"
#include "chaintime/measures.hpp"
#include "chaintime/process.hpp"
#include "chaintime/scenario.hpp"

namespace chaintime {

/// Declaration order is the tie-break order for simultaneous events.
enum class EventKind { TxCreated, OracleUpdate, BlockMiningStart, BlockVisible, OracleCallback };

std::string_view to_string(EventKind kind) noexcept;

struct Event {
    SimTime at;
    EventKind kind = EventKind::TxCreated;
    std::uint64_t seq = 0;  // insertion order
    std::uint64_t ref = 0;  // kind-specific handle
};

/// Min-queue ordered by (time, kind, insertion order).
class EventQueue {
public:
    void push(SimTime at, EventKind kind, std::uint64_t ref = 0);
    Event pop();
    const Event& top() const { return heap_.top(); }
    bool empty() const noexcept { return heap_.empty(); }
    std::size_t size() const noexcept { return heap_.size(); }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.at != b.at) return a.at > b.at;
            if (a.kind != b.kind) return a.kind > b.kind;
            return a.seq > b.seq;
        }
    };
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_seq_ = 0;
};

struct OracleEvent {
    enum class Kind { Update, Request, Callback };

    std::string provider;
    Kind kind = Kind::Update;
    SimTime time;
    std::int64_t value = 0;  // carried clock reading; request id for requests
};

std::string_view to_string(OracleEvent::Kind kind) noexcept;

struct RunOptions {
    bool retain_chain = true;          // keep blocks and oracle events in the trace
    std::optional<std::uint64_t> max_blocks;  // stop after this many blocks past genesis
};

struct RunTrace {
    std::string scenario;
    std::uint64_t seed = 0;
    MeasureKind measure = MeasureKind::BlockTimestamp;
    Chain chain;
    std::vector<OracleEvent> oracle_events;
    std::vector<GuardRecord> records;
    std::uint64_t blocks = 0;  // genesis included
    std::uint64_t transactions = 0;
    SimTime last_block_timestamp;
};

/// One seeded run of a scenario under one measure. Strictly single-threaded;
/// all randomness comes from named substreams of the run seed.
class Simulator {
public:
    /// Throws SchemaError if the scenario does not validate.
    Simulator(const ScenarioConfig& config, std::uint64_t seed, MeasureKind measure, RunOptions options = {});
    ~Simulator();
    Simulator(Simulator&&) noexcept;
    Simulator& operator=(Simulator&&) noexcept;

    /// Processes the earliest pending event. Returns false, leaving the state
    /// unchanged, once the queue is empty.
    bool step();
    bool complete() const;
    SimTime now() const;
    std::size_t queued() const;

    const Chain& chain() const;
    const ProcessInstance* instance() const;

    /// Closes the run: pending decisions become StuckPending and deferred
    /// choices are judged. The simulator must not be stepped afterwards.
    RunTrace finish();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

RunTrace run(const ScenarioConfig& config, std::uint64_t seed, MeasureKind measure, RunOptions options = {});

/// Chain export followed by `oracle,<provider>,<kind>,<time_ms>,<value>` lines.
void write_trace(std::ostream& out, const RunTrace& trace);

}  // namespace chaintime
