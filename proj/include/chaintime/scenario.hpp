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
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chaintime/measures.hpp"
#include "chaintime/process.hpp"
#include "chaintime/random.hpp"

namespace chaintime {

enum class MinerOrdering { FifoByArrival, PriorityThenArrival, AdversarialReorder };

std::string_view to_string(MinerOrdering o) noexcept;

struct NetworkConfig {
    SimTime genesis{1577750400000};  // 2019-12-31T00:00:00Z
    Distribution block_time = Distribution::normal(15190, 2710, 4460, 30310);
    Distribution mining_time = Distribution::uniform(1000, 4000);
    Distribution inclusion_delay = Distribution::uniform(0, 20000);
    std::map<std::string, Distribution> inclusion_delay_by_sender;  // overrides
    MinerOrdering ordering = MinerOrdering::FifoByArrival;
    double assumed_mean_block_time_ms = 15190.0;
};

struct DriftRange {
    Millis min = 0;
    Millis max = 15000;
    bool operator==(const DriftRange&) const = default;
};

struct FaultConfig {
    std::optional<DriftRange> miner_drift;
    std::map<std::string, Millis> parameter_lie_ms;     // by sender
    std::map<std::string, Millis> oracle_staleness_ms;  // by provider
    std::map<std::string, std::vector<OutageWindow>> oracle_outages;

    bool any() const {
        return miner_drift || !parameter_lie_ms.empty() || !oracle_staleness_ms.empty() || !oracle_outages.empty();
    }
};

enum class OracleKind { Storage, RequestResponse };

std::string_view to_string(OracleKind k) noexcept;

struct OracleConfig {
    std::string id;
    OracleKind kind = OracleKind::Storage;
    Millis cadence_ms = 60000;              // storage
    std::optional<SimTime> start;           // storage; defaults to genesis
    Distribution latency = Distribution::constant(30000);  // request/response
};

enum class TriggerKind { Enabled, Due, At };

std::string_view to_string(TriggerKind k) noexcept;

/// "Send a transaction for `element`" reaction.
///   enabled: observed enablement + offset
///   due:     max(observed enablement, due instant of the guarding timer + offset)
///   at:      once, at a fixed instant
struct ParticipantRule {
    std::string element;
    TriggerKind trigger = TriggerKind::Enabled;
    Distribution offset = Distribution::constant(0);
    std::optional<SimTime> at;
    double probability = 1.0;
};

struct ParticipantConfig {
    std::string id;
    Millis retry_ms = 120000;  // after a guard rejection
    std::uint32_t priority = 0;
    std::vector<ParticipantRule> rules;
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::optional<std::string> preset;
    NetworkConfig network;
    FaultConfig faults;
    std::vector<OracleConfig> oracles;
    std::shared_ptr<const ProcessModel> process;  // may be empty: chain only
    std::optional<std::string> process_preset;
    std::vector<MeasureKind> measures{kAllMeasures.begin(), kAllMeasures.end()};
    std::vector<ParticipantConfig> participants;
    Millis horizon_ms = 365 * kDay;
    std::vector<std::uint64_t> seeds;

    ChainParams chain_params() const { return {network.genesis, network.assumed_mean_block_time_ms}; }
    SimTime horizon() const { return network.genesis + horizon_ms; }
    const OracleConfig* first_oracle(OracleKind kind) const;
};

/// Throws SchemaError naming the offending field.
ScenarioConfig parse_scenario(std::string_view json_text);

/// Throws SchemaError, or Error(NotFound) if the file cannot be read.
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Cross-field checks (references, required oracles, ranges); SchemaError.
void validate_scenario(const ScenarioConfig& config);

/// Complete configuration, defaults included, as pretty-printed JSON that
/// parse_scenario accepts again.
std::string scenario_to_json(const ScenarioConfig& config);

/// Bundled scenarios; currently `invoice-demo`.
std::optional<ScenarioConfig> find_preset_scenario(std::string_view name);

}  // namespace chaintime
