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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chaintime/chain.hpp"
#include "chaintime/random.hpp"
#include "chaintime/sim_time.hpp"

namespace chaintime {

enum class MeasureKind {
    BlockTimestamp,
    BlockNumber,
    Parameter,
    StorageOracle,
    RequestResponseOracle,
};

inline constexpr std::array<MeasureKind, 5> kAllMeasures = {
    MeasureKind::BlockTimestamp, MeasureKind::BlockNumber, MeasureKind::Parameter,
    MeasureKind::StorageOracle, MeasureKind::RequestResponseOracle,
};

std::string_view to_string(MeasureKind kind) noexcept;

/// Accepts the canonical names and the short forms bt, bn, pa, so, ro.
std::optional<MeasureKind> parse_measure_kind(std::string_view name);

/// Only the request/response oracle delivers its reading asynchronously.
constexpr bool is_synchronous(MeasureKind kind) {
    return kind != MeasureKind::RequestResponseOracle;
}

/// Chain-wide constants a contract may rely on: the genesis timestamp and the
/// assumed mean block time.
struct ChainParams {
    SimTime genesis;
    double mean_block_time_ms = 15190.0;
};

/// (block number, index within block) of an on-chain write.
using OraclePosition = TxLocation;

/// On-chain storage slot of a push oracle: every update the provider got
/// included, ordered by position.
class OracleCell {
public:
    explicit OracleCell(std::string provider) : provider_(std::move(provider)) {}

    /// Throws InvalidContext if `at` does not come after the last write.
    void record(OraclePosition at, SimTime value);

    /// Last value written strictly before `at`, if any.
    std::optional<SimTime> value_before(OraclePosition at) const;

    const std::string& provider() const noexcept { return provider_; }
    const std::vector<std::pair<OraclePosition, SimTime>>& history() const noexcept { return history_; }

private:
    std::string provider_;
    std::vector<std::pair<OraclePosition, SimTime>> history_;
};

/// Everything a transaction can see while it executes.
class TxContext {
public:
    /// Throws InvalidContext when the block fields contradict the chain
    /// parameters (timestamp before genesis, non-positive mean block time).
    TxContext(Transaction tx, std::uint64_t block_number, SimTime block_timestamp,
              std::size_t position, ChainParams params, const OracleCell* oracle = nullptr);

    /// Context of a transaction already on `chain`; NotFound if absent.
    static TxContext on_chain(const Chain& chain, std::string_view tx_id, ChainParams params,
                              const OracleCell* oracle = nullptr);

    /// Context of the transaction at `position` of a block being assembled.
    static TxContext in_block(const Block& block, std::size_t position, ChainParams params,
                              const OracleCell* oracle = nullptr);

    const Transaction& tx() const noexcept { return tx_; }
    std::uint64_t block_number() const noexcept { return block_number_; }
    SimTime block_timestamp() const noexcept { return block_timestamp_; }
    std::size_t position() const noexcept { return position_; }
    const ChainParams& params() const noexcept { return params_; }
    const OracleCell* oracle() const noexcept { return oracle_; }

private:
    Transaction tx_;
    std::uint64_t block_number_;
    SimTime block_timestamp_;
    std::size_t position_;
    ChainParams params_;
    const OracleCell* oracle_;
};

/// Timestamp of the containing block.
SimTime measure_bt(const TxContext& ctx);

/// Genesis timestamp plus block number times the assumed mean block time,
/// rounded to the nearest millisecond.
SimTime measure_bn(const TxContext& ctx);
SimTime measure_bn(const ChainParams& params, std::uint64_t block_number);

/// |i - j| times the assumed mean block time, rounded to the nearest millisecond.
Millis bn_delta(std::uint64_t i, std::uint64_t j, double mean_block_time_ms);

/// Sender-supplied timestamp argument; MissingParameter if absent.
SimTime measure_pa(const TxContext& ctx);

/// Last storage-oracle value written before this transaction's position,
/// earlier transactions of the same block included; Uninitialized otherwise.
SimTime measure_so(const TxContext& ctx);

/// [start, end) interval during which a provider is silent.
struct OutageWindow {
    SimTime start;
    SimTime end;

    bool contains(SimTime t) const { return start <= t && t < end; }
    bool operator==(const OutageWindow&) const = default;
};

bool in_outage(const std::vector<OutageWindow>& outages, SimTime t);

inline constexpr std::string_view kOracleUpdateOp = "oracle_update";
inline constexpr std::string_view kOracleCallbackOp = "oracle_callback";
inline constexpr std::string_view kValueArg = "value";
inline constexpr std::string_view kRequestArg = "request";

/// Push-oracle provider: writes its clock reading at a fixed cadence.
class StorageProvider {
public:
    StorageProvider(std::string id, Millis cadence, SimTime first_tick, Millis staleness = 0,
                    std::vector<OutageWindow> outages = {});

    const std::string& id() const noexcept { return id_; }
    SimTime next_tick() const noexcept { return next_tick_; }

    /// Fires the tick scheduled at `now` and schedules the next one a cadence
    /// later. Returns the update transaction unless the provider is in an
    /// outage; the carried value lags `now` by the configured staleness.
    std::optional<Transaction> tick(SimTime now);

private:
    std::string id_;
    Millis cadence_;
    SimTime next_tick_;
    Millis staleness_;
    std::vector<OutageWindow> outages_;
    std::uint64_t issued_ = 0;
};

std::optional<Transaction> so_provider_tick(StorageProvider& provider, SimTime now);

/// A time query issued from a transaction, answered by a later callback.
struct PendingMeasure {
    std::uint64_t request_id = 0;
    std::string tx_id;
    std::uint64_t block_number = 0;
    SimTime block_timestamp;
    std::optional<SimTime> value;
    std::optional<std::string> callback_tx;
};

PendingMeasure ro_request(const TxContext& ctx, std::uint64_t request_id);

/// Reads the value attached by the callback transaction; Unresolved until
/// that transaction is on `chain`.
SimTime ro_resolve(const PendingMeasure& pending, const Chain& chain);

/// Pull-oracle provider. It reacts to a request once the requesting block
/// is visible and answers after a sampled latency.
class RequestResponseProvider {
public:
    RequestResponseProvider(std::string id, Distribution latency, Millis staleness = 0,
                            std::vector<OutageWindow> outages = {});

    const std::string& id() const noexcept { return id_; }

    /// Instant at which the callback for a request observed at `observed_at`
    /// is created, or empty when the provider is down at that instant and
    /// the request is lost.
    std::optional<SimTime> callback_time(SimTime observed_at, RandomStream& rng) const;

    /// Callback carrying the provider's clock reading at creation.
    Transaction make_callback(std::uint64_t request_id, SimTime now);

private:
    std::string id_;
    Distribution latency_;
    Millis staleness_;
    std::vector<OutageWindow> outages_;
    std::uint64_t issued_ = 0;
};

}  // namespace chaintime
