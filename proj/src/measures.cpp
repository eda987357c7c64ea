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

#include "chaintime/measures.hpp"

#include <algorithm>
#include <cmath>

#include "chaintime/error.hpp"

namespace chaintime {

std::string_view to_string(MeasureKind kind) noexcept {
    switch (kind) {
        case MeasureKind::BlockTimestamp: return "BlockTimestamp";
        case MeasureKind::BlockNumber: return "BlockNumber";
        case MeasureKind::Parameter: return "Parameter";
        case MeasureKind::StorageOracle: return "StorageOracle";
        case MeasureKind::RequestResponseOracle: return "RequestResponseOracle";
    }
    return "Unknown";
}

std::optional<MeasureKind> parse_measure_kind(std::string_view name) {
    static constexpr std::array<std::string_view, 5> kShort = {"bt", "bn", "pa", "so", "ro"};
    for (std::size_t i = 0; i < kAllMeasures.size(); ++i) {
        if (name == to_string(kAllMeasures[i]) || name == kShort[i]) return kAllMeasures[i];
    }
    return std::nullopt;
}

void OracleCell::record(OraclePosition at, SimTime value) {
    if (!history_.empty() && !(history_.back().first < at)) {
        throw Error(ErrorCode::InvalidContext, "oracle write out of order for " + provider_);
    }
    history_.emplace_back(at, value);
}

std::optional<SimTime> OracleCell::value_before(OraclePosition at) const {
    auto it = std::lower_bound(history_.begin(), history_.end(), at,
                               [](const auto& entry, const OraclePosition& p) { return entry.first < p; });
    if (it == history_.begin()) return std::nullopt;
    return std::prev(it)->second;
}

TxContext::TxContext(Transaction tx, std::uint64_t block_number, SimTime block_timestamp,
                     std::size_t position, ChainParams params, const OracleCell* oracle)
    : tx_(std::move(tx)),
      block_number_(block_number),
      block_timestamp_(block_timestamp),
      position_(position),
      params_(params),
      oracle_(oracle) {
    if (!(params_.mean_block_time_ms > 0.0)) {
        throw Error(ErrorCode::InvalidContext, "mean block time must be positive");
    }
    if (block_timestamp_ < params_.genesis || (block_number_ > 0 && block_timestamp_ == params_.genesis)) {
        throw Error(ErrorCode::InvalidContext, "block timestamp inconsistent with genesis");
    }
}

TxContext TxContext::on_chain(const Chain& chain, std::string_view tx_id, ChainParams params,
                              const OracleCell* oracle) {
    const auto at = chain.locate(tx_id);
    if (!at) throw Error(ErrorCode::NotFound, "transaction " + std::string(tx_id) + " not on chain");
    const Block& b = chain.blocks()[at->block];
    if (b.number > 0 && chain.blocks().front().timestamp != params.genesis) {
        throw Error(ErrorCode::InvalidContext, "chain genesis differs from parameters");
    }
    return TxContext(b.transactions[at->index], b.number, b.timestamp, at->index, params, oracle);
}

TxContext TxContext::in_block(const Block& block, std::size_t position, ChainParams params,
                              const OracleCell* oracle) {
    if (position >= block.transactions.size()) {
        throw Error(ErrorCode::InvalidContext, "position beyond block contents");
    }
    return TxContext(block.transactions[position], block.number, block.timestamp, position, params, oracle);
}

SimTime measure_bt(const TxContext& ctx) { return ctx.block_timestamp(); }

SimTime measure_bn(const ChainParams& params, std::uint64_t block_number) {
    return params.genesis +
           static_cast<Millis>(std::llround(static_cast<double>(block_number) * params.mean_block_time_ms));
}

SimTime measure_bn(const TxContext& ctx) { return measure_bn(ctx.params(), ctx.block_number()); }

Millis bn_delta(std::uint64_t i, std::uint64_t j, double mean_block_time_ms) {
    const std::uint64_t gap = i > j ? i - j : j - i;
    return static_cast<Millis>(std::llround(static_cast<double>(gap) * mean_block_time_ms));
}

SimTime measure_pa(const TxContext& ctx) {
    const auto ts = ctx.tx().payload().arg(kParamTimestamp);
    if (!ts) {
        throw Error(ErrorCode::MissingParameter, "transaction " + ctx.tx().id() + " carries no timestamp");
    }
    return SimTime{*ts};
}

SimTime measure_so(const TxContext& ctx) {
    if (ctx.oracle() != nullptr) {
        if (auto v = ctx.oracle()->value_before({ctx.block_number(), ctx.position()})) return *v;
    }
    throw Error(ErrorCode::Uninitialized, "storage oracle holds no value before " + ctx.tx().id());
}

bool in_outage(const std::vector<OutageWindow>& outages, SimTime t) {
    return std::any_of(outages.begin(), outages.end(), [t](const OutageWindow& w) { return w.contains(t); });
}

StorageProvider::StorageProvider(std::string id, Millis cadence, SimTime first_tick, Millis staleness,
                                 std::vector<OutageWindow> outages)
    : id_(std::move(id)),
      cadence_(cadence),
      next_tick_(first_tick),
      staleness_(staleness),
      outages_(std::move(outages)) {
    if (cadence_ <= 0) throw Error(ErrorCode::InvalidScenario, "cadence must be positive");
}

std::optional<Transaction> StorageProvider::tick(SimTime now) {
    next_tick_ = now + cadence_;
    if (in_outage(outages_, now)) return std::nullopt;
    Payload payload{std::string(kOracleUpdateOp), {}};
    payload.args.emplace(std::string(kValueArg), (now - staleness_).ms);
    return Transaction(id_ + "_" + std::to_string(issued_++), id_, now, std::move(payload));
}

std::optional<Transaction> so_provider_tick(StorageProvider& provider, SimTime now) {
    return provider.tick(now);
}

PendingMeasure ro_request(const TxContext& ctx, std::uint64_t request_id) {
    PendingMeasure p;
    p.request_id = request_id;
    p.tx_id = ctx.tx().id();
    p.block_number = ctx.block_number();
    p.block_timestamp = ctx.block_timestamp();
    return p;
}

SimTime ro_resolve(const PendingMeasure& pending, const Chain& chain) {
    if (!pending.callback_tx) {
        throw Error(ErrorCode::Unresolved, "request " + std::to_string(pending.request_id) + " has no callback");
    }
    const auto at = chain.locate(*pending.callback_tx);
    if (!at) {
        throw Error(ErrorCode::Unresolved, "callback " + *pending.callback_tx + " not yet included");
    }
    const auto value = chain.transaction(*at).payload().arg(kValueArg);
    if (!value) throw Error(ErrorCode::MissingParameter, "callback carries no value");
    return SimTime{*value};
}

RequestResponseProvider::RequestResponseProvider(std::string id, Distribution latency, Millis staleness,
                                                 std::vector<OutageWindow> outages)
    : id_(std::move(id)), latency_(latency), staleness_(staleness), outages_(std::move(outages)) {}

std::optional<SimTime> RequestResponseProvider::callback_time(SimTime observed_at, RandomStream& rng) const {
    const SimTime at = observed_at + latency_.sample(rng);
    if (in_outage(outages_, at)) return std::nullopt;
    return at;
}

Transaction RequestResponseProvider::make_callback(std::uint64_t request_id, SimTime now) {
    Payload payload{std::string(kOracleCallbackOp), {}};
    payload.args.emplace(std::string(kRequestArg), static_cast<std::int64_t>(request_id));
    payload.args.emplace(std::string(kValueArg), (now - staleness_).ms);
    return Transaction(id_ + "_" + std::to_string(issued_++), id_, now, std::move(payload));
}

}  // namespace chaintime
