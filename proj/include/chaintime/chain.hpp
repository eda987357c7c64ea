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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "chaintime/sim_time.hpp"

namespace chaintime {

/// Argument key under which a sender attaches its own clock reading.
inline constexpr std::string_view kParamTimestamp = "timestamp";

struct Payload {
    std::string op;
    std::map<std::string, std::int64_t, std::less<>> args;

    std::optional<std::int64_t> arg(std::string_view key) const {
        if (auto it = args.find(key); it != args.end()) return it->second;
        return std::nullopt;
    }
};

/// A signed transaction. The creation instant is fixed at construction and
/// is the ground truth that every on-chain time measure tries to estimate.
class Transaction {
public:
    Transaction(std::string id, std::string sender, SimTime created_at, Payload payload,
                std::uint32_t priority = 0)
        : id_(std::move(id)),
          sender_(std::move(sender)),
          created_at_(created_at),
          payload_(std::move(payload)),
          priority_(priority) {}

    const std::string& id() const noexcept { return id_; }
    const std::string& sender() const noexcept { return sender_; }
    SimTime created_at() const noexcept { return created_at_; }
    const Payload& payload() const noexcept { return payload_; }
    std::uint32_t priority() const noexcept { return priority_; }

private:
    std::string id_;
    std::string sender_;
    SimTime created_at_;
    Payload payload_;
    std::uint32_t priority_;
};

struct Block {
    std::uint64_t number = 0;
    SimTime timestamp;
    std::vector<Transaction> transactions;  // execution order
    Millis mining_duration = 0;
};

struct TxLocation {
    std::uint64_t block = 0;
    std::size_t index = 0;

    auto operator<=>(const TxLocation&) const = default;
};

/// Append-only ledger. Numbers run consecutively from the genesis block and
/// timestamps strictly increase.
class Chain {
public:
    /// Throws BadNumber, NonMonotonicTimestamp, OutOfRange (negative fields)
    /// or DuplicateTransaction; the chain is unchanged on error.
    void append(Block block);

    std::span<const Block> blocks() const noexcept { return blocks_; }
    std::size_t size() const noexcept { return blocks_.size(); }
    bool empty() const noexcept { return blocks_.empty(); }

    /// Throws OutOfRange.
    const Block& block(std::uint64_t number) const;
    const Block& back() const { return blocks_.back(); }

    std::optional<TxLocation> locate(std::string_view tx_id) const;
    const Transaction& transaction(const TxLocation& at) const {
        return blocks_[at.block].transactions[at.index];
    }

    void reserve(std::size_t blocks) { blocks_.reserve(blocks); }

private:
    std::vector<Block> blocks_;
    std::unordered_map<std::string, TxLocation> index_;
};

Chain append_block(Chain chain, Block block);

/// s_i - s_{i-1}; OutOfRange for the genesis block or past the tip.
Millis block_time(const Chain& chain, std::uint64_t number);

/// Containing block timestamp minus the transaction's creation instant.
Millis inclusion_time(const Chain& chain, std::string_view tx_id);

/// Arithmetic mean of the block times b_1..b_n; InsufficientBlocks below two blocks.
double mean_block_time(const Chain& chain);

/// Line-delimited export:
///   block,<number>,<timestamp_ms>,<mining_duration_ms>
///   tx,<id>,<created_at_ms>,<sender>,<payload_op>
void write_trace(std::ostream& out, const Chain& chain);

}  // namespace chaintime
