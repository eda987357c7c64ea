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

#include "chaintime/chain.hpp"

#include <ostream>

#include "chaintime/error.hpp"

namespace chaintime {

void Chain::append(Block block) {
    const std::uint64_t expected = blocks_.empty() ? 0 : blocks_.back().number + 1;
    if (block.number != expected) {
        throw Error(ErrorCode::BadNumber, "block number " + std::to_string(block.number) +
                                              " does not follow " + std::to_string(expected));
    }
    if (block.timestamp.ms < 0 || block.mining_duration < 0) {
        throw Error(ErrorCode::OutOfRange, "negative block timestamp or mining duration");
    }
    if (!blocks_.empty() && block.timestamp <= blocks_.back().timestamp) {
        throw Error(ErrorCode::NonMonotonicTimestamp,
                    "block " + std::to_string(block.number) + " timestamp " +
                        std::to_string(block.timestamp.ms) + " not after " +
                        std::to_string(blocks_.back().timestamp.ms));
    }
    for (std::size_t i = 0; i < block.transactions.size(); ++i) {
        const auto& id = block.transactions[i].id();
        bool dup = index_.contains(id);
        for (std::size_t j = 0; j < i && !dup; ++j) dup = block.transactions[j].id() == id;
        if (dup) throw Error(ErrorCode::DuplicateTransaction, "duplicate transaction " + id);
    }
    for (std::size_t i = 0; i < block.transactions.size(); ++i) {
        index_.emplace(block.transactions[i].id(), TxLocation{block.number, i});
    }
    blocks_.push_back(std::move(block));
}

const Block& Chain::block(std::uint64_t number) const {
    if (number >= blocks_.size()) {
        throw Error(ErrorCode::OutOfRange, "no block " + std::to_string(number));
    }
    return blocks_[number];
}

std::optional<TxLocation> Chain::locate(std::string_view tx_id) const {
    if (auto it = index_.find(std::string(tx_id)); it != index_.end()) return it->second;
    return std::nullopt;
}

Chain append_block(Chain chain, Block block) {
    chain.append(std::move(block));
    return chain;
}

Millis block_time(const Chain& chain, std::uint64_t number) {
    if (number == 0 || number >= chain.size()) {
        throw Error(ErrorCode::OutOfRange, "block time undefined for block " + std::to_string(number));
    }
    const auto blocks = chain.blocks();
    return blocks[number].timestamp - blocks[number - 1].timestamp;
}

Millis inclusion_time(const Chain& chain, std::string_view tx_id) {
    const auto at = chain.locate(tx_id);
    if (!at) throw Error(ErrorCode::NotFound, "transaction " + std::string(tx_id) + " not on chain");
    return chain.blocks()[at->block].timestamp - chain.transaction(*at).created_at();
}

double mean_block_time(const Chain& chain) {
    if (chain.size() < 2) throw Error(ErrorCode::InsufficientBlocks, "need at least two blocks");
    // The sum of block times telescopes to s_n - s_0.
    const auto blocks = chain.blocks();
    return static_cast<double>(blocks.back().timestamp - blocks.front().timestamp) /
           static_cast<double>(blocks.size() - 1);
}

void write_trace(std::ostream& out, const Chain& chain) {
    for (const Block& b : chain.blocks()) {
        out << "block," << b.number << ',' << b.timestamp.ms << ',' << b.mining_duration << '\n';
        for (const Transaction& tx : b.transactions) {
            out << "tx," << tx.id() << ',' << tx.created_at().ms << ',' << tx.sender() << ','
                << tx.payload().op << '\n';
        }
    }
}

}  // namespace chaintime
