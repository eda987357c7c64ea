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

#include <doctest.h>

#include <random>

#include "chaintime/error.hpp"
#include "chaintime/measures.hpp"

using namespace chaintime;

namespace {

const ChainParams kParams{SimTime{0}, 15000.0};

Transaction plain(std::string id, std::int64_t created, std::optional<std::int64_t> stamp = {}) {
    Payload p{"op", {}};
    if (stamp) p.args.emplace(std::string(kParamTimestamp), *stamp);
    return Transaction(std::move(id), "alice", SimTime{created}, std::move(p));
}

TxContext ctx(std::int64_t created, std::uint64_t block, std::int64_t ts, std::size_t pos = 0,
              const OracleCell* cell = nullptr, std::optional<std::int64_t> stamp = {}) {
    return TxContext(plain("t", created, stamp), block, SimTime{ts}, pos, kParams, cell);
}

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidContext;
}

}  // namespace

TEST_CASE("measure kinds") {
    CHECK(kAllMeasures.size() == 5);
    for (auto k : kAllMeasures) CHECK(parse_measure_kind(to_string(k)) == k);
    CHECK(parse_measure_kind("pa") == MeasureKind::Parameter);
    CHECK_FALSE(parse_measure_kind("sundial"));
    CHECK(is_synchronous(MeasureKind::StorageOracle));
    CHECK_FALSE(is_synchronous(MeasureKind::RequestResponseOracle));
}

TEST_CASE("context validation") {
    CHECK(code_of([] { TxContext(plain("t", 0), 1, SimTime{-5}, 0, kParams); }) == ErrorCode::InvalidContext);
    CHECK(code_of([] { TxContext(plain("t", 0), 1, SimTime{10}, 0, ChainParams{SimTime{0}, 0.0}); }) ==
          ErrorCode::InvalidContext);
    Chain c;
    c.append(Block{0, SimTime{0}, {}, 0});
    c.append(Block{1, SimTime{15000}, {plain("a", 100), plain("b", 200)}, 1000});
    const auto b = TxContext::on_chain(c, "b", kParams);
    CHECK(b.block_number() == 1);
    CHECK(b.position() == 1);
    CHECK(code_of([&] { (void)TxContext::on_chain(c, "zzz", kParams); }) == ErrorCode::NotFound);
}

TEST_CASE("block timestamp") {
    CHECK(measure_bt(ctx(100000, 3, 130000)).ms == 130000);
    const auto m = measure_bt(ctx(100000, 3, 130000));
    CHECK(m - SimTime{100000} == 30000);
    CHECK(measure_bt(ctx(1, 3, 130000, 0)) == measure_bt(ctx(2, 3, 130000, 1)));
}

TEST_CASE("block number") {
    CHECK(measure_bn(ctx(0, 0, 0)).ms == 0);
    CHECK(measure_bn(ChainParams{SimTime{1000}, 15000}, 10).ms == 151000);
    CHECK(measure_bn(ChainParams{SimTime{0}, 0.4}, 3).ms == 1);  // 1.2 rounds to nearest
    CHECK(bn_delta(5, 5, 15000) == 0);
    CHECK(bn_delta(3, 7, 15000) == 60000);
    CHECK(bn_delta(7, 3, 15000) == 60000);
}

TEST_CASE("parameter") {
    CHECK(measure_pa(ctx(100000, 1, 130000, 0, nullptr, 100000)).ms == 100000);
    CHECK(measure_pa(ctx(100000, 1, 130000, 0, nullptr, 95000)).ms == 95000);
    CHECK(code_of([] { (void)measure_pa(ctx(100000, 1, 130000)); }) == ErrorCode::MissingParameter);
}

TEST_CASE("storage oracle reads the last earlier write") {
    OracleCell cell("clock");
    cell.record({5, 0}, SimTime{75000});
    cell.record({8, 2}, SimTime{120000});
    CHECK(measure_so(ctx(0, 9, 140000, 0, &cell)).ms == 120000);
    CHECK(measure_so(ctx(0, 8, 130000, 3, &cell)).ms == 120000);
    CHECK(measure_so(ctx(0, 8, 130000, 1, &cell)).ms == 75000);
    CHECK(code_of([&] { (void)measure_so(ctx(0, 3, 50000, 0, &cell)); }) == ErrorCode::Uninitialized);
    CHECK(code_of([] { (void)measure_so(ctx(0, 3, 50000)); }) == ErrorCode::Uninitialized);
    CHECK(code_of([&] { cell.record({8, 1}, SimTime{1}); }) == ErrorCode::InvalidContext);
}

TEST_CASE("property: storage reads match a linear replay of the write log") {
    std::mt19937_64 rng(31);
    for (int round = 0; round < 200; ++round) {
        OracleCell cell("clock");
        std::vector<std::pair<OraclePosition, SimTime>> log;
        OraclePosition at{0, 0};
        std::int64_t value = 0;
        for (int i = 0; i < 40; ++i) {
            at.block += rng() % 3;
            at.index = (at.block == (log.empty() ? ~0ULL : log.back().first.block)) ? at.index + 1 + rng() % 3
                                                                                     : rng() % 4;
            value += static_cast<std::int64_t>(rng() % 60000);
            cell.record(at, SimTime{value});
            log.emplace_back(at, SimTime{value});
        }
        for (int q = 0; q < 100; ++q) {
            const OraclePosition read{rng() % (at.block + 2), rng() % 6};
            std::optional<SimTime> expect;
            for (const auto& [pos, v] : log) {
                if (pos < read) expect = v;
            }
            REQUIRE(cell.value_before(read) == expect);
        }
    }
}

TEST_CASE("storage provider cadence, outages and staleness") {
    StorageProvider p("clock", 60000, SimTime{0});
    std::vector<std::int64_t> created;
    for (int i = 0; i < 3; ++i) {
        auto tx = so_provider_tick(p, p.next_tick());
        REQUIRE(tx);
        created.push_back(tx->created_at().ms);
        CHECK(tx->payload().op == kOracleUpdateOp);
        CHECK(tx->payload().arg(kValueArg) == tx->created_at().ms);
    }
    CHECK(created == std::vector<std::int64_t>{0, 60000, 120000});

    StorageProvider down("clock", 60000, SimTime{0}, 0, {{SimTime{100000}, SimTime{200000}}});
    std::vector<std::int64_t> issued;
    while (down.next_tick() < SimTime{300000}) {
        if (auto tx = down.tick(down.next_tick())) issued.push_back(tx->created_at().ms);
    }
    CHECK(issued == std::vector<std::int64_t>{0, 60000, 240000});

    StorageProvider stale("clock", 60000, SimTime{60000}, 10000);
    CHECK(stale.tick(SimTime{60000})->payload().arg(kValueArg) == 50000);
    CHECK(in_outage({{SimTime{10}, SimTime{20}}}, SimTime{10}));
    CHECK_FALSE(in_outage({{SimTime{10}, SimTime{20}}}, SimTime{20}));
}

TEST_CASE("request/response round trip") {
    // Requesting block s_i=100000 with m_i=2000 becomes visible at 102000.
    RequestResponseProvider provider("timesrv", Distribution::constant(30000));
    RandomStream rng(1);
    const auto request_ctx = ctx(90000, 4, 100000);
    PendingMeasure pending = ro_request(request_ctx, 7);
    CHECK(pending.block_number == 4);
    CHECK(pending.block_timestamp.ms == 100000);

    const auto at = provider.callback_time(SimTime{102000}, rng);
    REQUIRE(at);
    CHECK(at->ms == 132000);
    const Transaction cb = provider.make_callback(7, *at);
    CHECK(cb.payload().arg(kRequestArg) == 7);
    CHECK(cb.payload().arg(kValueArg) == 132000);

    Chain chain;
    chain.append(Block{0, SimTime{0}, {}, 0});
    pending.callback_tx = cb.id();
    CHECK(code_of([&] { (void)ro_resolve(pending, chain); }) == ErrorCode::Unresolved);
    pending.callback_tx.reset();
    CHECK(code_of([&] { (void)ro_resolve(pending, chain); }) == ErrorCode::Unresolved);
    pending.callback_tx = cb.id();
    // Callback inclusion delay of 10000 does not change the carried value.
    chain.append(Block{1, SimTime{142000}, {cb}, 1000});
    CHECK(ro_resolve(pending, chain).ms == 132000);
}

TEST_CASE("request/response edge cases") {
    RandomStream rng(2);
    RequestResponseProvider instant("timesrv", Distribution::constant(0));
    CHECK(instant.callback_time(SimTime{100000}, rng)->ms == 100000);
    RequestResponseProvider gone("timesrv", Distribution::constant(30000), 0,
                                 {{SimTime{0}, SimTime{std::numeric_limits<std::int64_t>::max()}}});
    CHECK_FALSE(gone.callback_time(SimTime{100000}, rng));
    RequestResponseProvider jittery("timesrv", Distribution::uniform(1000, 50000));
    const auto a = jittery.callback_time(SimTime{0}, rng);
    const auto b = jittery.callback_time(SimTime{0}, rng);
    CHECK(a != b);
    CHECK(jittery.make_callback(1, *a).id() != jittery.make_callback(2, *b).id());
    RequestResponseProvider lagging("timesrv", Distribution::constant(0), 5000);
    CHECK(lagging.make_callback(1, SimTime{60000}).payload().arg(kValueArg) == 55000);
}
