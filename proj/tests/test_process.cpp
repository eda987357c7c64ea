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

#include "chaintime/process.hpp"

using namespace chaintime;

namespace {

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidContext;
}

// Brute-force reading of the four outcome definitions, written out as the
// two chained inequalities rather than as a pair of booleans.
Outcome brute_force(std::int64_t s_tx, std::int64_t s_e, std::int64_t m) {
    if (s_tx < s_e && s_e <= m) return Outcome::FP;
    if (m < s_e && s_e <= s_tx) return Outcome::FN;
    if (s_e <= s_tx && s_e <= m) return Outcome::TP;
    return Outcome::TN;
}

const SimTime kGenesis{1577750400000};  // 2019-12-31
const SimTime kJan1{1577836800000};
const ChainParams kParams{kGenesis, 15190.0};

std::shared_ptr<const ProcessModel> invoice() {
    return std::make_shared<const ProcessModel>(*find_preset_model("invoice-demo"));
}

struct Feed {
    std::uint64_t block = 0;
    int n = 0;

    TxContext operator()(std::string op, SimTime created, SimTime block_ts, std::optional<std::int64_t> activation = {}) {
        Payload p{std::move(op), {}};
        p.args.emplace(std::string(kParamTimestamp), created.ms);
        if (activation) p.args.emplace(std::string(kActivationArg), *activation);
        Transaction tx("tx_" + std::to_string(n++), "someone", created, std::move(p));
        return TxContext(std::move(tx), ++block, block_ts, 0, kParams);
    }
};

std::vector<Element> valid_elements() {
    return {Element::task("a", "p", "gw"), Element::gateway("gw", {"t", "m"}),
            Element::timer_catch("t", parse_timer("PT1H"), "b"), Element::task("b", "p"),
            Element::message_catch("m")};
}

}  // namespace

TEST_CASE("absolute classification examples") {
    CHECK(classify_absolute(SimTime{990}, SimTime{1000}, SimTime{1020}) == Outcome::FP);
    CHECK(classify_absolute(SimTime{1010}, SimTime{1000}, SimTime{995}) == Outcome::FN);
    CHECK(classify_absolute(SimTime{1010}, SimTime{1000}, SimTime{1005}) == Outcome::TP);
    CHECK(classify_absolute(SimTime{990}, SimTime{1000}, SimTime{995}) == Outcome::TN);
    CHECK(classify_absolute(SimTime{1000}, SimTime{1000}, SimTime{1000}) == Outcome::TP);
}

TEST_CASE("property: absolute classification matches brute force and partitions") {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<std::int64_t> d(0, 2000);
    int seen[4] = {0, 0, 0, 0};
    for (int i = 0; i < 100000; ++i) {
        const auto s_tx = d(rng), s_e = d(rng), m = d(rng);
        const Outcome o = classify_absolute(SimTime{s_tx}, SimTime{s_e}, SimTime{m});
        REQUIRE(o == brute_force(s_tx, s_e, m));
        const int matches = (s_tx < s_e && s_e <= m) + (m < s_e && s_e <= s_tx) + (s_e <= s_tx && s_e <= m) +
                            (s_tx < s_e && m < s_e);
        REQUIRE(matches == 1);
        ++seen[static_cast<int>(o)];
    }
    for (int c : seen) CHECK(c > 0);
}

TEST_CASE("relative checks") {
    // Honest parameters give the true delta on both sides.
    const auto honest = check_relative(SimTime{100}, SimTime{700}, 500, SimTime{100}, SimTime{700});
    CHECK(honest.outcome == Outcome::TP);
    CHECK(check_relative(SimTime{100}, SimTime{400}, 500, SimTime{100}, SimTime{400}).outcome == Outcome::TN);

    // First tx waited 30 s for inclusion, second none.
    const SimTime t1{0}, t2{604790000};
    const auto bt = check_relative(t1 + 30000, t2, 604800000, t1, t2);
    CHECK(bt.true_delta == 604790000);
    CHECK(bt.measured_delta == 604760000);
    CHECK(bt.outcome == Outcome::TN);

    CHECK(check_relative(SimTime{5}, SimTime{1}, 0, SimTime{1}, SimTime{5}).outcome == Outcome::FN);
    CHECK(check_relative(SimTime{5}, SimTime{1}, 0, SimTime{1}, SimTime{5}).negative_delta);
    CHECK(check_relative(SimTime{1}, SimTime{9}, 0, SimTime{1}, SimTime{9}).outcome == Outcome::TP);
}

TEST_CASE("property: honest parameters never misclassify a delta") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> d(0, 1000000);
    for (int i = 0; i < 20000; ++i) {
        const SimTime a{d(rng)}, b{d(rng)};
        const auto o = check_relative(a, b, d(rng) - 500000, a, b).outcome;
        REQUIRE((o == Outcome::TP || o == Outcome::TN));
    }
}

TEST_CASE("cycle advancement") {
    CycleState s(CycleRelTimer{100, 3}, SimTime{0});
    CHECK(s.due(0).ms == 100);
    CHECK(s.due(2).ms == 300);
    auto a = cycle_advance(s, SimTime{150});
    CHECK(a.accepted);
    CHECK(a.iteration == 0);
    CHECK(s.k() == 1);
    CHECK(a.missed.empty());

    CycleState late(CycleRelTimer{100, 3}, SimTime{0});
    a = cycle_advance(late, SimTime{250});
    CHECK(a.accepted);
    CHECK(a.iteration == 0);
    CHECK(a.missed == std::vector<std::uint64_t>{1});
    CHECK(late.k() == 1);  // one step at a time

    CycleState early(CycleRelTimer{100, 3}, SimTime{0});
    CHECK_FALSE(cycle_advance(early, SimTime{99}).accepted);
    CHECK(early.k() == 0);

    for (int i = 0; i < 3; ++i) CHECK(cycle_advance(early, SimTime{1000}).accepted);
    CHECK(early.exhausted());
    CHECK(code_of([&] { (void)cycle_advance(early, SimTime{2000}); }) == ErrorCode::CycleExhausted);
    CHECK(code_of([] { CycleState bad(DurationTimer{5}, SimTime{0}); }) == ErrorCode::InvalidModel);
}

TEST_CASE("property: k advances by exactly one per accepted iteration") {
    std::mt19937_64 rng(8);
    CycleState s(parse_timer("R/2020-01-01/P1M"), SimTime{0});
    SimTime now = kJan1;
    for (int i = 0; i < 500; ++i) {
        now += static_cast<Millis>(rng() % (40 * kDay));
        const auto before = s.k();
        const auto a = s.advance(now);
        REQUIRE(s.k() == before + (a.accepted ? 1 : 0));
        for (auto j : a.missed) REQUIRE(s.due(j) < now);
    }
}

TEST_CASE("deferred choice resolution") {
    const std::vector<std::string> branches{"timer", "message"};
    auto r = resolve_deferred_choice(branches, {{"message", false}, {"timer", true}},
                                     {{"message", SimTime{990}}, {"timer", SimTime{1000}}});
    CHECK(r.actual == "timer");
    CHECK(r.expected == "message");
    CHECK(r.outcome == Outcome::Mismatch);
    r = resolve_deferred_choice(branches, {{"message", true}}, {{"message", SimTime{990}}, {"timer", SimTime{1000}}});
    CHECK(r.outcome == Outcome::Match);
    r = resolve_deferred_choice(branches, {{"timer", true}}, {{"timer", SimTime{1000}}});
    CHECK(r.outcome == Outcome::Match);
    // Ties go to the branch listed first.
    r = resolve_deferred_choice(branches, {{"message", true}}, {{"message", SimTime{5}}, {"timer", SimTime{5}}});
    CHECK(r.expected == "timer");
    CHECK(code_of([&] { (void)resolve_deferred_choice(branches, {{"timer", false}}, {}); }) ==
          ErrorCode::NoEligibleBranch);
}

TEST_CASE("model validation") {
    CHECK_NOTHROW(ProcessModel("ok", valid_elements(), "a"));
    auto broken = [](auto edit, std::string start = "a") {
        auto e = valid_elements();
        edit(e);
        return code_of([&] { ProcessModel("bad", e, start); });
    };
    CHECK(broken([](auto&) {}, "zz") == ErrorCode::InvalidModel);
    CHECK(broken([](auto& e) { e.push_back(Element::task("a", "p")); }) == ErrorCode::InvalidModel);
    CHECK(broken([](auto& e) { e[3].next = "nowhere"; }) == ErrorCode::InvalidModel);
    CHECK(broken([](auto& e) { e[1].branches = {"t"}; }) == ErrorCode::InvalidModel);
    CHECK(broken([](auto& e) { e[1].branches = {"t", "b"}; }) == ErrorCode::InvalidModel);
    CHECK(broken([](auto& e) { e[1].branches = {"t", "t"}; }) == ErrorCode::InvalidModel);
    CHECK(broken([](auto& e) { e[2].timer = parse_timer("R3/PT1H"); }) == ErrorCode::InvalidModel);
    CHECK(broken([](auto& e) { e.push_back(Element::task("island", "p")); }) == ErrorCode::InvalidModel);
    CHECK(broken([](auto& e) { e.push_back(Element::loop_back("l", "l2")); e.push_back(Element::loop_back("l2", "a")); e[3].next = "l"; }) ==
          ErrorCode::InvalidModel);
    CHECK(broken([](auto& e) {
              e.push_back(Element::timer_catch("c", parse_timer("R/PT1H"), "a"));
              e[3].next = "c";
          }) == ErrorCode::InvalidModel);
    CHECK(broken([](auto& e) {
              e.push_back(Element::start_timer("s", parse_timer("P1D"), "a"));
              e[3].next = "s";
          }) == ErrorCode::InvalidModel);
    CHECK(find_preset_model("invoice-demo"));
    CHECK_FALSE(find_preset_model("nope"));
}

TEST_CASE("invoice under parameters: an in-time payment") {
    ProcessInstance p(invoice(), MeasureKind::Parameter, kParams);
    CHECK(p.token() == "monthly");
    Feed feed;
    // Too early for the first monthly due date.
    auto r = p.apply_transaction(feed("send_invoice", kJan1 - kMinute, kJan1 + kMinute));
    CHECK(r.verdict == Verdict::Rejected);
    CHECK(r.reason == ErrorCode::GuardRejected);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].constraint == ConstraintType::Cycle);
    CHECK(r.records[0].outcome == Outcome::TN);

    r = p.apply_transaction(feed("send_invoice", kJan1 + kMinute, kJan1 + 2 * kMinute));
    CHECK(r.verdict == Verdict::Accepted);
    CHECK(r.records[0].outcome == Outcome::TP);
    CHECK(r.records[0].iteration == 0);
    CHECK(p.token() == "await_reaction");
    const auto act = static_cast<std::int64_t>(p.enabled().activation);

    r = p.apply_transaction(feed("adjust_invoice", kJan1 + kHour, kJan1 + kHour));
    CHECK(r.reason == ErrorCode::ElementNotEnabled);

    r = p.apply_transaction(feed("payment", kJan1 + 2 * kDay, kJan1 + 2 * kDay + 10 * kSecond, act));
    CHECK(r.verdict == Verdict::Accepted);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].element == "overdue");
    CHECK(r.records[0].constraint == ConstraintType::Relative);
    CHECK(r.records[0].outcome == Outcome::TN);
    CHECK(p.token() == "monthly");  // the case ended; the monthly cycle continues

    const auto fin = p.finish();
    REQUIRE(fin.size() == 1);
    CHECK(fin[0].constraint == ConstraintType::DeferredChoice);
    CHECK(fin[0].outcome == Outcome::Match);
    CHECK(fin[0].expected_branch == "payment");
}

TEST_CASE("invoice under block timestamps: fines added too early") {
    ProcessInstance p(invoice(), MeasureKind::BlockTimestamp, kParams);
    Feed feed;
    const SimTime sent = kJan1 + kMinute;
    REQUIRE(p.apply_transaction(feed("send_invoice", sent, sent)).verdict == Verdict::Accepted);

    // Created ten seconds before the week is up, mined five seconds after.
    auto r = p.apply_transaction(feed("add_fines", sent + 7 * kDay - 10 * kSecond, sent + 7 * kDay + 5 * kSecond));
    CHECK(r.verdict == Verdict::Accepted);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].element == "overdue");
    CHECK(r.records[0].outcome == Outcome::FP);
    CHECK(r.records[0].ground_truth_ms == 7 * kDay - 10 * kSecond);
    CHECK(r.records[0].measured_ms == 7 * kDay + 5 * kSecond);
    CHECK(p.token() == "await_reaction");  // back through the loop

    // A payment after the next overdue instant is refused at the gateway.
    const SimTime anchor = sent + 7 * kDay + 5 * kSecond;
    r = p.apply_transaction(feed("payment", anchor + 7 * kDay - kMinute, anchor + 7 * kDay + kMinute));
    CHECK(r.verdict == Verdict::Rejected);
    CHECK(r.reason == ErrorCode::GuardRejected);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].outcome == Outcome::FP);

    const auto fin = p.finish();
    REQUIRE(fin.size() == 1);
    CHECK(fin[0].actual_branch == "overdue");
    CHECK(fin[0].outcome == Outcome::Match);
}

TEST_CASE("a parameter measure needs the parameter") {
    ProcessInstance p(invoice(), MeasureKind::Parameter, kParams);
    Transaction bare("x", "mno", kJan1 + kMinute, Payload{"send_invoice", {}});
    const auto r = p.apply_transaction(TxContext(bare, 5, kJan1 + kMinute, 0, kParams));
    CHECK(r.verdict == Verdict::Rejected);
    CHECK(r.reason == ErrorCode::MissingParameter);
    CHECK(r.records.empty());
}

TEST_CASE("request/response decisions wait for the callback") {
    ProcessInstance p(invoice(), MeasureKind::RequestResponseOracle, kParams);
    Feed feed;
    const auto ctx = feed("send_invoice", kJan1 + kMinute, kJan1 + 2 * kMinute);
    auto r = p.apply_transaction(ctx);
    CHECK(r.verdict == Verdict::Pending);
    CHECK(r.records.empty());
    CHECK(p.has_pending(ctx.tx().id()));
    CHECK(p.token() == "monthly");

    r = p.finalize_pending(ctx.tx().id(), kJan1 + 3 * kMinute);
    CHECK(r.verdict == Verdict::Accepted);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].via_callback);
    CHECK(r.records[0].measured_ms == kJan1.ms + 3 * kMinute);
    CHECK(p.token() == "await_reaction");
    CHECK(p.pending_count() == 0);
    CHECK(code_of([&] { (void)p.finalize_pending(ctx.tx().id(), kJan1); }) == ErrorCode::NotFound);

    // A request that never gets an answer is reported as stuck.
    const auto stuck = feed("payment", kJan1 + kDay, kJan1 + kDay);
    CHECK(p.apply_transaction(stuck).verdict == Verdict::Pending);
    const auto fin = p.finish();
    REQUIRE(fin.size() == 1);
    CHECK(fin[0].outcome == Outcome::StuckPending);
    CHECK_FALSE(fin[0].measured_ms);
    CHECK(fin[0].element == "overdue");
}

TEST_CASE("reclassification reproduces recorded outcomes") {
    GuardRecord r;
    r.basis = Basis::Deadline;
    r.ground_truth_ms = 990;
    r.threshold_ms = 1000;
    r.measured_ms = 1020;
    CHECK(reclassify(r) == Outcome::FP);
    r.basis = Basis::Delta;
    r.ground_truth_ms = 10;
    r.threshold_ms = 5;
    r.measured_ms = 1;
    CHECK(reclassify(r) == Outcome::FN);
    r.measured_ms.reset();
    CHECK(reclassify(r) == Outcome::StuckPending);
    r.basis = Basis::Choice;
    r.measured_ms = 0;
    r.expected_branch = "a";
    r.actual_branch = "b";
    CHECK(reclassify(r) == Outcome::Mismatch);
}
