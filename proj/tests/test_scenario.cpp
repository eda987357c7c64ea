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

#include <filesystem>

#include "chaintime/scenario.hpp"

using namespace chaintime;

namespace {

std::string schema_path(std::string_view text) {
    try {
        (void)parse_scenario(text);
    } catch (const SchemaError& e) {
        return e.path();
    }
    FAIL("accepted: " << text);
    return {};
}

std::string schema_message(std::string_view text) {
    try {
        (void)parse_scenario(text);
    } catch (const SchemaError& e) {
        return e.what();
    }
    return {};
}

const std::filesystem::path kScenarios = std::filesystem::path(CHAINTIME_SOURCE_DIR) / "scenarios";

}  // namespace

TEST_CASE("a preset reference expands to the bundled demo") {
    const auto c = parse_scenario(R"({"preset": "invoice-demo"})");
    CHECK(c.name == "invoice_demo");
    CHECK(c.process);
    CHECK(c.process->name() == "invoice_demo");
    CHECK(c.oracles.size() == 2);
    CHECK(c.participants.size() == 2);
    CHECK(c.measures.size() == 5);
    CHECK(c.seeds.size() == 100);
    CHECK(c.horizon_ms == 365 * kDay);
}

TEST_CASE("keys override the preset they extend") {
    const auto c = parse_scenario(R"({"preset": "invoice-demo", "name": "short", "horizon_ms": 86400000,
                                      "seeds": [4, 9], "measures": ["bt", "Parameter"]})");
    CHECK(c.name == "short");
    CHECK(c.horizon_ms == kDay);
    CHECK(c.seeds == std::vector<std::uint64_t>{4, 9});
    CHECK(c.measures == std::vector<MeasureKind>{MeasureKind::BlockTimestamp, MeasureKind::Parameter});
    CHECK(c.process);
}

TEST_CASE("defaults for a bare chain") {
    const auto c = parse_scenario(R"({"name": "bare"})");
    CHECK_FALSE(c.process);
    CHECK(c.seeds == std::vector<std::uint64_t>{1});
    CHECK(c.network.block_time == Distribution::normal(15190, 2710, 4460, 30310));
    CHECK(c.network.genesis.ms == 1577750400000);
    CHECK(parse_scenario(R"({"seeds": 3})").seeds == std::vector<std::uint64_t>{1, 2, 3});
}

TEST_CASE("errors name the offending path") {
    CHECK(schema_path(R"({"preset": "invoice-demo", "oracles": [{"id": "clock", "kind": "storage", "cadence_ms": -5}]})") ==
          "oracles[0].cadence_ms");
    CHECK(schema_path(R"({"colour": 1})") == "colour");
    CHECK(schema_path(R"({"network": {"block_time": {"kind": "normal", "mean_ms": 1}}})") == "network.block_time.max_ms");
    CHECK(schema_path(R"({"preset": "nope"})") == "preset");
    CHECK(schema_path(R"({"seeds": 0})") == "seeds");
    CHECK(schema_path(R"({"preset": "invoice-demo", "oracles": [], "measures": ["StorageOracle"]})") == "measures[0]");
    CHECK(schema_path("{") == "$");
    CHECK(schema_path(R"({"process": {"start": "a", "elements": [{"id": "a", "kind": "task", "next": "b"}]}})") ==
          "process");
    CHECK(schema_path(R"({"process": {"start": "a", "elements": [{"id": "a", "kind": "timer", "timer": "P7X"}]}})") ==
          "process.elements[0].timer");
    CHECK(schema_path(R"({"preset": "invoice-demo", "participants": [{"id": "mno", "rules": [{"element": "ghost"}]}]})")
              .rfind("participants[0].rules[0]", 0) == 0);
}

TEST_CASE("an unknown measure lists the valid ones") {
    const std::string msg = schema_message(R"({"measures": ["Sundial"]})");
    for (auto k : kAllMeasures) CHECK(msg.find(std::string(to_string(k))) != std::string::npos);
}

TEST_CASE("printed configuration parses back to itself") {
    const auto c = *find_preset_scenario("invoice-demo");
    const std::string once = scenario_to_json(c);
    const std::string twice = scenario_to_json(parse_scenario(once));
    CHECK(once == twice);
    CHECK(once.find("\"cadence_ms\": 60000") != std::string::npos);
    CHECK(once.find("\"value_ms\": 30000") != std::string::npos);
}

TEST_CASE("bundled scenario files load") {
    for (auto name : {"invoice_demo.json", "overtaking.json", "fifo_race.json", "deadline.json"}) {
        INFO(name);
        const auto c = load_scenario(kScenarios / name);
        CHECK(!c.seeds.empty());
        CHECK(scenario_to_json(parse_scenario(scenario_to_json(c))) == scenario_to_json(c));
    }
    CHECK_THROWS_AS(load_scenario(kScenarios / "missing.json"), Error);
}

TEST_CASE("sender overrides must name a sender") {
    CHECK(schema_path(R"({"network": {"inclusion_delay_by_sender": {"ghost": {"kind": "constant", "value_ms": 1}}}})") ==
          "network.inclusion_delay_by_sender.ghost");
}
