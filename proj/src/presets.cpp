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

#include "chaintime/error.hpp"
#include "chaintime/process.hpp"
#include "chaintime/scenario.hpp"

namespace chaintime {

namespace {

constexpr std::string_view kInvoiceDemo = "invoice-demo";

// Monthly invoicing choreography between a mobile network operator and a
// customer: invoice, then race payment and complaint against a seven-day
// overdue timer; fines and invoice adjustments loop back to the race.
ProcessModel invoice_model() {
    std::vector<Element> e;
    e.push_back(Element::start_timer("monthly", parse_timer("R/2020-01-01/P1M"), "send_invoice"));
    e.push_back(Element::task("send_invoice", "mno", "await_reaction"));
    e.push_back(Element::gateway("await_reaction", {"overdue", "payment", "complaint"}));
    e.push_back(Element::timer_catch("overdue", parse_timer("P7D"), "add_fines"));
    e.push_back(Element::task("add_fines", "mno", "fines_loop"));
    e.push_back(Element::loop_back("fines_loop", "await_reaction"));
    e.push_back(Element::message_catch("payment"));
    e.push_back(Element::message_catch("complaint", "patience"));
    e.push_back(Element::timer_catch("patience", parse_timer("R7/PT24H"), "adjust_invoice"));
    e.push_back(Element::task("adjust_invoice", "mno", "adjust_loop"));
    e.push_back(Element::loop_back("adjust_loop", "await_reaction"));
    return ProcessModel("invoice_demo", std::move(e), "monthly");
}

ParticipantRule rule(std::string element, TriggerKind trigger, Distribution offset, double probability = 1.0) {
    ParticipantRule r;
    r.element = std::move(element);
    r.trigger = trigger;
    r.offset = offset;
    r.probability = probability;
    return r;
}

ScenarioConfig invoice_scenario() {
    ScenarioConfig c;
    c.name = "invoice_demo";
    c.preset = std::string(kInvoiceDemo);
    c.process = std::make_shared<const ProcessModel>(invoice_model());
    c.process_preset = std::string(kInvoiceDemo);

    OracleConfig clock;
    clock.id = "clock";
    clock.kind = OracleKind::Storage;
    clock.cadence_ms = 60 * kSecond;
    OracleConfig timesrv;
    timesrv.id = "timesrv";
    timesrv.kind = OracleKind::RequestResponse;
    timesrv.latency = Distribution::constant(30 * kSecond);
    c.oracles = {clock, timesrv};

    // Timer claims land at least 30 s after the due instant, which exceeds the
    // largest inclusion delay; an honest clock therefore never lets a claim
    // overtake a message created before the deadline.
    ParticipantConfig mno;
    mno.id = "mno";
    mno.retry_ms = 2 * kMinute;
    mno.rules = {
        rule("send_invoice", TriggerKind::Due, Distribution::uniform(-kMinute, 2 * kMinute)),
        rule("overdue", TriggerKind::Due, Distribution::uniform(30 * kSecond, 5 * kMinute)),
        rule("add_fines", TriggerKind::Enabled, Distribution::uniform(kMinute, kHour)),
        rule("patience", TriggerKind::Due, Distribution::uniform(-kMinute, 2 * kMinute)),
        rule("adjust_invoice", TriggerKind::Enabled, Distribution::uniform(kHour, kDay)),
    };
    ParticipantConfig customer;
    customer.id = "customer";
    customer.retry_ms = kHour;
    customer.rules = {
        rule("payment", TriggerKind::Enabled, Distribution::uniform(kHour, 10 * kDay), 0.6),
        rule("complaint", TriggerKind::Enabled, Distribution::uniform(kHour, 3 * kDay), 0.25),
    };
    c.participants = {mno, customer};
    c.horizon_ms = 365 * kDay;
    c.seeds.clear();
    for (std::uint64_t s = 1; s <= 100; ++s) c.seeds.push_back(s);
    return c;
}

}  // namespace

std::optional<ProcessModel> find_preset_model(std::string_view name) {
    if (name == kInvoiceDemo) return invoice_model();
    return std::nullopt;
}

std::vector<std::string> preset_names() { return {std::string(kInvoiceDemo)}; }

std::optional<ScenarioConfig> find_preset_scenario(std::string_view name) {
    if (name == kInvoiceDemo) return invoice_scenario();
    return std::nullopt;
}

}  // namespace chaintime
