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

#include "chaintime/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chaintime/error.hpp"

namespace chaintime {

namespace {

using json = nlohmann::ordered_json;

std::string child(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string item(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& object(const json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path.empty() ? "$" : path, "expected an object");
    return j;
}

const json& array(const json& j, const std::string& path) {
    if (!j.is_array()) throw SchemaError(path, "expected an array");
    return j;
}

void allow_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> keys) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
            throw SchemaError(child(path, it.key()), "unknown key");
        }
    }
}

std::int64_t integer(const json& j, const std::string& path) {
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_number_float()) {
        const double d = j.get<double>();
        if (d == static_cast<double>(static_cast<std::int64_t>(d))) return static_cast<std::int64_t>(d);
    }
    throw SchemaError(path, "expected an integer");
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw SchemaError(path, "expected a number");
    return j.get<double>();
}

std::string text(const json& j, const std::string& path) {
    if (!j.is_string()) throw SchemaError(path, "expected a string");
    return j.get<std::string>();
}

bool is_identifier(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

std::string measure_list() {
    std::string out;
    for (auto m : kAllMeasures) {
        if (!out.empty()) out += ", ";
        out += to_string(m);
    }
    return out;
}

Distribution distribution(const json& j, const std::string& path) {
    if (j.is_number()) return Distribution::constant(integer(j, path));
    object(j, path);
    if (!j.contains("kind")) throw SchemaError(child(path, "kind"), "missing");
    const std::string kind = text(j["kind"], child(path, "kind"));
    auto need = [&](std::string_view key) -> const json& {
        if (!j.contains(key)) throw SchemaError(child(path, key), "missing");
        return j[std::string(key)];
    };
    if (kind == "constant") {
        allow_keys(j, path, {"kind", "value_ms"});
        return Distribution::constant(integer(need("value_ms"), child(path, "value_ms")));
    }
    if (kind == "uniform") {
        allow_keys(j, path, {"kind", "min_ms", "max_ms"});
        return Distribution::uniform(integer(need("min_ms"), child(path, "min_ms")),
                                     integer(need("max_ms"), child(path, "max_ms")));
    }
    if (kind == "normal") {
        allow_keys(j, path, {"kind", "mean_ms", "stddev_ms", "min_ms", "max_ms"});
        return Distribution::normal(number(need("mean_ms"), child(path, "mean_ms")),
                                    number(need("stddev_ms"), child(path, "stddev_ms")),
                                    integer(need("min_ms"), child(path, "min_ms")),
                                    integer(need("max_ms"), child(path, "max_ms")));
    }
    throw SchemaError(child(path, "kind"), "unknown distribution " + kind + "; expected constant, uniform or normal");
}

json distribution_json(const Distribution& d) {
    switch (d.kind) {
        case Distribution::Kind::Constant: return json{{"kind", "constant"}, {"value_ms", d.value}};
        case Distribution::Kind::Uniform: return json{{"kind", "uniform"}, {"min_ms", d.min}, {"max_ms", d.max}};
        case Distribution::Kind::Normal:
            return json{{"kind", "normal"}, {"mean_ms", d.mean}, {"stddev_ms", d.stddev}, {"min_ms", d.min}, {"max_ms", d.max}};
    }
    return {};
}

void check_distribution(const Distribution& d, const std::string& path, Millis floor, bool strict) {
    if (d.lower_bound() > d.upper_bound()) throw SchemaError(path, "min exceeds max");
    if (d.kind == Distribution::Kind::Normal && !(d.stddev >= 0)) throw SchemaError(child(path, "stddev_ms"), "must be non-negative");
    const bool ok = strict ? d.lower_bound() > floor : d.lower_bound() >= floor;
    if (!ok) throw SchemaError(path, strict ? "samples must be positive" : "samples must be non-negative");
}

NetworkConfig network(const json& j, const std::string& path, NetworkConfig n) {
    object(j, path);
    allow_keys(j, path, {"genesis_timestamp_ms", "block_time", "mining_time", "inclusion_delay",
                         "inclusion_delay_by_sender", "miner_ordering", "assumed_mean_block_time_ms"});
    if (j.contains("genesis_timestamp_ms")) n.genesis = SimTime{integer(j["genesis_timestamp_ms"], child(path, "genesis_timestamp_ms"))};
    if (j.contains("block_time")) n.block_time = distribution(j["block_time"], child(path, "block_time"));
    if (j.contains("mining_time")) n.mining_time = distribution(j["mining_time"], child(path, "mining_time"));
    if (j.contains("inclusion_delay")) n.inclusion_delay = distribution(j["inclusion_delay"], child(path, "inclusion_delay"));
    if (j.contains("inclusion_delay_by_sender")) {
        const auto p = child(path, "inclusion_delay_by_sender");
        const json& o = object(j["inclusion_delay_by_sender"], p);
        n.inclusion_delay_by_sender.clear();
        for (auto it = o.begin(); it != o.end(); ++it) {
            n.inclusion_delay_by_sender[it.key()] = distribution(it.value(), child(p, it.key()));
        }
    }
    if (j.contains("assumed_mean_block_time_ms")) {
        n.assumed_mean_block_time_ms = number(j["assumed_mean_block_time_ms"], child(path, "assumed_mean_block_time_ms"));
    }
    if (j.contains("miner_ordering")) {
        const auto p = child(path, "miner_ordering");
        const std::string o = text(j["miner_ordering"], p);
        if (o == "fifo_by_arrival") n.ordering = MinerOrdering::FifoByArrival;
        else if (o == "priority_then_arrival") n.ordering = MinerOrdering::PriorityThenArrival;
        else if (o == "adversarial_reorder") n.ordering = MinerOrdering::AdversarialReorder;
        else throw SchemaError(p, "unknown ordering " + o + "; expected fifo_by_arrival, priority_then_arrival or adversarial_reorder");
    }
    return n;
}

std::map<std::string, Millis> keyed_millis(const json& j, const std::string& path) {
    object(j, path);
    std::map<std::string, Millis> out;
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = integer(it.value(), child(path, it.key()));
    return out;
}

FaultConfig faults(const json& j, const std::string& path) {
    object(j, path);
    allow_keys(j, path, {"miner_drift_ms", "parameter_lie_ms", "oracle_staleness_ms", "oracle_outages"});
    FaultConfig f;
    if (j.contains("miner_drift_ms")) {
        const auto p = child(path, "miner_drift_ms");
        const json& d = object(j["miner_drift_ms"], p);
        allow_keys(d, p, {"min", "max"});
        DriftRange r;
        if (d.contains("min")) r.min = integer(d["min"], child(p, "min"));
        if (d.contains("max")) r.max = integer(d["max"], child(p, "max"));
        f.miner_drift = r;
    }
    if (j.contains("parameter_lie_ms")) f.parameter_lie_ms = keyed_millis(j["parameter_lie_ms"], child(path, "parameter_lie_ms"));
    if (j.contains("oracle_staleness_ms")) f.oracle_staleness_ms = keyed_millis(j["oracle_staleness_ms"], child(path, "oracle_staleness_ms"));
    if (j.contains("oracle_outages")) {
        const auto p = child(path, "oracle_outages");
        const json& o = object(j["oracle_outages"], p);
        for (auto it = o.begin(); it != o.end(); ++it) {
            const auto pp = child(p, it.key());
            array(it.value(), pp);
            auto& list = f.oracle_outages[it.key()];
            for (std::size_t i = 0; i < it.value().size(); ++i) {
                const auto wp = item(pp, i);
                const json& w = object(it.value()[i], wp);
                allow_keys(w, wp, {"start_ms", "end_ms"});
                if (!w.contains("start_ms")) throw SchemaError(child(wp, "start_ms"), "missing");
                OutageWindow win{SimTime{integer(w["start_ms"], child(wp, "start_ms"))},
                                 SimTime{std::numeric_limits<std::int64_t>::max()}};
                if (w.contains("end_ms")) win.end = SimTime{integer(w["end_ms"], child(wp, "end_ms"))};
                if (!(win.start < win.end)) throw SchemaError(child(wp, "end_ms"), "must be after start_ms");
                list.push_back(win);
            }
        }
    }
    return f;
}

OracleConfig oracle(const json& j, const std::string& path) {
    object(j, path);
    allow_keys(j, path, {"id", "kind", "cadence_ms", "start_ms", "latency"});
    OracleConfig o;
    if (!j.contains("id")) throw SchemaError(child(path, "id"), "missing");
    o.id = text(j["id"], child(path, "id"));
    if (!j.contains("kind")) throw SchemaError(child(path, "kind"), "missing");
    const std::string kind = text(j["kind"], child(path, "kind"));
    if (kind == "storage") o.kind = OracleKind::Storage;
    else if (kind == "request_response") o.kind = OracleKind::RequestResponse;
    else throw SchemaError(child(path, "kind"), "unknown oracle kind " + kind + "; expected storage or request_response");
    if (j.contains("cadence_ms")) o.cadence_ms = integer(j["cadence_ms"], child(path, "cadence_ms"));
    if (j.contains("start_ms")) o.start = SimTime{integer(j["start_ms"], child(path, "start_ms"))};
    if (j.contains("latency")) o.latency = distribution(j["latency"], child(path, "latency"));
    return o;
}

ParticipantConfig participant(const json& j, const std::string& path) {
    object(j, path);
    allow_keys(j, path, {"id", "retry_ms", "priority", "rules"});
    ParticipantConfig p;
    if (!j.contains("id")) throw SchemaError(child(path, "id"), "missing");
    p.id = text(j["id"], child(path, "id"));
    if (j.contains("retry_ms")) p.retry_ms = integer(j["retry_ms"], child(path, "retry_ms"));
    if (j.contains("priority")) {
        const auto v = integer(j["priority"], child(path, "priority"));
        if (v < 0 || v > std::numeric_limits<std::uint32_t>::max()) throw SchemaError(child(path, "priority"), "out of range");
        p.priority = static_cast<std::uint32_t>(v);
    }
    if (j.contains("rules")) {
        const auto rp = child(path, "rules");
        array(j["rules"], rp);
        for (std::size_t i = 0; i < j["rules"].size(); ++i) {
            const auto ip = item(rp, i);
            const json& r = object(j["rules"][i], ip);
            allow_keys(r, ip, {"element", "trigger", "offset_ms", "at_ms", "probability"});
            ParticipantRule rule;
            if (!r.contains("element")) throw SchemaError(child(ip, "element"), "missing");
            rule.element = text(r["element"], child(ip, "element"));
            if (r.contains("trigger")) {
                const std::string t = text(r["trigger"], child(ip, "trigger"));
                if (t == "enabled") rule.trigger = TriggerKind::Enabled;
                else if (t == "due") rule.trigger = TriggerKind::Due;
                else if (t == "at") rule.trigger = TriggerKind::At;
                else throw SchemaError(child(ip, "trigger"), "unknown trigger " + t + "; expected enabled, due or at");
            }
            if (r.contains("offset_ms")) rule.offset = distribution(r["offset_ms"], child(ip, "offset_ms"));
            if (r.contains("at_ms")) rule.at = SimTime{integer(r["at_ms"], child(ip, "at_ms"))};
            if (r.contains("probability")) rule.probability = number(r["probability"], child(ip, "probability"));
            p.rules.push_back(std::move(rule));
        }
    }
    return p;
}

std::shared_ptr<const ProcessModel> process_model(const json& j, const std::string& path) {
    object(j, path);
    allow_keys(j, path, {"name", "start", "elements"});
    const std::string name = j.contains("name") ? text(j["name"], child(path, "name")) : "process";
    if (!j.contains("start")) throw SchemaError(child(path, "start"), "missing");
    const std::string start = text(j["start"], child(path, "start"));
    if (!j.contains("elements")) throw SchemaError(child(path, "elements"), "missing");
    const auto ep = child(path, "elements");
    array(j["elements"], ep);
    std::vector<Element> elements;
    for (std::size_t i = 0; i < j["elements"].size(); ++i) {
        const auto ip = item(ep, i);
        const json& e = object(j["elements"][i], ip);
        allow_keys(e, ip, {"id", "kind", "timer", "performer", "branches", "target", "next"});
        Element el;
        if (!e.contains("id")) throw SchemaError(child(ip, "id"), "missing");
        el.id = text(e["id"], child(ip, "id"));
        if (!is_identifier(el.id)) throw SchemaError(child(ip, "id"), "must be alphanumeric or underscore");
        if (!e.contains("kind")) throw SchemaError(child(ip, "kind"), "missing");
        const std::string kind = text(e["kind"], child(ip, "kind"));
        bool known = false;
        for (auto k : {ElementKind::StartTimer, ElementKind::Task, ElementKind::TimerCatch, ElementKind::MessageCatch,
                       ElementKind::EventGateway, ElementKind::LoopBack}) {
            if (kind == to_string(k)) {
                el.kind = k;
                known = true;
            }
        }
        if (!known) {
            throw SchemaError(child(ip, "kind"), "unknown element kind " + kind +
                                                     "; expected start_timer, task, timer, message, gateway or loop");
        }
        if (e.contains("timer")) {
            try {
                el.timer = parse_timer(text(e["timer"], child(ip, "timer")));
            } catch (const SchemaError&) {
                throw;
            } catch (const Error& err) {
                throw SchemaError(child(ip, "timer"), err.what());
            }
        }
        if (e.contains("performer")) el.performer = text(e["performer"], child(ip, "performer"));
        if (e.contains("target")) el.target = text(e["target"], child(ip, "target"));
        if (e.contains("next")) el.next = text(e["next"], child(ip, "next"));
        if (e.contains("branches")) {
            const auto bp = child(ip, "branches");
            array(e["branches"], bp);
            for (std::size_t b = 0; b < e["branches"].size(); ++b) el.branches.push_back(text(e["branches"][b], item(bp, b)));
        }
        elements.push_back(std::move(el));
    }
    try {
        return std::make_shared<const ProcessModel>(name, std::move(elements), start);
    } catch (const Error& err) {
        throw SchemaError(path, err.what());
    }
}

json process_json(const ProcessModel& m) {
    json elements = json::array();
    for (const auto& e : m.elements()) {
        json o{{"id", e.id}, {"kind", std::string(to_string(e.kind))}};
        if (e.timer) o["timer"] = format_timer(*e.timer);
        if (!e.performer.empty()) o["performer"] = e.performer;
        if (!e.branches.empty()) o["branches"] = e.branches;
        if (!e.target.empty()) o["target"] = e.target;
        if (e.next) o["next"] = *e.next;
        elements.push_back(std::move(o));
    }
    return json{{"name", m.name()}, {"start", m.start().id}, {"elements", std::move(elements)}};
}

}  // namespace

std::string_view to_string(MinerOrdering o) noexcept {
    switch (o) {
        case MinerOrdering::FifoByArrival: return "fifo_by_arrival";
        case MinerOrdering::PriorityThenArrival: return "priority_then_arrival";
        case MinerOrdering::AdversarialReorder: return "adversarial_reorder";
    }
    return "unknown";
}

std::string_view to_string(OracleKind k) noexcept {
    return k == OracleKind::Storage ? "storage" : "request_response";
}

std::string_view to_string(TriggerKind k) noexcept {
    switch (k) {
        case TriggerKind::Enabled: return "enabled";
        case TriggerKind::Due: return "due";
        case TriggerKind::At: return "at";
    }
    return "unknown";
}

const OracleConfig* ScenarioConfig::first_oracle(OracleKind kind) const {
    for (const auto& o : oracles) {
        if (o.kind == kind) return &o;
    }
    return nullptr;
}

ScenarioConfig parse_scenario(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        throw SchemaError("$", std::string("malformed JSON: ") + e.what());
    }
    object(root, "");
    allow_keys(root, "", {"name", "preset", "network", "faults", "oracles", "process", "measures", "participants",
                          "horizon_ms", "seeds"});

    ScenarioConfig c;
    c.seeds = {1};
    if (root.contains("preset")) {
        const std::string p = text(root["preset"], "preset");
        auto base = find_preset_scenario(p);
        if (!base) throw SchemaError("preset", "unknown preset " + p);
        c = std::move(*base);
    }
    if (root.contains("name")) {
        c.name = text(root["name"], "name");
        if (!is_identifier(c.name)) throw SchemaError("name", "must be alphanumeric or underscore");
    }
    if (root.contains("network")) c.network = network(root["network"], "network", c.network);
    if (root.contains("faults")) c.faults = faults(root["faults"], "faults");
    if (root.contains("oracles")) {
        array(root["oracles"], "oracles");
        c.oracles.clear();
        for (std::size_t i = 0; i < root["oracles"].size(); ++i) c.oracles.push_back(oracle(root["oracles"][i], item("oracles", i)));
    }
    if (root.contains("process")) {
        const json& p = root["process"];
        if (p.is_string()) {
            auto m = find_preset_model(p.get<std::string>());
            if (!m) throw SchemaError("process", "unknown process preset " + p.get<std::string>());
            c.process = std::make_shared<const ProcessModel>(std::move(*m));
            c.process_preset = p.get<std::string>();
        } else if (p.is_null()) {
            c.process.reset();
            c.process_preset.reset();
        } else {
            c.process = process_model(p, "process");
            c.process_preset.reset();
        }
    }
    if (root.contains("measures")) {
        array(root["measures"], "measures");
        c.measures.clear();
        for (std::size_t i = 0; i < root["measures"].size(); ++i) {
            const auto path = item("measures", i);
            const std::string name = text(root["measures"][i], path);
            auto m = parse_measure_kind(name);
            if (!m) throw SchemaError(path, "unknown measure " + name + "; expected one of " + measure_list());
            c.measures.push_back(*m);
        }
    }
    if (root.contains("participants")) {
        array(root["participants"], "participants");
        c.participants.clear();
        for (std::size_t i = 0; i < root["participants"].size(); ++i) {
            c.participants.push_back(participant(root["participants"][i], item("participants", i)));
        }
    }
    if (root.contains("horizon_ms")) c.horizon_ms = integer(root["horizon_ms"], "horizon_ms");
    if (root.contains("seeds")) {
        const json& s = root["seeds"];
        c.seeds.clear();
        if (s.is_number()) {
            const auto n = integer(s, "seeds");
            if (n < 1) throw SchemaError("seeds", "count must be positive");
            for (std::int64_t i = 1; i <= n; ++i) c.seeds.push_back(static_cast<std::uint64_t>(i));
        } else {
            array(s, "seeds");
            for (std::size_t i = 0; i < s.size(); ++i) {
                const auto v = integer(s[i], item("seeds", i));
                if (v < 0) throw SchemaError(item("seeds", i), "must be non-negative");
                c.seeds.push_back(static_cast<std::uint64_t>(v));
            }
        }
    }
    validate_scenario(c);
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::NotFound, "cannot read scenario " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

void validate_scenario(const ScenarioConfig& c) {
    if (!is_identifier(c.name)) throw SchemaError("name", "must be alphanumeric or underscore");
    if (c.horizon_ms <= 0) throw SchemaError("horizon_ms", "must be positive");
    if (c.seeds.empty()) throw SchemaError("seeds", "at least one seed required");
    if (c.network.genesis.ms < 0) throw SchemaError("network.genesis_timestamp_ms", "must be non-negative");
    check_distribution(c.network.block_time, "network.block_time", 0, true);
    check_distribution(c.network.mining_time, "network.mining_time", 0, false);
    check_distribution(c.network.inclusion_delay, "network.inclusion_delay", 0, false);
    if (!(c.network.assumed_mean_block_time_ms > 0)) throw SchemaError("network.assumed_mean_block_time_ms", "must be positive");

    if (c.measures.empty()) throw SchemaError("measures", "at least one measure required");
    for (std::size_t i = 0; i < c.measures.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (c.measures[i] == c.measures[j]) throw SchemaError(item("measures", i), "duplicate measure");
        }
    }

    std::set<std::string> oracle_ids;
    for (std::size_t i = 0; i < c.oracles.size(); ++i) {
        const auto& o = c.oracles[i];
        const auto p = item("oracles", i);
        if (!is_identifier(o.id)) throw SchemaError(child(p, "id"), "must be alphanumeric or underscore");
        if (!oracle_ids.insert(o.id).second) throw SchemaError(child(p, "id"), "duplicate oracle " + o.id);
        if (o.kind == OracleKind::Storage && o.cadence_ms <= 0) throw SchemaError(child(p, "cadence_ms"), "must be positive");
        if (o.kind == OracleKind::RequestResponse) check_distribution(o.latency, child(p, "latency"), 0, false);
    }
    // Without a process nothing is measured, so oracle-backed kinds are harmless.
    for (std::size_t i = 0; c.process && i < c.measures.size(); ++i) {
        if (c.measures[i] == MeasureKind::StorageOracle && !c.first_oracle(OracleKind::Storage)) {
            throw SchemaError(item("measures", i), "StorageOracle requires a storage oracle");
        }
        if (c.measures[i] == MeasureKind::RequestResponseOracle && !c.first_oracle(OracleKind::RequestResponse)) {
            throw SchemaError(item("measures", i), "RequestResponseOracle requires a request_response oracle");
        }
    }

    if (c.faults.miner_drift && c.faults.miner_drift->min > c.faults.miner_drift->max) {
        throw SchemaError("faults.miner_drift_ms", "min exceeds max");
    }
    for (const auto& [k, v] : c.faults.oracle_staleness_ms) {
        if (!oracle_ids.count(k)) throw SchemaError("faults.oracle_staleness_ms." + k, "unknown oracle");
    }
    for (const auto& [k, v] : c.faults.oracle_outages) {
        if (!oracle_ids.count(k)) throw SchemaError("faults.oracle_outages." + k, "unknown oracle");
    }

    std::set<std::string> participant_ids;
    for (std::size_t i = 0; i < c.participants.size(); ++i) {
        const auto& p = c.participants[i];
        const auto pp = item("participants", i);
        if (!is_identifier(p.id)) throw SchemaError(child(pp, "id"), "must be alphanumeric or underscore");
        if (!participant_ids.insert(p.id).second || oracle_ids.count(p.id)) {
            throw SchemaError(child(pp, "id"), "duplicate sender " + p.id);
        }
        if (p.retry_ms <= 0) throw SchemaError(child(pp, "retry_ms"), "must be positive");
        for (std::size_t r = 0; r < p.rules.size(); ++r) {
            const auto& rule = p.rules[r];
            const auto rp = item(child(pp, "rules"), r);
            if (!c.process || !c.process->find(rule.element)) throw SchemaError(child(rp, "element"), "unknown element " + rule.element);
            if (!(rule.probability >= 0.0 && rule.probability <= 1.0)) throw SchemaError(child(rp, "probability"), "must lie in [0, 1]");
            if (rule.trigger == TriggerKind::At && !rule.at) throw SchemaError(child(rp, "at_ms"), "required by trigger at");
            if (rule.offset.lower_bound() > rule.offset.upper_bound()) throw SchemaError(child(rp, "offset_ms"), "min exceeds max");
        }
    }
    for (const auto& [k, v] : c.faults.parameter_lie_ms) {
        if (!participant_ids.count(k)) throw SchemaError("faults.parameter_lie_ms." + k, "unknown participant");
    }
    for (const auto& [k, d] : c.network.inclusion_delay_by_sender) {
        const auto p = "network.inclusion_delay_by_sender." + k;
        if (!participant_ids.count(k) && !oracle_ids.count(k)) throw SchemaError(p, "unknown sender");
        check_distribution(d, p, 0, false);
    }
}

std::string scenario_to_json(const ScenarioConfig& c) {
    json root;
    root["name"] = c.name;
    if (c.preset) root["preset"] = *c.preset;
    root["network"] = json{{"genesis_timestamp_ms", c.network.genesis.ms},
                           {"block_time", distribution_json(c.network.block_time)},
                           {"mining_time", distribution_json(c.network.mining_time)},
                           {"inclusion_delay", distribution_json(c.network.inclusion_delay)},
                           {"inclusion_delay_by_sender", json::object()},
                           {"miner_ordering", std::string(to_string(c.network.ordering))},
                           {"assumed_mean_block_time_ms", c.network.assumed_mean_block_time_ms}};
    for (const auto& [k, d] : c.network.inclusion_delay_by_sender) {
        root["network"]["inclusion_delay_by_sender"][k] = distribution_json(d);
    }
    json f = json::object();
    if (c.faults.miner_drift) f["miner_drift_ms"] = json{{"min", c.faults.miner_drift->min}, {"max", c.faults.miner_drift->max}};
    if (!c.faults.parameter_lie_ms.empty()) f["parameter_lie_ms"] = c.faults.parameter_lie_ms;
    if (!c.faults.oracle_staleness_ms.empty()) f["oracle_staleness_ms"] = c.faults.oracle_staleness_ms;
    if (!c.faults.oracle_outages.empty()) {
        json o = json::object();
        for (const auto& [k, list] : c.faults.oracle_outages) {
            json arr = json::array();
            for (const auto& w : list) {
                json win{{"start_ms", w.start.ms}};
                if (w.end.ms != std::numeric_limits<std::int64_t>::max()) win["end_ms"] = w.end.ms;
                arr.push_back(std::move(win));
            }
            o[k] = std::move(arr);
        }
        f["oracle_outages"] = std::move(o);
    }
    root["faults"] = std::move(f);
    json oracles = json::array();
    for (const auto& o : c.oracles) {
        json j{{"id", o.id}, {"kind", std::string(to_string(o.kind))}};
        if (o.kind == OracleKind::Storage) {
            j["cadence_ms"] = o.cadence_ms;
            j["start_ms"] = o.start.value_or(c.network.genesis).ms;
        } else {
            j["latency"] = distribution_json(o.latency);
        }
        oracles.push_back(std::move(j));
    }
    root["oracles"] = std::move(oracles);
    if (c.process_preset) {
        root["process"] = *c.process_preset;
    } else if (c.process) {
        root["process"] = process_json(*c.process);
    } else {
        root["process"] = nullptr;
    }
    json measures = json::array();
    for (auto m : c.measures) measures.push_back(std::string(to_string(m)));
    root["measures"] = std::move(measures);
    json participants = json::array();
    for (const auto& p : c.participants) {
        json rules = json::array();
        for (const auto& r : p.rules) {
            json j{{"element", r.element}, {"trigger", std::string(to_string(r.trigger))}};
            if (r.trigger == TriggerKind::At) {
                j["at_ms"] = r.at->ms;
            } else {
                j["offset_ms"] = distribution_json(r.offset);
            }
            j["probability"] = r.probability;
            rules.push_back(std::move(j));
        }
        participants.push_back(json{{"id", p.id}, {"retry_ms", p.retry_ms}, {"priority", p.priority}, {"rules", std::move(rules)}});
    }
    root["participants"] = std::move(participants);
    root["horizon_ms"] = c.horizon_ms;
    root["seeds"] = c.seeds;
    return root.dump(2) + "\n";
}

}  // namespace chaintime
