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

#include "chaintime/simulator.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <unordered_map>

#include "chaintime/error.hpp"

namespace chaintime {

std::string_view to_string(EventKind kind) noexcept {
    switch (kind) {
        case EventKind::TxCreated: return "TxCreated";
        case EventKind::OracleUpdate: return "OracleUpdate";
        case EventKind::BlockMiningStart: return "BlockMiningStart";
        case EventKind::BlockVisible: return "BlockVisible";
        case EventKind::OracleCallback: return "OracleCallback";
    }
    return "unknown";
}

std::string_view to_string(OracleEvent::Kind kind) noexcept {
    switch (kind) {
        case OracleEvent::Kind::Update: return "update";
        case OracleEvent::Kind::Request: return "request";
        case OracleEvent::Kind::Callback: return "callback";
    }
    return "unknown";
}

void EventQueue::push(SimTime at, EventKind kind, std::uint64_t ref) {
    heap_.push(Event{at, kind, next_seq_++, ref});
}

Event EventQueue::pop() {
    Event e = heap_.top();
    heap_.pop();
    return e;
}

struct Simulator::Impl {
    struct Planned {
        std::size_t participant;
        std::string element;
        std::optional<std::int64_t> activation;
        bool retry;
    };
    struct PoolEntry {
        Transaction tx;
        SimTime ready;
        std::uint64_t seq;
    };
    struct Rejection {
        std::size_t participant;
        std::string element;
        std::optional<std::int64_t> activation;
    };
    struct Notices {
        std::vector<Enablement> enablements;
        std::vector<Rejection> rejections;
        std::vector<std::uint64_t> requests;
    };
    struct Request {
        Transaction tx;
    };

    ScenarioConfig cfg;
    std::uint64_t seed;
    MeasureKind measure;
    RunOptions options;
    ChainParams params;
    SimTime horizon;

    RandomStream block_rng;
    RandomStream mining_rng;
    RandomStream drift_rng;
    RandomStream order_rng;
    std::map<std::string, RandomStream, std::less<>> inclusion_rng;
    std::vector<RandomStream> participant_rng;
    std::vector<RandomStream> oracle_rng;  // request/response providers

    std::vector<StorageProvider> storage;
    std::vector<OracleCell> cells;
    std::vector<RequestResponseProvider> responders;
    std::unique_ptr<ProcessInstance> instance;
    std::map<std::string, std::size_t, std::less<>> participant_index;

    EventQueue queue;
    std::unordered_map<std::uint64_t, Planned> planned;
    std::uint64_t next_ref = 0;
    std::unordered_map<std::uint64_t, Notices> notices;
    std::unordered_map<std::uint64_t, Request> requests;
    std::uint64_t next_request = 1;
    std::vector<PoolEntry> pool;
    std::uint64_t pool_seq = 0;
    std::map<std::string, std::uint64_t, std::less<>> issued;

    Chain chain;
    std::uint64_t next_number = 0;
    SimTime prev_timestamp;
    SimTime now;
    bool finished = false;
    RunTrace trace;

    Impl(const ScenarioConfig& c, std::uint64_t s, MeasureKind m, RunOptions o)
        : cfg(c),
          seed(s),
          measure(m),
          options(o),
          params(c.chain_params()),
          horizon(c.horizon()),
          block_rng(substream(s, "network.block_time")),
          mining_rng(substream(s, "network.mining")),
          drift_rng(substream(s, "faults.drift")),
          order_rng(substream(s, "miner.order")) {
        validate_scenario(cfg);
        trace.scenario = cfg.name;
        trace.seed = seed;
        trace.measure = measure;

        for (const auto& oc : cfg.oracles) {
            const Millis stale = cfg.faults.oracle_staleness_ms.count(oc.id) ? cfg.faults.oracle_staleness_ms.at(oc.id) : 0;
            std::vector<OutageWindow> outages;
            if (auto it = cfg.faults.oracle_outages.find(oc.id); it != cfg.faults.oracle_outages.end()) outages = it->second;
            if (oc.kind == OracleKind::Storage) {
                storage.emplace_back(oc.id, oc.cadence_ms, oc.start.value_or(params.genesis), stale, outages);
                cells.emplace_back(oc.id);
            } else {
                responders.emplace_back(oc.id, oc.latency, stale, outages);
                oracle_rng.push_back(substream(seed, "oracle." + oc.id));
            }
        }
        for (std::size_t i = 0; i < cfg.participants.size(); ++i) {
            participant_index.emplace(cfg.participants[i].id, i);
            participant_rng.push_back(substream(seed, "participant." + cfg.participants[i].id));
        }

        now = params.genesis;
        seal(Block{0, params.genesis, {}, 0});

        for (std::size_t k = 0; k < storage.size(); ++k) {
            if (storage[k].next_tick() <= horizon) queue.push(storage[k].next_tick(), EventKind::OracleUpdate, k);
        }
        schedule_mining(params.genesis);

        if (cfg.process) {
            instance = std::make_unique<ProcessInstance>(cfg.process, measure, params);
            react(instance->enabled(), params.genesis);
        }
        for (std::size_t p = 0; p < cfg.participants.size(); ++p) {
            for (const auto& rule : cfg.participants[p].rules) {
                if (rule.trigger != TriggerKind::At) continue;
                if (*rule.at < params.genesis || *rule.at > horizon) continue;
                plan(*rule.at, Planned{p, rule.element, std::nullopt, false});
            }
        }
    }

    void plan(SimTime at, Planned p) {
        const std::uint64_t ref = next_ref++;
        planned.emplace(ref, std::move(p));
        queue.push(at, EventKind::TxCreated, ref);
    }

    void schedule_mining(SimTime from) {
        if (options.max_blocks && next_number > *options.max_blocks) return;
        const SimTime at = from + cfg.network.block_time.sample(block_rng);
        if (at <= horizon) queue.push(at, EventKind::BlockMiningStart);
    }

    RandomStream& inclusion_stream(const std::string& sender) {
        auto it = inclusion_rng.find(sender);
        if (it == inclusion_rng.end()) it = inclusion_rng.emplace(sender, substream(seed, "inclusion." + sender)).first;
        return it->second;
    }

    std::string next_id(const std::string& sender) { return sender + "_" + std::to_string(issued[sender]++); }

    void admit(Transaction tx) {
        const auto over = cfg.network.inclusion_delay_by_sender.find(tx.sender());
        const Distribution& dist =
            over != cfg.network.inclusion_delay_by_sender.end() ? over->second : cfg.network.inclusion_delay;
        const Millis delay = dist.sample(inclusion_stream(tx.sender()));
        const SimTime ready = tx.created_at() + delay;
        pool.push_back(PoolEntry{std::move(tx), ready, pool_seq++});
    }

    void seal(Block block) {
        prev_timestamp = block.timestamp;
        trace.last_block_timestamp = block.timestamp;
        trace.transactions += block.transactions.size();
        ++trace.blocks;
        ++next_number;
        if (options.retain_chain) chain.append(std::move(block));
    }

    void react(const Enablement& e, SimTime observed) {
        for (std::size_t p = 0; p < cfg.participants.size(); ++p) {
            const auto& pc = cfg.participants[p];
            RandomStream& rng = participant_rng[p];
            for (const auto& rule : pc.rules) {
                if (rule.trigger == TriggerKind::At) continue;
                const auto entry = std::find_if(e.elements.begin(), e.elements.end(),
                                                [&](const EnabledElement& x) { return x.element == rule.element; });
                if (entry == e.elements.end()) continue;
                if (rule.trigger == TriggerKind::Enabled && entry->implicit) continue;
                if (!rng.bernoulli(rule.probability)) continue;
                const Millis offset = rule.offset.sample(rng);
                SimTime at = observed + offset;
                if (rule.trigger == TriggerKind::Due && entry->truth_due) {
                    at = std::max(observed, *entry->truth_due + offset);
                }
                at = std::max(at, observed);
                if (at > horizon) continue;
                plan(at, Planned{p, rule.element, static_cast<std::int64_t>(e.activation), false});
            }
        }
    }

    void on_tx_created(std::uint64_t ref) {
        auto node = planned.extract(ref);
        const Planned& p = node.mapped();
        if (instance && instance->complete()) return;
        if (p.retry && instance && p.activation &&
            static_cast<std::uint64_t>(*p.activation) != instance->enabled().activation) {
            return;
        }
        const auto& pc = cfg.participants[p.participant];
        Payload payload{p.element, {}};
        if (p.activation) payload.args.emplace(std::string(kActivationArg), *p.activation);
        Millis lie = 0;
        if (auto it = cfg.faults.parameter_lie_ms.find(pc.id); it != cfg.faults.parameter_lie_ms.end()) lie = it->second;
        payload.args.emplace(std::string(kParamTimestamp), (now + lie).ms);
        admit(Transaction(next_id(pc.id), pc.id, now, std::move(payload), pc.priority));
    }

    void on_oracle_update(std::uint64_t k) {
        if (auto tx = storage[k].tick(now)) {
            if (options.retain_chain) {
                trace.oracle_events.push_back({storage[k].id(), OracleEvent::Kind::Update, now,
                                               *tx->payload().arg(kValueArg)});
            }
            admit(std::move(*tx));
        }
        if (storage[k].next_tick() <= horizon) queue.push(storage[k].next_tick(), EventKind::OracleUpdate, k);
    }

    void on_callback(std::uint64_t request) {
        Transaction tx = responders.front().make_callback(request, now);
        if (options.retain_chain) {
            trace.oracle_events.push_back({responders.front().id(), OracleEvent::Kind::Callback, now,
                                           *tx.payload().arg(kValueArg)});
        }
        admit(std::move(tx));
    }

    void order(std::vector<PoolEntry>& batch) {
        auto fifo = [](const PoolEntry& a, const PoolEntry& b) {
            return a.ready != b.ready ? a.ready < b.ready : a.seq < b.seq;
        };
        switch (cfg.network.ordering) {
            case MinerOrdering::FifoByArrival:
                std::sort(batch.begin(), batch.end(), fifo);
                break;
            case MinerOrdering::PriorityThenArrival:
                std::sort(batch.begin(), batch.end(), [&](const PoolEntry& a, const PoolEntry& b) {
                    if (a.tx.priority() != b.tx.priority()) return a.tx.priority() > b.tx.priority();
                    return fifo(a, b);
                });
                break;
            case MinerOrdering::AdversarialReorder:
                std::sort(batch.begin(), batch.end(), fifo);
                if (batch.size() > 1) order_rng.shuffle(batch.begin(), batch.end());
                break;
        }
    }

    void handle(const ApplyResult& res, std::uint64_t block, const Transaction& tx) {
        for (const auto& r : res.records) trace.records.push_back(r);
        if (res.enablement) notices[block].enablements.push_back(*res.enablement);
        if (res.verdict == Verdict::Rejected && res.reason == ErrorCode::GuardRejected) {
            if (auto it = participant_index.find(tx.sender()); it != participant_index.end()) {
                notices[block].rejections.push_back({it->second, tx.payload().op, tx.payload().arg(kActivationArg)});
            }
        }
    }

    void on_mining_start() {
        const std::uint64_t number = next_number;
        SimTime ts = now;
        if (cfg.faults.miner_drift) {
            ts = now + drift_rng.uniform_int(cfg.faults.miner_drift->min, cfg.faults.miner_drift->max);
        }
        ts = std::max(ts, prev_timestamp + 1);

        std::vector<PoolEntry> batch;
        auto keep = std::partition(pool.begin(), pool.end(), [&](const PoolEntry& e) { return !(e.ready <= now); });
        std::move(keep, pool.end(), std::back_inserter(batch));
        pool.erase(keep, pool.end());
        order(batch);

        Block block{number, ts, {}, cfg.network.mining_time.sample(mining_rng)};
        block.transactions.reserve(batch.size());
        for (auto& e : batch) block.transactions.push_back(std::move(e.tx));

        const OracleCell* cell = cells.empty() ? nullptr : &cells.front();
        for (std::size_t j = 0; j < block.transactions.size(); ++j) {
            const Transaction& tx = block.transactions[j];
            const std::string& op = tx.payload().op;
            if (op == kOracleUpdateOp) {
                for (auto& c : cells) {
                    if (c.provider() == tx.sender()) c.record({number, j}, SimTime{*tx.payload().arg(kValueArg)});
                }
                continue;
            }
            if (op == kOracleCallbackOp) {
                const auto req = static_cast<std::uint64_t>(*tx.payload().arg(kRequestArg));
                auto it = requests.find(req);
                if (it == requests.end() || !instance) continue;
                const Transaction origin = std::move(it->second.tx);
                requests.erase(it);
                if (!instance->has_pending(origin.id())) continue;
                // Observers learn the outcome from the block that executed the callback.
                handle(instance->finalize_pending(origin.id(), SimTime{*tx.payload().arg(kValueArg)}), number, origin);
                continue;
            }
            if (!instance) continue;
            const TxContext ctx(tx, number, ts, j, params, cell);
            const ApplyResult res = instance->apply_transaction(ctx);
            if (res.verdict == Verdict::Pending) {
                const std::uint64_t req = next_request++;
                requests.emplace(req, Request{tx});
                notices[number].requests.push_back(req);
            }
            handle(res, number, tx);
        }

        const Millis mining = block.mining_duration;
        seal(std::move(block));
        if (notices.count(number)) queue.push(now + mining, EventKind::BlockVisible, number);
        schedule_mining(now);
    }

    void on_visible(std::uint64_t number) {
        auto node = notices.extract(number);
        Notices& n = node.mapped();
        for (std::uint64_t req : n.requests) {
            RequestResponseProvider& provider = responders.front();
            if (options.retain_chain) {
                trace.oracle_events.push_back({provider.id(), OracleEvent::Kind::Request, now, static_cast<std::int64_t>(req)});
            }
            const auto at = provider.callback_time(now, oracle_rng.front());
            if (at && *at <= horizon) queue.push(*at, EventKind::OracleCallback, req);
        }
        for (const auto& r : n.rejections) {
            const SimTime at = now + cfg.participants[r.participant].retry_ms;
            if (at <= horizon) plan(at, Planned{r.participant, r.element, r.activation, true});
        }
        for (const auto& e : n.enablements) react(e, now);
    }
};

Simulator::Simulator(const ScenarioConfig& config, std::uint64_t seed, MeasureKind measure, RunOptions options)
    : impl_(std::make_unique<Impl>(config, seed, measure, options)) {}

Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

bool Simulator::step() {
    Impl& s = *impl_;
    if (s.finished || s.queue.empty()) return false;
    const Event e = s.queue.pop();
    s.now = e.at;
    switch (e.kind) {
        case EventKind::TxCreated: s.on_tx_created(e.ref); break;
        case EventKind::OracleUpdate: s.on_oracle_update(e.ref); break;
        case EventKind::BlockMiningStart: s.on_mining_start(); break;
        case EventKind::BlockVisible: s.on_visible(e.ref); break;
        case EventKind::OracleCallback: s.on_callback(e.ref); break;
    }
    return true;
}

bool Simulator::complete() const { return impl_->finished || impl_->queue.empty(); }
SimTime Simulator::now() const { return impl_->now; }
std::size_t Simulator::queued() const { return impl_->queue.size(); }
const Chain& Simulator::chain() const { return impl_->chain; }
const ProcessInstance* Simulator::instance() const { return impl_->instance.get(); }

RunTrace Simulator::finish() {
    Impl& s = *impl_;
    if (s.instance) {
        for (auto& r : s.instance->finish()) s.trace.records.push_back(std::move(r));
    }
    s.finished = true;
    s.trace.chain = std::move(s.chain);
    return std::move(s.trace);
}

RunTrace run(const ScenarioConfig& config, std::uint64_t seed, MeasureKind measure, RunOptions options) {
    Simulator sim(config, seed, measure, options);
    while (sim.step()) {
    }
    return sim.finish();
}

void write_trace(std::ostream& out, const RunTrace& trace) {
    write_trace(out, trace.chain);
    for (const auto& e : trace.oracle_events) {
        out << "oracle," << e.provider << ',' << to_string(e.kind) << ',' << e.time.ms << ',' << e.value << '\n';
    }
}

}  // namespace chaintime
