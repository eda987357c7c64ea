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

#include "chaintime/process.hpp"

#include <algorithm>
#include <set>

namespace chaintime {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void invalid(const std::string& model, const std::string& why) {
    throw Error(ErrorCode::InvalidModel, "model " + model + ": " + why);
}

bool is_timer(ElementKind k) { return k == ElementKind::StartTimer || k == ElementKind::TimerCatch; }

}  // namespace

std::string_view to_string(ElementKind kind) noexcept {
    switch (kind) {
        case ElementKind::StartTimer: return "start_timer";
        case ElementKind::Task: return "task";
        case ElementKind::TimerCatch: return "timer";
        case ElementKind::MessageCatch: return "message";
        case ElementKind::EventGateway: return "gateway";
        case ElementKind::LoopBack: return "loop";
    }
    return "unknown";
}

Element Element::start_timer(std::string id, TimerSpec spec, std::string next) {
    Element e;
    e.id = std::move(id);
    e.kind = ElementKind::StartTimer;
    e.timer = std::move(spec);
    e.next = std::move(next);
    return e;
}

Element Element::task(std::string id, std::string performer, std::optional<std::string> next) {
    Element e;
    e.id = std::move(id);
    e.kind = ElementKind::Task;
    e.performer = std::move(performer);
    e.next = std::move(next);
    return e;
}

Element Element::timer_catch(std::string id, TimerSpec spec, std::optional<std::string> next) {
    Element e;
    e.id = std::move(id);
    e.kind = ElementKind::TimerCatch;
    e.timer = std::move(spec);
    e.next = std::move(next);
    return e;
}

Element Element::message_catch(std::string id, std::optional<std::string> next) {
    Element e;
    e.id = std::move(id);
    e.kind = ElementKind::MessageCatch;
    e.next = std::move(next);
    return e;
}

Element Element::gateway(std::string id, std::vector<std::string> branches) {
    Element e;
    e.id = std::move(id);
    e.kind = ElementKind::EventGateway;
    e.branches = std::move(branches);
    return e;
}

Element Element::loop_back(std::string id, std::string target) {
    Element e;
    e.id = std::move(id);
    e.kind = ElementKind::LoopBack;
    e.target = std::move(target);
    return e;
}

ProcessModel::ProcessModel(std::string name, std::vector<Element> elements, std::string start)
    : name_(std::move(name)), elements_(std::move(elements)) {
    if (elements_.empty()) invalid(name_, "no elements");
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        const auto& id = elements_[i].id;
        if (id.empty()) invalid(name_, "element without id");
        if (!index_.emplace(id, i).second) invalid(name_, "duplicate element " + id);
    }
    const auto s = index_of(start);
    if (!s) invalid(name_, "start element " + start + " does not exist");
    start_ = *s;

    auto require = [&](const std::string& from, const std::string& ref) {
        if (!index_of(ref)) invalid(name_, from + " references unknown element " + ref);
        return *index_of(ref);
    };

    for (std::size_t i = 0; i < elements_.size(); ++i) {
        const Element& e = elements_[i];
        if (is_timer(e.kind)) {
            if (!e.timer) invalid(name_, e.id + " lacks a timer");
            try {
                validate(*e.timer);
            } catch (const Error& err) {
                invalid(name_, e.id + ": " + err.what());
            }
        }
        if (e.next) {
            if (e.kind == ElementKind::EventGateway || e.kind == ElementKind::LoopBack) {
                invalid(name_, e.id + " cannot have a direct successor");
            }
            require(e.id, *e.next);
        }
        switch (e.kind) {
            case ElementKind::StartTimer:
                if (i != start_) invalid(name_, "start timer " + e.id + " is not the start element");
                if (!e.next) invalid(name_, "start timer " + e.id + " has no successor");
                break;
            case ElementKind::TimerCatch:
                if (is_cycle(*e.timer) && !occurrences(*e.timer)) {
                    invalid(name_, "cycle timer " + e.id + " must be bounded");
                }
                break;
            case ElementKind::EventGateway: {
                if (e.branches.size() < 2) invalid(name_, "gateway " + e.id + " needs at least two branches");
                std::set<std::string> seen;
                for (const auto& b : e.branches) {
                    const Element& be = elements_[require(e.id, b)];
                    if (!seen.insert(b).second) invalid(name_, "gateway " + e.id + " repeats branch " + b);
                    if (be.kind == ElementKind::MessageCatch) continue;
                    if (be.kind != ElementKind::TimerCatch) {
                        invalid(name_, "gateway branch " + b + " must be a timer or message");
                    }
                    if (is_cycle(*be.timer)) invalid(name_, "gateway branch " + b + " cannot be a cycle");
                }
                break;
            }
            case ElementKind::LoopBack: {
                const Element& t = elements_[require(e.id, e.target)];
                if (t.kind == ElementKind::LoopBack) invalid(name_, "loop " + e.id + " targets another loop");
                if (t.kind == ElementKind::StartTimer) invalid(name_, "loop " + e.id + " targets the start timer");
                break;
            }
            default:
                break;
        }
    }

    // Every element must be reachable from the start.
    std::vector<bool> seen(elements_.size(), false);
    std::vector<std::size_t> stack{start_};
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        if (seen[i]) continue;
        seen[i] = true;
        const Element& e = elements_[i];
        if (e.next) stack.push_back(index_.at(*e.next));
        for (const auto& b : e.branches) stack.push_back(index_.at(b));
        if (e.kind == ElementKind::LoopBack) stack.push_back(index_.at(e.target));
    }
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (!seen[i]) invalid(name_, "element " + elements_[i].id + " is unreachable");
    }
}

const Element* ProcessModel::find(std::string_view id) const {
    auto i = index_of(id);
    return i ? &elements_[*i] : nullptr;
}

std::optional<std::size_t> ProcessModel::index_of(std::string_view id) const {
    if (auto it = index_.find(std::string(id)); it != index_.end()) return it->second;
    return std::nullopt;
}

const Element& ProcessModel::element(std::string_view id) const {
    if (const Element* e = find(id)) return *e;
    throw Error(ErrorCode::NotFound, "unknown element " + std::string(id));
}

const Element* ProcessModel::gateway_of(std::string_view branch) const {
    for (const auto& e : elements_) {
        if (e.kind != ElementKind::EventGateway) continue;
        if (std::find(e.branches.begin(), e.branches.end(), branch) != e.branches.end()) return &e;
    }
    return nullptr;
}

// ---------------------------------------------------------------------------

std::string_view to_string(ConstraintType c) noexcept {
    switch (c) {
        case ConstraintType::Absolute: return "absolute";
        case ConstraintType::Relative: return "relative";
        case ConstraintType::Cycle: return "cycle";
        case ConstraintType::DeferredChoice: return "deferred_choice";
    }
    return "unknown";
}

std::string_view to_string(Outcome o) noexcept {
    switch (o) {
        case Outcome::TP: return "TP";
        case Outcome::TN: return "TN";
        case Outcome::FP: return "FP";
        case Outcome::FN: return "FN";
        case Outcome::Match: return "Match";
        case Outcome::Mismatch: return "Mismatch";
        case Outcome::StuckPending: return "StuckPending";
    }
    return "unknown";
}

std::string_view to_string(Basis b) noexcept {
    switch (b) {
        case Basis::Deadline: return "deadline";
        case Basis::Delta: return "delta";
        case Basis::Choice: return "choice";
    }
    return "unknown";
}

std::optional<ConstraintType> parse_constraint_type(std::string_view s) {
    for (auto c : {ConstraintType::Absolute, ConstraintType::Relative, ConstraintType::Cycle,
                   ConstraintType::DeferredChoice}) {
        if (s == to_string(c)) return c;
    }
    return std::nullopt;
}

std::optional<Outcome> parse_outcome(std::string_view s) {
    for (auto o : {Outcome::TP, Outcome::TN, Outcome::FP, Outcome::FN, Outcome::Match, Outcome::Mismatch,
                   Outcome::StuckPending}) {
        if (s == to_string(o)) return o;
    }
    return std::nullopt;
}

std::optional<Basis> parse_basis(std::string_view s) {
    for (auto b : {Basis::Deadline, Basis::Delta, Basis::Choice}) {
        if (s == to_string(b)) return b;
    }
    return std::nullopt;
}

Outcome classify_absolute(SimTime s_tx, SimTime s_e, SimTime measured) {
    const bool truth_past = s_e <= s_tx;
    const bool measured_past = s_e <= measured;
    if (truth_past) return measured_past ? Outcome::TP : Outcome::FN;
    return measured_past ? Outcome::FP : Outcome::TN;
}

Outcome classify_delta(Millis true_delta, Millis measured_delta, Millis required) {
    const bool truth_sat = true_delta >= required;
    const bool measured_sat = measured_delta >= required;
    if (truth_sat) return measured_sat ? Outcome::TP : Outcome::FN;
    return measured_sat ? Outcome::FP : Outcome::TN;
}

RelativeCheck check_relative(SimTime m_first, SimTime m_second, Millis required_delta, SimTime truth_first,
                             SimTime truth_second) {
    RelativeCheck r{};
    r.true_delta = truth_second - truth_first;
    r.measured_delta = m_second - m_first;
    r.negative_delta = r.measured_delta < 0;
    r.outcome = classify_delta(r.true_delta, r.measured_delta, required_delta);
    return r;
}

Outcome reclassify(const GuardRecord& r) {
    if (!r.measured_ms) return Outcome::StuckPending;
    switch (r.basis) {
        case Basis::Deadline:
            return classify_absolute(SimTime{r.ground_truth_ms}, SimTime{r.threshold_ms}, SimTime{*r.measured_ms});
        case Basis::Delta:
            return classify_delta(r.ground_truth_ms, *r.measured_ms, r.threshold_ms);
        case Basis::Choice:
            return r.expected_branch == r.actual_branch ? Outcome::Match : Outcome::Mismatch;
    }
    return Outcome::StuckPending;
}

// ---------------------------------------------------------------------------

CycleState::CycleState(TimerSpec spec, SimTime enablement) : spec_(std::move(spec)), enablement_(enablement) {
    if (!is_cycle(spec_)) throw Error(ErrorCode::InvalidModel, "not a cycle: " + describe(spec_));
}

bool CycleState::exhausted() const {
    const auto n = occurrences(spec_);
    return n && k_ >= static_cast<std::uint64_t>(*n);
}

bool CycleState::last_iteration() const {
    const auto n = occurrences(spec_);
    return n && k_ + 1 == static_cast<std::uint64_t>(*n);
}

SimTime CycleState::due(std::uint64_t j) const { return due_at(spec_, enablement_, j); }

CycleAdvance CycleState::advance(SimTime measured_now) {
    if (exhausted()) {
        throw Error(ErrorCode::CycleExhausted, "cycle exhausted after " + std::to_string(k_) + " iterations");
    }
    CycleAdvance out;
    out.iteration = k_;
    if (measured_now < due(k_)) return out;
    out.accepted = true;
    ++k_;
    const auto n = occurrences(spec_);
    constexpr std::uint64_t kMissedCap = 1u << 16;
    for (std::uint64_t j = k_; (!n || j < static_cast<std::uint64_t>(*n)) && j < k_ + kMissedCap; ++j) {
        if (!(due(j) < measured_now)) break;
        out.missed.push_back(j);
    }
    return out;
}

void CycleState::reset(SimTime enablement) {
    enablement_ = enablement;
    k_ = 0;
}

CycleAdvance cycle_advance(CycleState& state, SimTime measured_now) { return state.advance(measured_now); }

// ---------------------------------------------------------------------------

ChoiceResolution resolve_deferred_choice(const std::vector<std::string>& branches,
                                         const std::vector<AppliedClaim>& applied_order,
                                         const std::vector<BranchTrigger>& ground_truth) {
    ChoiceResolution r;
    auto winner = std::find_if(applied_order.begin(), applied_order.end(),
                               [](const AppliedClaim& c) { return c.eligible; });
    if (winner == applied_order.end()) throw Error(ErrorCode::NoEligibleBranch, "no eligible branch claimed");
    r.actual = winner->branch;

    auto rank = [&](const std::string& b) {
        return static_cast<std::size_t>(std::find(branches.begin(), branches.end(), b) - branches.begin());
    };
    const BranchTrigger* best = nullptr;
    for (const auto& t : ground_truth) {
        if (!best || t.at < best->at || (t.at == best->at && rank(t.branch) < rank(best->branch))) best = &t;
    }
    if (best) r.expected = best->branch;
    r.outcome = r.expected == r.actual ? Outcome::Match : Outcome::Mismatch;
    return r;
}

// ---------------------------------------------------------------------------

struct ProcessInstance::Target {
    std::size_t element;                // the element the transaction names
    std::optional<std::size_t> timer;   // timer claimed explicitly or through its successor task
    std::optional<std::size_t> branch;  // set when the token sits at a gateway
};

struct ProcessInstance::TimerEval {
    bool pass = false;
    GuardRecord record;
    SimTime cycle_now;  // measured value in the cycle state's frame
};

ProcessInstance::ProcessInstance(std::shared_ptr<const ProcessModel> model, MeasureKind measure,
                                 ChainParams params)
    : model_(std::move(model)), measure_(measure), params_(params) {
    genesis_ = Anchor{params_.genesis, params_.genesis, 0};
    const Element& s = model_->start();
    if (s.kind == ElementKind::StartTimer && is_cycle(*s.timer)) start_cycle_.emplace(*s.timer, params_.genesis);
    arrive(model_->start_index(), genesis_);
}

std::optional<ProcessInstance::Target> ProcessInstance::resolve_target(std::string_view name) const {
    const auto idx = model_->index_of(name);
    if (!idx || complete_) return std::nullopt;
    const Element& tok = model_->at(token_);
    const Element& e = model_->at(*idx);

    if (*idx == token_) {
        if (tok.kind == ElementKind::EventGateway) return std::nullopt;
        Target t{*idx, std::nullopt, std::nullopt};
        if (is_timer(tok.kind)) t.timer = token_;
        return t;
    }
    if (is_timer(tok.kind) && tok.next == e.id && e.kind == ElementKind::Task) {
        if (catch_cycle_ && !catch_cycle_->last_iteration()) return std::nullopt;
        return Target{*idx, token_, std::nullopt};
    }
    if (tok.kind == ElementKind::EventGateway) {
        for (const auto& b : tok.branches) {
            const auto bi = *model_->index_of(b);
            const Element& be = model_->at(bi);
            const bool timer_branch = be.kind == ElementKind::TimerCatch;
            if (b == e.id) return Target{*idx, timer_branch ? std::optional(bi) : std::nullopt, bi};
            if (timer_branch && be.next == e.id && e.kind == ElementKind::Task) return Target{*idx, bi, bi};
        }
    }
    return std::nullopt;
}

SimTime ProcessInstance::measure_of(const TxContext& ctx) const {
    switch (measure_) {
        case MeasureKind::BlockTimestamp: return measure_bt(ctx);
        case MeasureKind::BlockNumber: return measure_bn(ctx);
        case MeasureKind::Parameter: return measure_pa(ctx);
        case MeasureKind::StorageOracle: return measure_so(ctx);
        case MeasureKind::RequestResponseOracle: break;
    }
    throw Error(ErrorCode::InvalidContext, "request/response measure is not synchronous");
}

SimTime ProcessInstance::truth_due(std::size_t timer) const {
    const Element& t = model_->at(timer);
    const bool start = t.kind == ElementKind::StartTimer;
    const Anchor& a = start ? genesis_ : arrival_;
    const CycleState* cycle = start ? (start_cycle_ ? &*start_cycle_ : nullptr)
                                    : (timer == token_ && catch_cycle_ ? &*catch_cycle_ : nullptr);
    return due_at(*t.timer, a.truth, cycle ? cycle->k() : 0);
}

ProcessInstance::TimerEval ProcessInstance::evaluate_timer(std::size_t timer, const CycleState* cycle,
                                                           const Transaction& tx, SimTime measured,
                                                           std::uint64_t block) const {
    const Element& t = model_->at(timer);
    const Anchor& a = t.kind == ElementKind::StartTimer ? genesis_ : arrival_;

    TimerEval ev;
    GuardRecord& r = ev.record;
    r.element = t.id;
    r.measure = measure_;
    r.tx_id = tx.id();
    r.tx_created = tx.created_at();
    r.tx_measured = measured;
    r.block = block;
    r.activation = enabled_.activation;
    ev.cycle_now = measured;

    const Millis true_delta = tx.created_at() - a.truth;
    Millis measured_delta = measured - a.measured;
    if (measure_ == MeasureKind::BlockNumber) {
        measured_delta = bn_delta(block, a.block, params_.mean_block_time_ms);
        if (block < a.block) measured_delta = -measured_delta;
    }

    auto deadline = [&](ConstraintType c, SimTime s_e) {
        r.constraint = c;
        r.basis = Basis::Deadline;
        r.threshold_ms = s_e.ms;
        r.ground_truth_ms = tx.created_at().ms;
        r.measured_ms = measured.ms;
        r.outcome = classify_absolute(tx.created_at(), s_e, measured);
        ev.pass = s_e <= measured;
    };
    auto delta = [&](ConstraintType c, Millis required) {
        r.constraint = c;
        r.basis = Basis::Delta;
        r.threshold_ms = required;
        r.ground_truth_ms = true_delta;
        r.measured_ms = measured_delta;
        r.negative_delta = measured_delta < 0;
        r.outcome = classify_delta(true_delta, measured_delta, required);
        ev.pass = measured_delta >= required;
        ev.cycle_now = a.measured + measured_delta;
    };

    std::visit(overloaded{
                   [&](const DateTimer& d) { deadline(ConstraintType::Absolute, d.instant); },
                   [&](const DurationTimer& d) { delta(ConstraintType::Relative, d.length); },
                   [&](const CycleAbsTimer&) {
                       r.iteration = cycle->k();
                       deadline(ConstraintType::Cycle, cycle->due(cycle->k()));
                   },
                   [&](const CycleRelTimer& c) {
                       r.iteration = cycle->k();
                       delta(ConstraintType::Cycle, static_cast<Millis>(cycle->k() + 1) * c.period);
                   },
               },
               *t.timer);
    return ev;
}

void ProcessInstance::note_attempt(const Transaction& tx) {
    const Element& e = model_->element(tx.payload().op);
    if (e.kind != ElementKind::MessageCatch || !model_->gateway_of(e.id)) return;
    attempts_.push_back({e.id, tx.created_at(), tx.payload().arg(kActivationArg), enabled_.activation});
}

std::vector<GuardRecord> ProcessInstance::snapshot(const Target& target, const Transaction& tx,
                                                   std::uint64_t block) const {
    std::vector<std::size_t> timers;
    if (target.branch) {
        for (const auto& b : model_->at(token_).branches) {
            const auto bi = *model_->index_of(b);
            if (model_->at(bi).kind == ElementKind::TimerCatch) timers.push_back(bi);
        }
    } else if (target.timer) {
        timers.push_back(*target.timer);
    }
    std::vector<GuardRecord> out;
    for (auto ti : timers) {
        const bool start = model_->at(ti).kind == ElementKind::StartTimer;
        const CycleState* cycle = start ? (start_cycle_ ? &*start_cycle_ : nullptr) : (catch_cycle_ ? &*catch_cycle_ : nullptr);
        GuardRecord r = evaluate_timer(ti, cycle, tx, tx.created_at(), block).record;
        r.measured_ms.reset();
        r.tx_measured.reset();
        r.negative_delta = false;
        r.outcome = Outcome::StuckPending;
        r.via_callback = true;
        out.push_back(std::move(r));
    }
    return out;
}

ApplyResult ProcessInstance::apply_transaction(const TxContext& ctx) {
    const Transaction& tx = ctx.tx();
    ApplyResult res;
    const auto target = resolve_target(tx.payload().op);
    if (model_->find(tx.payload().op)) note_attempt(tx);
    if (!target) {
        res.reason = ErrorCode::ElementNotEnabled;
        res.detail = tx.payload().op + " is not enabled";
        return res;
    }
    if (measure_ == MeasureKind::RequestResponseOracle) {
        pending_.push_back({tx, ctx.block_number(), snapshot(*target, tx, ctx.block_number())});
        res.verdict = Verdict::Pending;
        return res;
    }
    SimTime measured;
    try {
        measured = measure_of(ctx);
    } catch (const Error& e) {
        res.reason = e.code();
        res.detail = e.what();
        return res;
    }
    return execute(*target, tx, measured, ctx.block_number(), false);
}

bool ProcessInstance::has_pending(std::string_view tx_id) const {
    return std::any_of(pending_.begin(), pending_.end(), [&](const Pending& p) { return p.tx.id() == tx_id; });
}

ApplyResult ProcessInstance::finalize_pending(std::string_view tx_id, SimTime measured) {
    auto it = std::find_if(pending_.begin(), pending_.end(), [&](const Pending& p) { return p.tx.id() == tx_id; });
    if (it == pending_.end()) throw Error(ErrorCode::NotFound, "no pending request for " + std::string(tx_id));
    Pending p = std::move(*it);
    pending_.erase(it);
    ApplyResult res;
    const auto target = resolve_target(p.tx.payload().op);
    if (!target) {
        res.reason = ErrorCode::ElementNotEnabled;
        res.detail = p.tx.payload().op + " is no longer enabled";
        return res;
    }
    return execute(*target, p.tx, measured, p.block, true);
}

ApplyResult ProcessInstance::execute(const Target& target, const Transaction& tx, SimTime measured,
                                     std::uint64_t block, bool via_callback) {
    ApplyResult res;
    const Anchor self{tx.created_at(), measured, block};
    const Element& named = model_->at(target.element);

    auto reject = [&](std::string why) {
        res.verdict = Verdict::Rejected;
        res.reason = ErrorCode::GuardRejected;
        res.detail = std::move(why);
        for (auto& r : res.records) r.via_callback = via_callback;
        return res;
    };
    auto accept = [&](std::optional<std::size_t> next) {
        res.verdict = Verdict::Accepted;
        for (auto& r : res.records) r.via_callback = via_callback;
        if (next) {
            arrive(*next, self);
        } else {
            arrive(std::nullopt, self);
        }
        res.enablement = enabled_;
        return res;
    };
    auto next_of = [&](const Element& e) -> std::optional<std::size_t> {
        if (!e.next) return std::nullopt;
        return model_->index_of(*e.next);
    };

    if (target.branch) {
        // A timer branch fires only on an explicit claim whose guard passes.
        // A message is accepted only while no timer branch has elapsed, as
        // judged by the same measure on the message itself.
        const Element& gw = model_->at(token_);
        const Element& claimed = model_->at(*target.branch);
        if (claimed.kind == ElementKind::TimerCatch) {
            TimerEval ev = evaluate_timer(*target.branch, nullptr, tx, measured, block);
            res.records.push_back(ev.record);
            if (!ev.pass) return reject(claimed.id + " has not elapsed");
        } else {
            std::string elapsed;
            for (const auto& b : gw.branches) {
                const auto bi = *model_->index_of(b);
                if (model_->at(bi).kind != ElementKind::TimerCatch) continue;
                TimerEval ev = evaluate_timer(bi, nullptr, tx, measured, block);
                if (ev.pass && elapsed.empty()) elapsed = b;
                res.records.push_back(std::move(ev.record));
            }
            if (!elapsed.empty()) return reject(elapsed + " elapsed before " + claimed.id);
        }
        choices_.push_back({enabled_.activation, token_, arrival_, claimed.id, tx.id(), tx.created_at(), measured, block});
        return accept(target.element != *target.branch ? next_of(named) : next_of(claimed));
    }

    if (!target.timer) return accept(next_of(named));

    const Element& timer = model_->at(*target.timer);
    CycleState* cycle = nullptr;
    if (timer.kind == ElementKind::StartTimer && start_cycle_) cycle = &*start_cycle_;
    if (timer.kind == ElementKind::TimerCatch && catch_cycle_) cycle = &*catch_cycle_;

    TimerEval ev = evaluate_timer(*target.timer, cycle, tx, measured, block);
    res.records.push_back(ev.record);
    if (!ev.pass) return reject(timer.id + " has not elapsed");
    if (cycle) {
        const CycleAdvance adv = cycle->advance(ev.cycle_now);
        res.records.back().missed = adv.missed;
    }
    const bool implicit = target.element != *target.timer;
    if (timer.kind == ElementKind::TimerCatch && cycle && !cycle->exhausted()) {
        res.verdict = Verdict::Accepted;
        for (auto& r : res.records) r.via_callback = via_callback;
        reactivate(tx.created_at());
        res.enablement = enabled_;
        return res;
    }
    return accept(implicit ? next_of(named) : next_of(timer));
}

void ProcessInstance::arrive(std::optional<std::size_t> element, const Anchor& anchor) {
    if (!element) {
        // The case ends. A recurring start timer hands the token back to the start.
        if (start_cycle_ && !start_cycle_->exhausted()) {
            token_ = model_->start_index();
            arrival_ = genesis_;
            catch_cycle_.reset();
            reactivate(anchor.truth);
            return;
        }
        complete_ = true;
        enabled_ = Enablement{next_activation_++, anchor.truth, {}};
        return;
    }
    std::size_t i = *element;
    while (model_->at(i).kind == ElementKind::LoopBack) i = *model_->index_of(model_->at(i).target);
    token_ = i;
    arrival_ = model_->at(i).kind == ElementKind::StartTimer ? genesis_ : anchor;
    const Element& e = model_->at(i);
    if (e.kind == ElementKind::TimerCatch && is_cycle(*e.timer)) {
        catch_cycle_.emplace(*e.timer, anchor.measured);
    } else {
        catch_cycle_.reset();
    }
    reactivate(anchor.truth);
}

void ProcessInstance::reactivate(SimTime since) {
    enabled_ = Enablement{next_activation_++, since, {}};
    auto& out = enabled_.elements;
    const Element& tok = model_->at(token_);
    switch (tok.kind) {
        case ElementKind::Task:
        case ElementKind::MessageCatch:
            out.push_back({tok.id, std::nullopt});
            break;
        case ElementKind::StartTimer:
        case ElementKind::TimerCatch: {
            const SimTime due = truth_due(token_);
            out.push_back({tok.id, due});
            if (tok.next && model_->element(*tok.next).kind == ElementKind::Task &&
                (!catch_cycle_ || catch_cycle_->last_iteration())) {
                out.push_back({*tok.next, due, true});
            }
            break;
        }
        case ElementKind::EventGateway:
            for (const auto& b : tok.branches) {
                const auto bi = *model_->index_of(b);
                const Element& be = model_->at(bi);
                if (be.kind != ElementKind::TimerCatch) {
                    out.push_back({b, std::nullopt});
                    continue;
                }
                const SimTime due = truth_due(bi);
                out.push_back({b, due});
                if (be.next && model_->element(*be.next).kind == ElementKind::Task) out.push_back({*be.next, due, true});
            }
            break;
        case ElementKind::LoopBack:
            break;
    }
}

std::vector<GuardRecord> ProcessInstance::finish() {
    std::vector<GuardRecord> out;
    for (auto& p : pending_) {
        for (auto& r : p.snapshot) out.push_back(std::move(r));
    }
    pending_.clear();

    for (const Choice& c : choices_) {
        const Element& gw = model_->at(c.gateway);
        std::vector<BranchTrigger> triggers;
        for (const auto& b : gw.branches) {
            const Element& be = model_->element(b);
            if (be.kind == ElementKind::TimerCatch) {
                triggers.push_back({b, due_at(*be.timer, c.anchor.truth, 0)});
                continue;
            }
            std::optional<SimTime> first;
            for (const Attempt& a : attempts_) {
                if (a.branch != b) continue;
                const bool named = a.activation_arg && *a.activation_arg == static_cast<std::int64_t>(c.activation);
                if (!named && a.current_activation != c.activation) continue;
                const SimTime at = std::max(a.created, c.anchor.truth);
                if (!first || at < *first) first = at;
            }
            if (first) triggers.push_back({b, *first});
        }
        const ChoiceResolution res = resolve_deferred_choice(gw.branches, {{c.actual, true}}, triggers);

        GuardRecord r;
        r.element = gw.id;
        r.constraint = ConstraintType::DeferredChoice;
        r.measure = measure_;
        r.basis = Basis::Choice;
        r.threshold_ms = c.anchor.truth.ms;
        const auto exp = std::find_if(triggers.begin(), triggers.end(),
                                      [&](const BranchTrigger& t) { return t.branch == res.expected; });
        r.ground_truth_ms = exp != triggers.end() ? exp->at.ms : c.tx_created.ms;
        r.measured_ms = c.tx_measured.ms;
        r.outcome = res.outcome;
        r.tx_id = c.tx_id;
        r.tx_created = c.tx_created;
        r.tx_measured = c.tx_measured;
        r.block = c.block;
        r.via_callback = measure_ == MeasureKind::RequestResponseOracle;
        r.expected_branch = res.expected;
        r.actual_branch = res.actual;
        r.activation = c.activation;
        out.push_back(std::move(r));
    }
    choices_.clear();
    return out;
}

}  // namespace chaintime
