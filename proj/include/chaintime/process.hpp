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
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "chaintime/error.hpp"
#include "chaintime/measures.hpp"
#include "chaintime/timer.hpp"

namespace chaintime {

// ---------------------------------------------------------------------------
// Model

enum class ElementKind { StartTimer, Task, TimerCatch, MessageCatch, EventGateway, LoopBack };

std::string_view to_string(ElementKind kind) noexcept;

struct Element {
    std::string id;
    ElementKind kind = ElementKind::Task;
    std::optional<TimerSpec> timer;     // StartTimer, TimerCatch
    std::string performer;              // Task
    std::vector<std::string> branches;  // EventGateway
    std::string target;                 // LoopBack
    std::optional<std::string> next;    // empty: the case ends here

    static Element start_timer(std::string id, TimerSpec spec, std::string next);
    static Element task(std::string id, std::string performer, std::optional<std::string> next = {});
    static Element timer_catch(std::string id, TimerSpec spec, std::optional<std::string> next = {});
    static Element message_catch(std::string id, std::optional<std::string> next = {});
    static Element gateway(std::string id, std::vector<std::string> branches);
    static Element loop_back(std::string id, std::string target);
};

/// Sequential process model with event-based gateways. Every element has at
/// most one successor; a gateway's successors are its branches.
class ProcessModel {
public:
    /// Throws Error(InvalidModel) unless: ids are unique, the start element
    /// exists, every reference resolves, every element is reachable from the
    /// start, gateways have >= 2 timer or message branches, a start timer
    /// appears only as the start element, and cycle catch events are bounded.
    ProcessModel(std::string name, std::vector<Element> elements, std::string start);

    const std::string& name() const noexcept { return name_; }
    const std::vector<Element>& elements() const noexcept { return elements_; }
    const Element& start() const { return elements_[start_]; }
    std::size_t start_index() const noexcept { return start_; }

    const Element* find(std::string_view id) const;
    std::optional<std::size_t> index_of(std::string_view id) const;

    /// Throws Error(NotFound).
    const Element& element(std::string_view id) const;
    const Element& at(std::size_t index) const { return elements_[index]; }

    /// Gateway owning `branch`, if any.
    const Element* gateway_of(std::string_view branch) const;

private:
    std::string name_;
    std::vector<Element> elements_;
    std::size_t start_ = 0;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Bundled models; currently `invoice-demo`.
std::optional<ProcessModel> find_preset_model(std::string_view name);
std::vector<std::string> preset_names();

// ---------------------------------------------------------------------------
// Classification

enum class ConstraintType { Absolute, Relative, Cycle, DeferredChoice };
enum class Outcome { TP, TN, FP, FN, Match, Mismatch, StuckPending };

/// What threshold_ms / ground_truth_ms / measured_ms hold in a record:
/// Deadline: instants; Delta: spans since the anchor; Choice: trigger instants.
enum class Basis { Deadline, Delta, Choice };

std::string_view to_string(ConstraintType c) noexcept;
std::string_view to_string(Outcome o) noexcept;
std::string_view to_string(Basis b) noexcept;
std::optional<ConstraintType> parse_constraint_type(std::string_view s);
std::optional<Outcome> parse_outcome(std::string_view s);
std::optional<Basis> parse_basis(std::string_view s);

/// Truth says the deadline has passed iff s_e <= s_tx; the measure says so
/// iff s_e <= measured.
Outcome classify_absolute(SimTime s_tx, SimTime s_e, SimTime measured);

/// 2x2 of (true delta >= required, measured delta >= required).
Outcome classify_delta(Millis true_delta, Millis measured_delta, Millis required);

struct RelativeCheck {
    Outcome outcome;
    Millis true_delta;
    Millis measured_delta;
    bool negative_delta;  // measured_delta < 0; classified normally
};

RelativeCheck check_relative(SimTime m_first, SimTime m_second, Millis required_delta,
                             SimTime truth_first, SimTime truth_second);

/// One enforcement decision.
struct GuardRecord {
    std::string element;
    ConstraintType constraint = ConstraintType::Absolute;
    MeasureKind measure = MeasureKind::BlockTimestamp;
    Basis basis = Basis::Deadline;
    Millis threshold_ms = 0;
    Millis ground_truth_ms = 0;
    std::optional<Millis> measured_ms;  // empty while pending
    Outcome outcome = Outcome::TN;
    bool negative_delta = false;

    std::string tx_id;
    SimTime tx_created;
    std::optional<SimTime> tx_measured;  // M(tx) itself, for range checks
    std::uint64_t block = 0;             // requesting block for callback-resolved measures
    bool via_callback = false;           // decided when an oracle callback executed
    std::optional<std::uint64_t> iteration;
    std::vector<std::uint64_t> missed;
    std::string expected_branch;
    std::string actual_branch;
    std::uint64_t activation = 0;
};

/// Re-derives the outcome from the other fields.
Outcome reclassify(const GuardRecord& r);

// ---------------------------------------------------------------------------
// Cycles

struct CycleAdvance {
    bool accepted = false;
    std::uint64_t iteration = 0;
    std::vector<std::uint64_t> missed;
};

/// Counter over a cycle's due schedule. Due instants are expressed in the
/// frame of the measured value passed to advance().
class CycleState {
public:
    /// Throws Error(InvalidModel) if `spec` is not a cycle.
    CycleState(TimerSpec spec, SimTime enablement);

    std::uint64_t k() const noexcept { return k_; }
    const TimerSpec& spec() const noexcept { return spec_; }
    SimTime enablement() const noexcept { return enablement_; }
    bool exhausted() const;
    bool last_iteration() const;
    SimTime due(std::uint64_t j) const;

    /// Accepts iff measured_now >= due(k); then k advances by one and every
    /// later iteration already overdue is reported as missed.
    /// Throws Error(CycleExhausted) once all repetitions are used.
    CycleAdvance advance(SimTime measured_now);

    void reset(SimTime enablement);

private:
    TimerSpec spec_;
    SimTime enablement_;
    std::uint64_t k_ = 0;
};

CycleAdvance cycle_advance(CycleState& state, SimTime measured_now);

// ---------------------------------------------------------------------------
// Deferred choice

struct BranchTrigger {
    std::string branch;
    SimTime at;
};

struct AppliedClaim {
    std::string branch;
    bool eligible = false;
};

struct ChoiceResolution {
    std::string expected;
    std::string actual;
    Outcome outcome = Outcome::Match;
};

/// Winner is the first eligible claim in applied order; the expected branch
/// is the one with the earliest trigger, ties going to branch order.
/// Throws Error(NoEligibleBranch) when no claim is eligible.
ChoiceResolution resolve_deferred_choice(const std::vector<std::string>& branches,
                                         const std::vector<AppliedClaim>& applied_order,
                                         const std::vector<BranchTrigger>& ground_truth);

// ---------------------------------------------------------------------------
// Instance

/// Payload argument naming the activation a participant reacted to.
inline constexpr std::string_view kActivationArg = "activation";

/// The enabling transaction of the current activation.
struct Anchor {
    SimTime truth;
    SimTime measured;
    std::uint64_t block = 0;
};

struct EnabledElement {
    std::string element;
    std::optional<SimTime> truth_due;  // due instant of the guarding timer
    bool implicit = false;             // task that also claims the timer before it
};

struct Enablement {
    std::uint64_t activation = 0;
    SimTime since;  // truth instant the token arrived
    std::vector<EnabledElement> elements;
};

enum class Verdict { Accepted, Rejected, Pending };

struct ApplyResult {
    Verdict verdict = Verdict::Rejected;
    std::optional<ErrorCode> reason;
    std::string detail;
    std::vector<GuardRecord> records;
    std::optional<Enablement> enablement;  // set when the enabled set changed
};

/// Smart-contract-style state machine over one process model, evaluating
/// every timer guard with a single measure. Rejected transactions leave the
/// state untouched.
class ProcessInstance {
public:
    ProcessInstance(std::shared_ptr<const ProcessModel> model, MeasureKind measure, ChainParams params);

    const ProcessModel& model() const noexcept { return *model_; }
    MeasureKind measure() const noexcept { return measure_; }
    const Enablement& enabled() const noexcept { return enabled_; }
    const std::string& token() const { return model_->at(token_).id; }
    bool complete() const noexcept { return complete_; }

    /// Executes a process transaction. Under the request/response measure the
    /// decision is parked (Verdict::Pending) until finalize_pending().
    ApplyResult apply_transaction(const TxContext& ctx);

    /// Completes a parked decision with the value carried by the callback.
    ApplyResult finalize_pending(std::string_view tx_id, SimTime measured);

    bool has_pending(std::string_view tx_id) const;
    std::size_t pending_count() const noexcept { return pending_.size(); }

    /// End of run: StuckPending records for unresolved requests followed by
    /// one deferred_choice record per resolved gateway activation.
    std::vector<GuardRecord> finish();

private:
    struct Target;
    struct TimerEval;
    struct Pending {
        Transaction tx;
        std::uint64_t block;
        std::vector<GuardRecord> snapshot;
    };
    struct Attempt {
        std::string branch;
        SimTime created;
        std::optional<std::int64_t> activation_arg;
        std::uint64_t current_activation;
    };
    struct Choice {
        std::uint64_t activation;
        std::size_t gateway;
        Anchor anchor;
        std::string actual;
        std::string tx_id;
        SimTime tx_created;
        SimTime tx_measured;
        std::uint64_t block;
    };

    std::optional<Target> resolve_target(std::string_view element) const;
    SimTime measure_of(const TxContext& ctx) const;
    TimerEval evaluate_timer(std::size_t timer, const CycleState* cycle, const Transaction& tx,
                             SimTime measured, std::uint64_t block) const;
    SimTime truth_due(std::size_t timer) const;
    ApplyResult execute(const Target& target, const Transaction& tx, SimTime measured,
                        std::uint64_t block, bool via_callback);
    void note_attempt(const Transaction& tx);
    void arrive(std::optional<std::size_t> element, const Anchor& anchor);
    void reactivate(SimTime since);
    std::vector<GuardRecord> snapshot(const Target& target, const Transaction& tx, std::uint64_t block) const;

    std::shared_ptr<const ProcessModel> model_;
    MeasureKind measure_;
    ChainParams params_;
    Anchor genesis_;

    std::size_t token_ = 0;
    Anchor arrival_;
    Enablement enabled_;
    std::uint64_t next_activation_ = 1;
    bool complete_ = false;
    std::optional<CycleState> start_cycle_;
    std::optional<CycleState> catch_cycle_;

    std::vector<Pending> pending_;  // request order
    std::vector<Attempt> attempts_;
    std::vector<Choice> choices_;
};

}  // namespace chaintime
