#pragma once

#include <algorithm>
#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "oes/latency.hpp"
#include "oes/problem.hpp"
#include "oes/rng.hpp"
#include "oes/scenario.hpp"
#include "oes/solve.hpp"

namespace oes {

// ============================================================================
// COMPONENTS AND MESSAGES
// ============================================================================

enum class Component {
    RfEnvManager,
    E2Node,
    XAppMonitoring,
    MonitoringStore,
    VespaAgent,
    VesCollector,
    DataRiver,
    RAppEnergySavings,
    A1Mediator,
    XAppHandover,
};

inline const char* to_string(Component c) {
    switch (c) {
        case Component::RfEnvManager: return "rf_env_manager";
        case Component::E2Node: return "e2_node";
        case Component::XAppMonitoring: return "xapp_monitoring";
        case Component::MonitoringStore: return "monitoring_store";
        case Component::VespaAgent: return "vespa_agent";
        case Component::VesCollector: return "ves_collector";
        case Component::DataRiver: return "data_river";
        case Component::RAppEnergySavings: return "rapp_energy_savings";
        case Component::A1Mediator: return "a1_mediator";
        case Component::XAppHandover: return "xapp_handover";
    }
    return "?";
}

inline Component stage_component(StageId stage) {
    switch (stage) {
        case StageId::RfEnvConnect:
        case StageId::RfEnvHandover: return Component::RfEnvManager;
        case StageId::E2nConnect:
        case StageId::E2nReconfig: return Component::E2Node;
        case StageId::XAppMonitorCollect: return Component::XAppMonitoring;
        case StageId::MonitoringStoreScrape: return Component::MonitoringStore;
        case StageId::VespaExport: return Component::VespaAgent;
        case StageId::VesCollect: return Component::VesCollector;
        case StageId::DataRiverDispatch: return Component::DataRiver;
        case StageId::RAppSolve: return Component::RAppEnergySavings;
        case StageId::A1PolicyDelivery: return Component::A1Mediator;
        case StageId::XAppHandoverExec: return Component::XAppHandover;
    }
    return Component::RfEnvManager;
}

enum class NodeState { Active, Standby };

// rApp -> Near-RT RIC directive carried over A1.
struct A1Policy {
    long long policy_id = 0;
    std::string policy_type = "energy_saving";
    std::map<int, NodeState> target_states;  // E2 node id -> desired state
    std::map<int, double> power_levels_w;    // E2 node id -> transmit power
    std::map<int, int> target_assoc;         // UE id -> E2 node id
    double validity_s = 60.0;
};

// Throws on a malformed policy; called before any E2 traffic is emitted.
inline void validate_policy(const A1Policy& policy, double epsilon_w) {
    for (const auto& [node, state] : policy.target_states) {
        double w = 0.0;
        auto it = policy.power_levels_w.find(node);
        if (it != policy.power_levels_w.end()) w = it->second;
        if (state == NodeState::Active && w < epsilon_w) {
            fail(Error::Kind::Structural,
                 "A1 policy: active node " + fmt_i64(node) + " below the power floor");
        }
    }
    for (const auto& [ue, node] : policy.target_assoc) {
        auto it = policy.target_states.find(node);
        if (it == policy.target_states.end() || it->second != NodeState::Active) {
            fail(Error::Kind::Structural,
                 "A1 policy: UE " + fmt_i64(ue) + " targeted at a non-active node");
        }
    }
    if (policy.validity_s <= 0) {
        fail(Error::Kind::Structural, "A1 policy: non-positive validity");
    }
}

// Simulated E2/O1 traffic, recorded in the trace for ordering checks.
struct LoopEvent {
    enum class Kind {
        UeConnect,        // connection request (steps 01-03), no node yet
        PolicyIssued,     // A1 policy delivered (step 09)
        NodeActivated,    // RC state change Standby -> Active (step 08)
        HandoverComplete, // atomic re-association (steps 10-13)
        UeAttach,         // fresh UE bound to its first node
        UeDisconnect,     // UE left the population
        NodeDeactivated,  // RC state change Active -> Standby (step 14)
        PowerReconfigured // transmit power adjusted on a continuing node
    };
    Kind kind;
    double time_s = 0.0;
    int ue_id = -1;
    int source_node = -1;
    int target_node = -1;
};

inline const char* to_string(LoopEvent::Kind k) {
    switch (k) {
        case LoopEvent::Kind::UeConnect: return "ue_connect";
        case LoopEvent::Kind::PolicyIssued: return "policy_issued";
        case LoopEvent::Kind::NodeActivated: return "node_activated";
        case LoopEvent::Kind::HandoverComplete: return "handover_complete";
        case LoopEvent::Kind::UeAttach: return "ue_attach";
        case LoopEvent::Kind::UeDisconnect: return "ue_disconnect";
        case LoopEvent::Kind::NodeDeactivated: return "node_deactivated";
        case LoopEvent::Kind::PowerReconfigured: return "power_reconfigured";
    }
    return "?";
}

// ============================================================================
// HANDOVER PLANNING
// ============================================================================

struct HandoverPlan {
    struct Move {
        int ue_id;
        int source_node;
        int target_node;
    };
    std::vector<Move> moves;          // ordered; all moves precede deactivation
    std::vector<int> deactivations;   // node ids switched off after draining
};

// Moves are exactly the UEs whose association changed; deactivations are the
// nodes active before and not after. Requires the same UE universe on both
// sides and a feasible target allocation.
inline HandoverPlan plan_handovers(const ProblemInstance& inst, const Allocation& prev,
                                   const Allocation& next) {
    if (prev.assoc.size() != next.assoc.size()) {
        fail(Error::Kind::Structural, "plan_handovers: UE universes differ");
    }
    for (const auto& [ue_id, oru_id] : prev.assoc) {
        if (next.assoc.find(ue_id) == next.assoc.end()) {
            fail(Error::Kind::Structural,
                 "plan_handovers: UE " + fmt_i64(ue_id) + " missing from next allocation");
        }
    }
    if (!check_feasible(inst, next).empty()) {
        fail(Error::Kind::Infeasible, "plan_handovers: target allocation is infeasible");
    }

    HandoverPlan plan;
    std::set<int> deactivating;
    for (int node : prev.active) {
        if (next.active.count(node) == 0) {
            deactivating.insert(node);
            plan.deactivations.push_back(node);
        }
    }
    // Drain nodes being switched off first, then the remaining re-balancing
    // moves, each group in UE-id order.
    for (const auto& [ue_id, src] : prev.assoc) {
        int dst = next.assoc.at(ue_id);
        if (src != dst && deactivating.count(src) > 0) {
            plan.moves.push_back({ue_id, src, dst});
        }
    }
    for (const auto& [ue_id, src] : prev.assoc) {
        int dst = next.assoc.at(ue_id);
        if (src != dst && deactivating.count(src) == 0) {
            plan.moves.push_back({ue_id, src, dst});
        }
    }
    return plan;
}

// total = moves * per-UE time + fixed overhead; per-UE = total / max(1, moves)
inline std::pair<double, double> handover_delay(const HandoverPlan& plan,
                                                const LatencyModel& latency) {
    double total = static_cast<double>(plan.moves.size()) * latency.handover_per_ue_s +
                   (plan.moves.empty() ? 0.0 : latency.handover_overhead_s);
    double per_ue = total / std::max<std::size_t>(1, plan.moves.size());
    return {total, per_ue};
}

// ============================================================================
// LOOP TRACE
// ============================================================================

struct StageRecord {
    StageId stage;
    Component component;
    int n_ues = 0;
    double start_s = 0.0;
    double end_s = 0.0;

    double duration_s() const { return end_s - start_s; }
};

struct LoopTrace {
    int epoch = 0;
    int n_ues = 0;
    std::vector<StageRecord> stages;   // contiguous along the causal chain
    std::vector<LoopEvent> events;
    int handover_count = 0;
    double energy_before_w = 0.0;
    double energy_after_w = 0.0;
    double solver_wall_s = 0.0;        // measured on the host
    double solver_model_s = 0.0;       // modeled latency driving the clock
    bool reoptimized = false;
    bool aborted_infeasible = false;
    std::string abort_reason;
};

// Wall-to-wall delay and its per-component breakdown. Stages are contiguous,
// so the breakdown sums exactly to the total.
inline std::pair<double, std::map<Component, double>> e2e_delay(const LoopTrace& trace) {
    if (trace.stages.empty()) {
        fail(Error::Kind::Structural, "e2e_delay: trace has no stages");
    }
    std::map<Component, double> breakdown;
    for (const auto& s : trace.stages) {
        breakdown[s.component] += s.duration_s();
    }
    double total = trace.stages.back().end_s - trace.stages.front().start_s;
    return {total, breakdown};
}

// ============================================================================
// EPOCH EXECUTION
// ============================================================================

struct RanState {
    double clock_s = 0.0;
    int epoch = 0;
    std::optional<ProblemInstance> instance;  // inputs of the previous epoch
    std::optional<Allocation> allocation;
    std::map<int, int> attached;              // UE id -> node id
};

struct EpochOptions {
    SolverKind solver = SolverKind::Exact;
    int solver_threads = 1;
    // Re-optimization trigger: total-demand change beyond this fraction, or
    // any UE-count change. Zero means any change triggers.
    double demand_change_threshold = 0.0;
    bool jitter = false;
    Rng* jitter_rng = nullptr;
};

namespace detail_loop {

inline double total_demand(const ProblemInstance& inst) {
    double d = 0.0;
    for (const auto& ue : inst.ues) d += ue.demand_bps;
    return d;
}

inline bool should_reoptimize(const RanState& state, const ProblemInstance& inst,
                              double threshold) {
    if (!state.instance || !state.allocation) return true;
    if (state.instance->ues.size() != inst.ues.size()) return true;
    for (std::size_t i = 0; i < inst.ues.size(); ++i) {
        if (state.instance->ues[i].id != inst.ues[i].id) return true;
    }
    double before = total_demand(*state.instance);
    double after = total_demand(inst);
    double change = std::fabs(after - before);
    return change > threshold * std::max(1.0, before);
}

}  // namespace detail_loop

// Runs one pass of the 14-step control sequence against the given epoch
// inputs. Stages 01-06 (connection, monitoring, telemetry export) always
// run; the solve and actuation stages 07-14 run only when the epoch inputs
// changed. The returned state reflects the applied allocation; the trace
// records every stage and event on the simulated clock.
inline std::pair<RanState, LoopTrace> run_epoch(const RanState& state,
                                                const ProblemInstance& inst,
                                                const LatencyModel& latency,
                                                const EpochOptions& opts = {}) {
    RanState next = state;
    next.epoch = state.epoch + 1;

    LoopTrace trace;
    trace.epoch = state.epoch;
    trace.n_ues = static_cast<int>(inst.ues.size());
    trace.energy_before_w = state.allocation ? state.allocation->objective_w : 0.0;
    trace.energy_after_w = trace.energy_before_w;

    double clock = state.clock_s;
    double n = static_cast<double>(inst.ues.size());
    auto push_stage = [&](StageId stage, double duration) {
        if (opts.jitter && opts.jitter_rng) {
            auto it = latency.jitter_frac.find(stage);
            if (it != latency.jitter_frac.end()) {
                duration = std::max(0.0, duration * (1.0 + it->second *
                                                               opts.jitter_rng->normal(0, 1)));
            }
        }
        StageRecord rec{stage, stage_component(stage), static_cast<int>(n), clock,
                        clock + duration};
        clock += duration;
        trace.stages.push_back(rec);
    };

    // Steps 01-04: connection handling and monitoring collection.
    push_stage(StageId::RfEnvConnect, stage_time(StageId::RfEnvConnect, n, latency));
    for (const auto& ue : inst.ues) {
        if (next.attached.find(ue.id) == next.attached.end()) {
            // Connection request; association is assigned by the loop below.
            trace.events.push_back({LoopEvent::Kind::UeConnect, clock, ue.id, -1, -1});
        }
    }
    push_stage(StageId::E2nConnect, stage_time(StageId::E2nConnect, n, latency));
    push_stage(StageId::XAppMonitorCollect,
               stage_time(StageId::XAppMonitorCollect, n, latency));
    push_stage(StageId::MonitoringStoreScrape,
               stage_time(StageId::MonitoringStoreScrape, n, latency));

    // Steps 05-06: O1/VES export and Data River dispatch.
    push_stage(StageId::VespaExport, stage_time(StageId::VespaExport, n, latency));
    push_stage(StageId::VesCollect, stage_time(StageId::VesCollect, n, latency));
    push_stage(StageId::DataRiverDispatch,
               stage_time(StageId::DataRiverDispatch, n, latency));

    if (!detail_loop::should_reoptimize(state, inst, opts.demand_change_threshold)) {
        next.clock_s = clock;
        return {next, trace};
    }
    trace.reoptimized = true;

    // Step 07: rApp solve. The real solver wall time is recorded alongside
    // the modeled latency; the model drives the simulated clock.
    SolveOptions sopts;
    sopts.threads = opts.solver_threads;
    if (state.allocation) sopts.prev_assoc = state.allocation->assoc;
    SolveReport solved = solve(inst, opts.solver, sopts);
    trace.solver_wall_s = solved.wall_time_s;
    trace.solver_model_s = stage_time(StageId::RAppSolve, n, latency);
    push_stage(StageId::RAppSolve, trace.solver_model_s);

    if (solved.status == SolveStatus::Infeasible) {
        trace.aborted_infeasible = true;
        trace.abort_reason = solved.infeasible_reason;
        next.clock_s = clock;
        return {next, trace};  // state (allocation, attachments) unchanged
    }
    const Allocation& target = solved.allocation;

    // Steps 08-09: power configuration and A1 policy delivery. The policy is
    // validated before any actuation event is emitted.
    A1Policy policy;
    policy.policy_id = next.epoch;
    for (const auto& oru : inst.orus) {
        bool active = target.active.count(oru.id) > 0;
        policy.target_states[oru.id] = active ? NodeState::Active : NodeState::Standby;
        policy.power_levels_w[oru.id] = target.power_of(oru.id);
    }
    policy.target_assoc = target.assoc;
    validate_policy(policy, inst.epsilon_w);
    push_stage(StageId::A1PolicyDelivery, stage_time(StageId::A1PolicyDelivery, n, latency));
    trace.events.push_back({LoopEvent::Kind::PolicyIssued, clock, -1, -1, -1});

    std::set<int> was_active;
    if (state.allocation) was_active = state.allocation->active;
    for (int node : target.active) {
        if (was_active.count(node) == 0) {
            trace.events.push_back({LoopEvent::Kind::NodeActivated, clock, -1, -1, node});
        }
    }

    // Steps 10-13: handovers. First epoch and newly appearing UEs attach as
    // plain connections; only UEs present in both epochs are handed over.
    HandoverPlan plan;
    if (state.allocation) {
        Allocation prev_common;
        Allocation next_common;
        prev_common.active = state.allocation->active;
        next_common.active = target.active;
        for (const auto& [ue_id, node] : state.allocation->assoc) {
            auto it = target.assoc.find(ue_id);
            if (it != target.assoc.end()) {
                prev_common.assoc[ue_id] = node;
                next_common.assoc[ue_id] = it->second;
            } else {
                trace.events.push_back({LoopEvent::Kind::UeDisconnect, clock, ue_id,
                                        node, -1});
            }
        }
        std::set<int> deactivating;
        for (int node : prev_common.active) {
            if (next_common.active.count(node) == 0) {
                deactivating.insert(node);
                plan.deactivations.push_back(node);
            }
        }
        for (const auto& [ue_id, src] : prev_common.assoc) {
            int dst = next_common.assoc.at(ue_id);
            if (src != dst && deactivating.count(src) > 0) {
                plan.moves.push_back({ue_id, src, dst});
            }
        }
        for (const auto& [ue_id, src] : prev_common.assoc) {
            int dst = next_common.assoc.at(ue_id);
            if (src != dst && deactivating.count(src) == 0) {
                plan.moves.push_back({ue_id, src, dst});
            }
        }
    }
    trace.handover_count = static_cast<int>(plan.moves.size());

    auto [ho_total, ho_per_ue] = handover_delay(plan, latency);
    (void)ho_per_ue;
    double ho_start = clock;
    push_stage(StageId::XAppHandoverExec, ho_total);
    for (std::size_t i = 0; i < plan.moves.size(); ++i) {
        const auto& mv = plan.moves[i];
        double t = ho_start + latency.handover_per_ue_s * static_cast<double>(i + 1);
        trace.events.push_back({LoopEvent::Kind::HandoverComplete, t, mv.ue_id,
                                mv.source_node, mv.target_node});
        next.attached[mv.ue_id] = mv.target_node;
    }

    // Fresh attaches for UEs not previously connected.
    for (const auto& [ue_id, node] : target.assoc) {
        if (!state.allocation ||
            state.allocation->assoc.find(ue_id) == state.allocation->assoc.end()) {
            next.attached[ue_id] = node;
            trace.events.push_back({LoopEvent::Kind::UeAttach, clock, ue_id, -1, node});
        }
    }
    if (state.allocation) {
        for (const auto& [ue_id, node] : state.allocation->assoc) {
            if (target.assoc.find(ue_id) == target.assoc.end()) {
                next.attached.erase(ue_id);
            }
        }
    }

    // Step 14: RF environment and E2 node reconfiguration; nodes drained by
    // the handover stage are switched to standby only now.
    push_stage(StageId::RfEnvHandover, stage_time(StageId::RfEnvHandover, n, latency));
    push_stage(StageId::E2nReconfig, stage_time(StageId::E2nReconfig, n, latency));
    for (int node : plan.deactivations) {
        trace.events.push_back({LoopEvent::Kind::NodeDeactivated, clock, -1, -1, node});
    }
    for (int node : target.active) {
        if (was_active.count(node) > 0 &&
            state.allocation->power_of(node) != target.power_of(node)) {
            trace.events.push_back({LoopEvent::Kind::PowerReconfigured, clock, -1, -1,
                                    node});
        }
    }

    next.allocation = target;
    next.instance = inst;
    next.clock_s = clock;
    trace.energy_after_w = target.objective_w;
    return {next, trace};
}

}  // namespace oes
