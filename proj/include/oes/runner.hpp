#pragma once

#include <string>
#include <vector>

#include "oes/control_loop.hpp"
#include "oes/metrics.hpp"
#include "oes/scenario.hpp"

namespace oes {

struct RunConfig {
    SolverKind solver = SolverKind::Exact;
    int solver_threads = 1;
    int epochs = 1;
    std::vector<int> ue_schedule;  // when non-empty, one epoch per entry
    bool jitter = false;
    std::uint64_t seed = 42;
    double demand_change_threshold = 0.0;
};

inline double baseline_allon_watts(const Scenario& scn) {
    double total = 0.0;
    for (const OruSite& oru : scn.orus) {
        auto levels = power_grid_for(scn.config, oru);
        total += levels.back() / oru.amp_efficiency + oru.static_power_w;
    }
    return total;
}

// Drives the closed loop for the configured epochs and collects the paper's
// reporting metrics. With a UE schedule, each epoch serves the first n UEs
// of the scenario; otherwise the full population repeats every epoch.
inline RunSummary run_simulation(const Scenario& scn, const RunConfig& cfg,
                                 const std::string& scenario_path = "") {
    RunSummary summary;
    summary.scenario_path = scenario_path;
    summary.solver = to_string(cfg.solver);
    summary.seed = cfg.seed;
    summary.baseline_allon_w = baseline_allon_watts(scn);

    std::vector<int> schedule = cfg.ue_schedule;
    if (schedule.empty()) {
        schedule.assign(static_cast<std::size_t>(std::max(1, cfg.epochs)),
                        static_cast<int>(scn.ues.size()));
    }

    Rng jitter_rng(cfg.seed ^ 0x6f65735f6a697474ULL);  // distinct stream from generation
    EpochOptions opts;
    opts.solver = cfg.solver;
    opts.solver_threads = cfg.solver_threads;
    opts.demand_change_threshold = cfg.demand_change_threshold;
    opts.jitter = cfg.jitter;
    opts.jitter_rng = &jitter_rng;

    LatencyModel latency = paper_latency_model();
    RanState state;

    for (std::size_t i = 0; i < schedule.size(); ++i) {
        ProblemInstance inst = build_instance(scn, schedule[i]);
        auto [next_state, trace] = run_epoch(state, inst, latency, opts);

        EpochMetrics m;
        m.epoch = static_cast<int>(i);
        m.n_ues = schedule[i];
        m.aborted = trace.aborted_infeasible;
        m.reoptimized = trace.reoptimized;
        if (next_state.allocation) {
            m.total_w = next_state.allocation->objective_w;
            m.active_e2n = static_cast<int>(next_state.allocation->active.size());
        }
        m.inactive_e2n = static_cast<int>(scn.orus.size()) - m.active_e2n;
        m.per_ue_w = per_ue_energy(m.total_w, m.n_ues);
        m.savings = 1.0 - m.total_w / summary.baseline_allon_w;
        m.handover_count = trace.handover_count;
        for (const auto& s : trace.stages) {
            if (s.stage == StageId::XAppHandoverExec) {
                m.handover_total_s = s.duration_s();
            }
        }
        m.handover_per_ue_s =
            m.handover_total_s / static_cast<double>(std::max(1, m.handover_count));
        auto [total, breakdown] = e2e_delay(trace);
        m.e2e_total_s = total;
        m.e2e_breakdown = breakdown;
        m.solver_wall_s = trace.solver_wall_s;
        m.solver_model_s = trace.solver_model_s;

        summary.epochs.push_back(m);
        summary.traces.push_back(trace);
        state = next_state;
    }
    return summary;
}

}  // namespace oes
