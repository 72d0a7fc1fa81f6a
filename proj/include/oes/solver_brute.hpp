#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "oes/problem.hpp"
#include "oes/solver_detail.hpp"

namespace oes {

// Exhaustive oracle: enumerates every activation set, every per-O-RU power
// level combination, and every UE association. Kept deliberately independent
// of the branch-and-bound machinery so it can verify it. Guarded against
// combinatorial blow-up.
inline SolveReport solve_bruteforce(const ProblemInstance& inst) {
    inst.validate();
    if (inst.orus.size() > 4 || inst.ues.size() > 8) {
        fail(Error::Kind::OracleTooLarge,
             "brute-force oracle accepts at most 4 O-RUs and 8 UEs");
    }
    for (const auto& oru : inst.orus) {
        if (oru.power_levels_w.size() > 3) {
            fail(Error::Kind::OracleTooLarge,
                 "brute-force oracle accepts at most 3 power levels per O-RU");
        }
    }

    auto t0 = std::chrono::steady_clock::now();
    SolveReport report;
    report.status = SolveStatus::Infeasible;
    report.infeasible_reason = "no activation/power/association combination is feasible";

    const std::size_t n_orus = inst.orus.size();
    const std::size_t n_ues = inst.ues.size();
    detail::CandidateKey best_key;
    bool have_best = false;

    for (std::uint32_t mask = 0; mask < (1u << n_orus); ++mask) {
        std::vector<std::size_t> active;
        for (std::size_t r = 0; r < n_orus; ++r) {
            if (mask & (1u << r)) active.push_back(r);
        }
        if (active.empty() && n_ues > 0) continue;  // nobody to associate with

        // Odometer over level indices, first active O-RU fastest.
        std::vector<std::size_t> level(active.size(), 0);
        bool levels_done = false;
        while (!levels_done) {
            ++report.nodes_explored;

            double obj = 0.0;
            double total_power = 0.0;
            for (std::size_t k = 0; k < active.size(); ++k) {
                const auto& oru = inst.orus[active[k]];
                double w = oru.power_levels_w[level[k]];
                obj += w / oru.amp_efficiency + oru.static_power_w;
                total_power += w;
            }

            // Per-UE bandwidth need on each active O-RU at these levels.
            std::vector<std::vector<double>> need(n_ues,
                                                  std::vector<double>(active.size()));
            for (std::size_t u = 0; u < n_ues; ++u) {
                for (std::size_t k = 0; k < active.size(); ++k) {
                    const auto& oru = inst.orus[active[k]];
                    double snr = snr_linear(inst.gain.at(u, active[k]),
                                            oru.power_levels_w[level[k]], inst.noise_w);
                    need[u][k] = link_cost_hz(inst.ues[u].demand_bps, snr);
                }
            }

            // Recursive association enumeration with a running capacity check.
            // All associations of one (z, w) share every ranking key, so the
            // first feasible one found stands for them all.
            std::vector<double> used(active.size(), 0.0);
            std::vector<int> slot(n_ues, -1);
            long long leaves = 0;
            auto enumerate = [&](auto&& self, std::size_t u) -> bool {
                if (u == n_ues) {
                    ++leaves;
                    return true;
                }
                for (std::size_t k = 0; k < active.size(); ++k) {
                    double c = need[u][k];
                    if (!(used[k] + c <= inst.orus[active[k]].max_bandwidth_hz)) continue;
                    used[k] += c;
                    slot[u] = static_cast<int>(k);
                    if (self(self, u + 1)) return true;
                    slot[u] = -1;
                    used[k] -= c;
                }
                return false;
            };

            if (enumerate(enumerate, 0)) {
                detail::CandidateKey key{obj, static_cast<int>(active.size()), 0, mask,
                                         total_power};
                if (!have_best || key.better_than(best_key)) {
                    best_key = key;
                    have_best = true;
                    Allocation alloc;
                    for (std::size_t k = 0; k < active.size(); ++k) {
                        const auto& oru = inst.orus[active[k]];
                        alloc.active.insert(oru.id);
                        alloc.power_w[oru.id] = oru.power_levels_w[level[k]];
                    }
                    for (std::size_t u = 0; u < n_ues; ++u) {
                        const auto& oru = inst.orus[active[slot[u]]];
                        alloc.assoc[inst.ues[u].id] = oru.id;
                        alloc.bandwidth_hz[{inst.ues[u].id, oru.id}] = need[u][slot[u]];
                    }
                    alloc.objective_w = objective(inst, alloc);
                    report.allocation = alloc;
                    report.status = SolveStatus::ProvedOptimal;
                    report.infeasible_reason.clear();
                }
            }

            // Advance the level odometer.
            std::size_t pos = 0;
            while (pos < active.size()) {
                if (++level[pos] < inst.orus[active[pos]].power_levels_w.size()) break;
                level[pos] = 0;
                ++pos;
            }
            levels_done = active.empty() || pos == active.size();
            if (active.empty()) {
                // Single empty-set candidate (only reachable with zero UEs).
                break;
            }
        }
    }

    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace oes
