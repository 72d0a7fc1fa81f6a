#pragma once

#include <algorithm>
#include <chrono>
#include <optional>
#include <vector>

#include "oes/problem.hpp"
#include "oes/solver_detail.hpp"

namespace oes {

// Scalability fallback. Places UEs in descending-demand order onto the
// active O-RU with the best SNR that still has bandwidth headroom, opening
// closed O-RUs (best gain first, lowest sufficient power level) or raising
// an active O-RU's level when nothing fits. A final pass lowers every O-RU
// to the cheapest level that still carries its load. If the placement pass
// dead-ends, the all-active/max-power packing decides feasibility, so greedy
// is feasible whenever the exact solver is.
inline SolveReport solve_greedy(const ProblemInstance& inst, const SolveOptions& opts = {}) {
    inst.validate();
    auto t0 = std::chrono::steady_clock::now();
    SolveReport report;
    report.status = SolveStatus::Infeasible;

    const std::size_t n_ues = inst.ues.size();
    const std::size_t n_orus = inst.orus.size();
    detail::CostModel costs(inst, opts.threads);

    std::vector<std::size_t> order(n_ues);
    for (std::size_t i = 0; i < n_ues; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (inst.ues[a].demand_bps != inst.ues[b].demand_bps) {
            return inst.ues[a].demand_bps > inst.ues[b].demand_bps;
        }
        return inst.ues[a].id < inst.ues[b].id;
    });

    constexpr std::size_t kClosed = static_cast<std::size_t>(-1);
    std::vector<std::size_t> level(n_orus, kClosed);
    std::vector<std::vector<std::size_t>> assigned(n_orus);
    std::vector<int> ue_oru(n_ues, -1);

    auto load_at = [&](std::size_t r, std::size_t lvl) {
        double sum = 0.0;
        for (std::size_t u : assigned[r]) sum += costs.at(u, r, lvl);
        return sum;
    };

    bool placement_failed = false;
    for (std::size_t u : order) {
        // 1) Active O-RU with the highest SNR at its current power that fits.
        std::size_t pick = kClosed;
        double pick_snr = -1.0;
        for (std::size_t r = 0; r < n_orus; ++r) {
            if (level[r] == kClosed) continue;
            double c = costs.at(u, r, level[r]);
            if (!(load_at(r, level[r]) + c <= inst.orus[r].max_bandwidth_hz)) continue;
            double snr = snr_linear(inst.gain.at(u, r),
                                    inst.orus[r].power_levels_w[level[r]], inst.noise_w);
            if (snr > pick_snr) {
                pick_snr = snr;
                pick = r;
            }
        }
        if (pick != kClosed) {
            assigned[pick].push_back(u);
            ue_oru[u] = static_cast<int>(pick);
            continue;
        }

        // 2) Open the closed O-RU with the best gain, at the lowest level
        //    that can carry this UE alone.
        std::size_t open_r = kClosed;
        std::size_t open_lvl = 0;
        double open_gain = -1.0;
        for (std::size_t r = 0; r < n_orus; ++r) {
            if (level[r] != kClosed) continue;
            for (std::size_t l = 0; l < costs.levels(r); ++l) {
                if (costs.at(u, r, l) <= inst.orus[r].max_bandwidth_hz) {
                    if (inst.gain.at(u, r) > open_gain) {
                        open_gain = inst.gain.at(u, r);
                        open_r = r;
                        open_lvl = l;
                    }
                    break;
                }
            }
        }
        if (open_r != kClosed) {
            level[open_r] = open_lvl;
            assigned[open_r].push_back(u);
            ue_oru[u] = static_cast<int>(open_r);
            continue;
        }

        // 3) Raise an active O-RU to the lowest level that fits its current
        //    load plus this UE; best gain wins among the sufficient ones.
        std::size_t raise_r = kClosed;
        std::size_t raise_lvl = 0;
        double raise_gain = -1.0;
        for (std::size_t r = 0; r < n_orus; ++r) {
            if (level[r] == kClosed) continue;
            for (std::size_t l = level[r] + 1; l < costs.levels(r); ++l) {
                if (load_at(r, l) + costs.at(u, r, l) <= inst.orus[r].max_bandwidth_hz) {
                    if (inst.gain.at(u, r) > raise_gain) {
                        raise_gain = inst.gain.at(u, r);
                        raise_r = r;
                        raise_lvl = l;
                    }
                    break;
                }
            }
        }
        if (raise_r != kClosed) {
            level[raise_r] = raise_lvl;
            assigned[raise_r].push_back(u);
            ue_oru[u] = static_cast<int>(raise_r);
            continue;
        }

        placement_failed = true;
        break;
    }

    if (placement_failed) {
        // Fallback: everything active at maximum power. First-fit-decreasing,
        // then the exact packing search; feasibility at any configuration
        // implies feasibility here.
        for (std::size_t r = 0; r < n_orus; ++r) {
            level[r] = costs.levels(r) - 1;
            assigned[r].clear();
        }
        std::fill(ue_oru.begin(), ue_oru.end(), -1);

        std::vector<double> residual(n_orus);
        for (std::size_t r = 0; r < n_orus; ++r) residual[r] = inst.orus[r].max_bandwidth_hz;
        bool ffd_ok = true;
        for (std::size_t u : order) {
            std::size_t pick = kClosed;
            double pick_cost = detail::kInf;
            for (std::size_t r = 0; r < n_orus; ++r) {
                double c = costs.at(u, r, level[r]);
                if (c <= residual[r] && c < pick_cost) {
                    pick_cost = c;
                    pick = r;
                }
            }
            if (pick == kClosed) {
                ffd_ok = false;
                break;
            }
            residual[pick] -= pick_cost;
            assigned[pick].push_back(u);
            ue_oru[u] = static_cast<int>(pick);
        }

        if (!ffd_ok) {
            std::vector<std::vector<double>> need(n_ues, std::vector<double>(n_orus));
            std::vector<double> cap(n_orus);
            for (std::size_t r = 0; r < n_orus; ++r) {
                cap[r] = inst.orus[r].max_bandwidth_hz;
                for (std::size_t u = 0; u < n_ues; ++u) {
                    need[u][r] = costs.at(u, r, level[r]);
                }
            }
            detail::PackingSearch search(need, cap);
            auto assignment = search.solve(report.nodes_explored);
            if (!assignment) {
                report.infeasible_reason =
                    "demand exceeds capacity even with every O-RU at maximum power";
                report.wall_time_s =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                        .count();
                return report;
            }
            for (std::size_t r = 0; r < n_orus; ++r) assigned[r].clear();
            for (std::size_t u = 0; u < n_ues; ++u) {
                std::size_t r = static_cast<std::size_t>((*assignment)[u]);
                assigned[r].push_back(u);
                ue_oru[u] = static_cast<int>(r);
            }
        }
    }

    // Power reduction: lowest level that still carries the assigned load;
    // O-RUs left without users are closed.
    for (std::size_t r = 0; r < n_orus; ++r) {
        if (level[r] == kClosed) continue;
        if (assigned[r].empty()) {
            level[r] = kClosed;
            continue;
        }
        for (std::size_t l = 0; l < costs.levels(r); ++l) {
            bool finite = true;
            for (std::size_t u : assigned[r]) {
                if (costs.at(u, r, l) == detail::kInf) {
                    finite = false;
                    break;
                }
            }
            if (finite && load_at(r, l) <= inst.orus[r].max_bandwidth_hz) {
                level[r] = l;
                break;
            }
        }
    }

    Allocation alloc;
    for (std::size_t r = 0; r < n_orus; ++r) {
        if (level[r] == kClosed) continue;
        alloc.active.insert(inst.orus[r].id);
        alloc.power_w[inst.orus[r].id] = inst.orus[r].power_levels_w[level[r]];
    }
    for (std::size_t u = 0; u < n_ues; ++u) {
        std::size_t r = static_cast<std::size_t>(ue_oru[u]);
        alloc.assoc[inst.ues[u].id] = inst.orus[r].id;
        alloc.bandwidth_hz[{inst.ues[u].id, inst.orus[r].id}] = costs.at(u, r, level[r]);
    }
    alloc.objective_w = objective(inst, alloc);
    report.allocation = alloc;
    report.status = SolveStatus::Heuristic;
    report.nodes_explored += static_cast<long long>(n_ues);
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace oes
