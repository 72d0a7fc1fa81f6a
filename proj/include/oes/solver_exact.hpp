#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "oes/problem.hpp"
#include "oes/solver_detail.hpp"

namespace oes {

struct SolveOptions {
    int threads = 1;
    // Previous epoch's association; when present, ties between equal-objective
    // optima prefer the allocation with fewer handovers.
    std::optional<std::map<int, int>> prev_assoc;
};

namespace detail {

// Minimum-cost power levels for a fixed activation set, found by best-first
// search over the level lattice from the cheapest corner. Feasibility is
// monotone in every coordinate (more power never hurts), so the first
// feasible vector popped is the cheapest one.
struct InnerResult {
    std::vector<std::size_t> level_idx;
    std::vector<int> ue_slot;
    double objective = kInf;
    double total_power = 0.0;
};

inline std::optional<InnerResult> solve_levels_for_activation(
    const ProblemInstance& inst, const CostModel& costs,
    const std::vector<std::size_t>& active, double prune_above, long long& nodes) {
    const std::size_t n_ues = inst.ues.size();
    const std::size_t n_active = active.size();

    auto pack = [&](const std::vector<std::size_t>& level_idx,
                    long long& n) -> std::optional<std::vector<int>> {
        std::vector<std::vector<double>> need(n_ues, std::vector<double>(n_active));
        std::vector<double> cap(n_active);
        for (std::size_t k = 0; k < n_active; ++k) {
            cap[k] = inst.orus[active[k]].max_bandwidth_hz;
            for (std::size_t u = 0; u < n_ues; ++u) {
                need[u][k] = costs.at(u, active[k], level_idx[k]);
            }
        }
        PackingSearch search(need, cap);
        return search.solve(n);
    };

    // Feasibility screen at the all-max corner; if even maximum power cannot
    // serve the demand, no level vector for this activation can.
    std::vector<std::size_t> top(n_active);
    for (std::size_t k = 0; k < n_active; ++k) top[k] = costs.levels(active[k]) - 1;
    auto top_assign = pack(top, nodes);
    if (!top_assign) return std::nullopt;

    auto node_cost = [&](const std::vector<std::size_t>& level_idx) {
        double obj = 0.0;
        for (std::size_t k = 0; k < n_active; ++k) {
            const auto& oru = inst.orus[active[k]];
            obj += oru.power_levels_w[level_idx[k]] / oru.amp_efficiency +
                   oru.static_power_w;
        }
        return obj;
    };

    auto encode = [&](const std::vector<std::size_t>& level_idx) {
        std::uint64_t code = 0;
        for (std::size_t k = 0; k < n_active; ++k) {
            code = code * 9 + level_idx[k];  // grids hold at most a handful of levels
        }
        return code;
    };

    using Entry = std::pair<double, std::vector<std::size_t>>;
    auto cmp = [](const Entry& a, const Entry& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second > b.second;  // deterministic order among equal costs
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> frontier(cmp);
    std::set<std::uint64_t> seen;

    std::vector<std::size_t> bottom(n_active, 0);
    frontier.emplace(node_cost(bottom), bottom);
    seen.insert(encode(bottom));

    while (!frontier.empty()) {
        auto [cost, level_idx] = frontier.top();
        frontier.pop();
        ++nodes;
        if (cost > prune_above) return std::nullopt;

        std::optional<std::vector<int>> assignment;
        if (level_idx == top) {
            assignment = top_assign;
        } else {
            assignment = pack(level_idx, nodes);
        }
        if (assignment) {
            InnerResult res;
            res.level_idx = level_idx;
            res.ue_slot = *assignment;
            res.objective = cost;
            for (std::size_t k = 0; k < n_active; ++k) {
                res.total_power += inst.orus[active[k]].power_levels_w[level_idx[k]];
            }
            return res;
        }
        for (std::size_t k = 0; k < n_active; ++k) {
            if (level_idx[k] + 1 >= costs.levels(active[k])) continue;
            auto next = level_idx;
            ++next[k];
            if (seen.insert(encode(next)).second) {
                frontier.emplace(node_cost(next), next);
            }
        }
    }
    return std::nullopt;
}

}  // namespace detail

// Exact solver: enumerates activation sets in lower-bound order (the bound is
// the sum of each forced-active O-RU's cheapest draw), solves per-O-RU power
// levels with the association packing subproblem inside, and stops once the
// bound passes the incumbent. Every activation set whose bound ties the
// optimum is still evaluated, so tie-breaking is applied over all optima.
inline SolveReport solve_exact(const ProblemInstance& inst, const SolveOptions& opts = {}) {
    inst.validate();
    if (inst.orus.size() > 20) {
        fail(Error::Kind::OracleTooLarge, "exact solver supports at most 20 O-RUs");
    }

    auto t0 = std::chrono::steady_clock::now();
    SolveReport report;
    report.status = SolveStatus::Infeasible;

    const std::size_t n_orus = inst.orus.size();
    const std::size_t n_ues = inst.ues.size();
    detail::CostModel costs(inst, opts.threads);

    // Cheapest possible draw and capacity per O-RU.
    std::vector<double> min_draw(n_orus);
    std::vector<double> capacity(n_orus);
    for (std::size_t r = 0; r < n_orus; ++r) {
        const auto& oru = inst.orus[r];
        min_draw[r] = oru.power_levels_w.front() / oru.amp_efficiency + oru.static_power_w;
        capacity[r] = oru.max_bandwidth_hz;
    }

    // Lower bound on total bandwidth volume: every UE at its globally
    // cheapest link (any O-RU, top power).
    double volume_floor = 0.0;
    bool any_unservable = false;
    for (std::size_t u = 0; u < n_ues; ++u) {
        double best = detail::kInf;
        for (std::size_t r = 0; r < n_orus; ++r) {
            best = std::min(best, costs.best_case(u, r));
        }
        if (best == detail::kInf) {
            any_unservable = true;
            break;
        }
        volume_floor += best;
    }
    if (any_unservable) {
        report.infeasible_reason =
            "a UE demand cannot be carried by any O-RU even at maximum power";
        report.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return report;
    }

    struct SubsetEntry {
        double bound;
        int count;
        std::uint32_t mask;
        double total_capacity;
    };
    std::vector<SubsetEntry> subsets;
    subsets.reserve(std::size_t{1} << n_orus);
    for (std::uint32_t mask = 0; mask < (1u << n_orus); ++mask) {
        if (mask == 0 && n_ues > 0) continue;
        double bound = 0.0;
        double cap = 0.0;
        for (std::uint32_t m = mask; m != 0; m &= m - 1) {
            std::size_t r = static_cast<std::size_t>(std::countr_zero(m));
            bound += min_draw[r];
            cap += capacity[r];
        }
        subsets.push_back({bound, std::popcount(mask), mask, cap});
    }
    std::sort(subsets.begin(), subsets.end(), [](const SubsetEntry& a, const SubsetEntry& b) {
        if (a.bound != b.bound) return a.bound < b.bound;
        if (a.count != b.count) return a.count < b.count;
        return detail::lex_mask_less(a.mask, b.mask);
    });

    bool have_best = false;
    detail::CandidateKey best_key;
    bool any_activation_served_all = false;

    for (const SubsetEntry& entry : subsets) {
        if (have_best && entry.bound > best_key.objective) break;
        ++report.nodes_explored;
        if (entry.total_capacity < volume_floor) continue;

        std::vector<std::size_t> active;
        for (std::uint32_t m = entry.mask; m != 0; m &= m - 1) {
            active.push_back(static_cast<std::size_t>(std::countr_zero(m)));
        }

        // Volume screen against this activation's own best-case costs.
        double volume = 0.0;
        bool usable = true;
        for (std::size_t u = 0; u < n_ues && usable; ++u) {
            double best = detail::kInf;
            for (std::size_t k : active) {
                best = std::min(best, costs.best_case(u, k));
            }
            if (best == detail::kInf) {
                usable = false;
            } else {
                volume += best;
            }
        }
        if (!usable || volume > entry.total_capacity) continue;

        double prune_above = have_best ? best_key.objective : detail::kInf;
        auto inner = detail::solve_levels_for_activation(inst, costs, active, prune_above,
                                                         report.nodes_explored);
        if (!inner) continue;
        any_activation_served_all = true;

        detail::CandidateKey key;
        key.objective = inner->objective;
        key.active_count = entry.count;
        key.active_mask = entry.mask;
        key.total_power = inner->total_power;
        if (opts.prev_assoc) {
            key.handover_distance =
                detail::handover_distance(inst, [&] {
                    std::vector<int> oru_index_of_ue(n_ues);
                    for (std::size_t u = 0; u < n_ues; ++u) {
                        oru_index_of_ue[u] = static_cast<int>(active[inner->ue_slot[u]]);
                    }
                    return oru_index_of_ue;
                }(), *opts.prev_assoc);
        }

        if (!have_best || key.better_than(best_key)) {
            best_key = key;
            have_best = true;
            report.allocation =
                detail::make_allocation(inst, costs, active, inner->level_idx, inner->ue_slot);
            report.status = SolveStatus::ProvedOptimal;
        }
    }

    if (!have_best) {
        report.status = SolveStatus::Infeasible;
        report.infeasible_reason =
            any_activation_served_all
                ? "no feasible activation/power combination"
                : "demand exceeds capacity even with every O-RU at maximum power";
    }
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace oes
