#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <thread>
#include <vector>

#include "oes/problem.hpp"

namespace oes::detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ============================================================================
// COST MODEL
// ============================================================================

// Precomputed bandwidth cost of serving UE u from O-RU r at power level l:
// cost = demand / log2(1 + snr(beta, w_l)). +inf marks an unusable link.
// The fill is the only parallel section in the solvers; each element is an
// independent pure computation, so the result is identical for any thread
// count.
class CostModel {
  public:
    CostModel() = default;

    explicit CostModel(const ProblemInstance& inst, int threads = 1) : inst_(&inst) {
        level_offset_.resize(inst.orus.size());
        std::size_t total = 0;
        for (std::size_t r = 0; r < inst.orus.size(); ++r) {
            level_offset_[r] = total;
            total += inst.orus[r].power_levels_w.size();
        }
        stride_ = total;
        cost_.assign(inst.ues.size() * total, kInf);

        auto fill_rows = [&](std::size_t begin, std::size_t end) {
            for (std::size_t u = begin; u < end; ++u) {
                for (std::size_t r = 0; r < inst.orus.size(); ++r) {
                    const auto& levels = inst.orus[r].power_levels_w;
                    for (std::size_t l = 0; l < levels.size(); ++l) {
                        double snr = snr_linear(inst.gain.at(u, r), levels[l], inst.noise_w);
                        cost_[u * stride_ + level_offset_[r] + l] =
                            link_cost_hz(inst.ues[u].demand_bps, snr);
                    }
                }
            }
        };

        std::size_t n = inst.ues.size();
        if (threads <= 1 || n < 64) {
            fill_rows(0, n);
        } else {
            std::size_t workers = std::min<std::size_t>(threads, n);
            std::size_t chunk = (n + workers - 1) / workers;
            std::vector<std::thread> pool;
            for (std::size_t w = 0; w < workers; ++w) {
                std::size_t begin = w * chunk;
                std::size_t end = std::min(n, begin + chunk);
                if (begin < end) pool.emplace_back(fill_rows, begin, end);
            }
            for (auto& t : pool) t.join();
        }
    }

    double at(std::size_t ue, std::size_t oru, std::size_t level) const {
        return cost_[ue * stride_ + level_offset_[oru] + level];
    }

    std::size_t levels(std::size_t oru) const {
        return inst_->orus[oru].power_levels_w.size();
    }

    // Cheapest possible bandwidth for this link (O-RU at its top level).
    double best_case(std::size_t ue, std::size_t oru) const {
        return at(ue, oru, levels(oru) - 1);
    }

  private:
    const ProblemInstance* inst_ = nullptr;
    std::vector<std::size_t> level_offset_;
    std::size_t stride_ = 0;
    std::vector<double> cost_;
};

// ============================================================================
// PACKING FEASIBILITY
// ============================================================================

// Exact feasibility search: can every UE be assigned to one of the active
// O-RUs without exceeding any bandwidth capacity? Costs are fixed per
// (UE, O-RU) for a given power vector. Deterministic DFS, most-constrained
// UE first, cheapest O-RU first, with a residual-volume prune.
class PackingSearch {
  public:
    // costs[u][k] = bandwidth of UE u on the k-th active O-RU (kInf if unusable)
    PackingSearch(const std::vector<std::vector<double>>& costs, std::vector<double> capacity)
        : costs_(costs), residual_(std::move(capacity)) {}

    // Returns per-UE choice of active-O-RU slot, or nullopt when no
    // assignment exists. `nodes` accumulates visited search states.
    std::optional<std::vector<int>> solve(long long& nodes) {
        std::size_t n_ues = costs_.size();
        order_.resize(n_ues);
        for (std::size_t i = 0; i < n_ues; ++i) order_[i] = i;

        min_cost_.assign(n_ues, kInf);
        for (std::size_t u = 0; u < n_ues; ++u) {
            int options = 0;
            for (double c : costs_[u]) {
                if (c < kInf) {
                    ++options;
                    min_cost_[u] = std::min(min_cost_[u], c);
                }
            }
            if (options == 0) return std::nullopt;
        }
        // Hardest first: fewest usable O-RUs, then largest minimal cost.
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            int oa = usable_count(a);
            int ob = usable_count(b);
            if (oa != ob) return oa < ob;
            if (min_cost_[a] != min_cost_[b]) return min_cost_[a] > min_cost_[b];
            return a < b;
        });

        suffix_min_.assign(n_ues + 1, 0.0);
        for (std::size_t i = n_ues; i-- > 0;) {
            suffix_min_[i] = suffix_min_[i + 1] + min_cost_[order_[i]];
        }

        choice_.assign(n_ues, -1);
        if (!dfs(0, nodes)) return std::nullopt;
        return choice_;
    }

  private:
    int usable_count(std::size_t u) const {
        int n = 0;
        for (double c : costs_[u]) {
            if (c < kInf) ++n;
        }
        return n;
    }

    bool dfs(std::size_t depth, long long& nodes) {
        ++nodes;
        if (depth == order_.size()) return true;

        double residual_total = 0.0;
        for (double r : residual_) residual_total += r;
        if (suffix_min_[depth] > residual_total) return false;

        std::size_t u = order_[depth];
        std::vector<int> slots;
        for (std::size_t k = 0; k < costs_[u].size(); ++k) {
            if (costs_[u][k] <= residual_[k]) slots.push_back(static_cast<int>(k));
        }
        std::stable_sort(slots.begin(), slots.end(), [&](int a, int b) {
            if (costs_[u][a] != costs_[u][b]) return costs_[u][a] < costs_[u][b];
            return a < b;
        });
        for (int k : slots) {
            residual_[k] -= costs_[u][k];
            choice_[u] = k;
            if (dfs(depth + 1, nodes)) return true;
            choice_[u] = -1;
            residual_[k] += costs_[u][k];
        }
        return false;
    }

    const std::vector<std::vector<double>>& costs_;
    std::vector<double> residual_;
    std::vector<std::size_t> order_;
    std::vector<double> min_cost_;
    std::vector<double> suffix_min_;
    std::vector<int> choice_;
};

// ============================================================================
// TIE-BREAKING
// ============================================================================

// Lexicographic order on active sets viewed as ascending id sequences.
inline bool lex_mask_less(std::uint32_t a, std::uint32_t b) {
    while (a != 0 && b != 0) {
        int la = std::countr_zero(a);
        int lb = std::countr_zero(b);
        if (la != lb) return la < lb;
        a &= a - 1;
        b &= b - 1;
    }
    return a == 0 && b != 0;
}

// Candidate ranking: objective, fewer active O-RUs, fewer handovers vs the
// previous epoch (when a previous association is supplied), lexicographically
// smallest active set, smallest total transmit power.
struct CandidateKey {
    double objective = kInf;
    int active_count = 0;
    int handover_distance = 0;
    std::uint32_t active_mask = 0;
    double total_power = 0.0;

    bool better_than(const CandidateKey& other) const {
        if (objective != other.objective) return objective < other.objective;
        if (active_count != other.active_count) return active_count < other.active_count;
        if (handover_distance != other.handover_distance)
            return handover_distance < other.handover_distance;
        if (active_mask != other.active_mask)
            return lex_mask_less(active_mask, other.active_mask);
        return total_power < other.total_power;
    }
};

inline int handover_distance(const ProblemInstance& inst,
                             const std::vector<int>& choice_oru_index,
                             const std::map<int, int>& prev_assoc) {
    int moved = 0;
    for (std::size_t u = 0; u < inst.ues.size(); ++u) {
        auto it = prev_assoc.find(inst.ues[u].id);
        if (it != prev_assoc.end() && it->second != inst.orus[choice_oru_index[u]].id) {
            ++moved;
        }
    }
    return moved;
}

// Assembles the final allocation from a (mask, level, assignment) triple.
// Bandwidths are the exact minimal Shannon bandwidths.
inline Allocation make_allocation(const ProblemInstance& inst, const CostModel& costs,
                                  const std::vector<std::size_t>& active_idx,
                                  const std::vector<std::size_t>& level_idx,
                                  const std::vector<int>& ue_slot) {
    Allocation alloc;
    for (std::size_t k = 0; k < active_idx.size(); ++k) {
        const auto& oru = inst.orus[active_idx[k]];
        alloc.active.insert(oru.id);
        alloc.power_w[oru.id] = oru.power_levels_w[level_idx[k]];
    }
    for (std::size_t u = 0; u < inst.ues.size(); ++u) {
        std::size_t k = static_cast<std::size_t>(ue_slot[u]);
        const auto& oru = inst.orus[active_idx[k]];
        alloc.assoc[inst.ues[u].id] = oru.id;
        alloc.bandwidth_hz[{inst.ues[u].id, oru.id}] =
            costs.at(u, active_idx[k], level_idx[k]);
    }
    alloc.objective_w = objective(inst, alloc);
    return alloc;
}

}  // namespace oes::detail
