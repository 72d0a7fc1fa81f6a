#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "oes/channel.hpp"
#include "oes/common.hpp"

namespace oes {

// ============================================================================
// PROBLEM INSTANCE
// ============================================================================

// One time step of the joint activation / association / power / bandwidth
// problem. Transmit power is discretized into per-O-RU level grids so the
// rate coefficient is a constant per level and exact search is possible.
struct ProblemInstance {
    struct Ue {
        int id = 0;
        double demand_bps = 0.0;
    };
    struct Oru {
        int id = 0;
        double max_power_w = 1.0;
        double max_bandwidth_hz = 100e6;
        double static_power_w = 11.4757;
        double amp_efficiency = 0.25;
        std::vector<double> power_levels_w;  // ascending, within [epsilon, max]
    };

    std::vector<Ue> ues;
    std::vector<Oru> orus;
    Matrix gain;  // |ues| x |orus|, linear power ratios, all > 0
    double noise_w = 1.9952623149688827e-12;
    double epsilon_w = 1e-3;

    std::size_t ue_index(int ue_id) const {
        for (std::size_t i = 0; i < ues.size(); ++i) {
            if (ues[i].id == ue_id) return i;
        }
        fail(Error::Kind::Structural, "unknown UE id " + fmt_i64(ue_id));
    }

    std::size_t oru_index(int oru_id) const {
        for (std::size_t i = 0; i < orus.size(); ++i) {
            if (orus[i].id == oru_id) return i;
        }
        fail(Error::Kind::Structural, "unknown O-RU id " + fmt_i64(oru_id));
    }

    void validate() const {
        if (orus.empty()) fail(Error::Kind::InvalidScenario, "instance has no O-RUs");
        if (noise_w <= 0) fail(Error::Kind::InvalidModel, "noise_w must be positive");
        if (epsilon_w <= 0) fail(Error::Kind::InvalidModel, "epsilon_w must be positive");
        if (gain.rows() != ues.size() || gain.cols() != orus.size()) {
            fail(Error::Kind::Structural, "gain matrix shape mismatch");
        }
        for (double b : gain.data()) {
            if (!(b > 0.0)) fail(Error::Kind::InvalidModel, "channel gains must be positive");
        }
        for (const Ue& u : ues) {
            if (u.demand_bps < 0) fail(Error::Kind::InvalidModel, "negative UE demand");
        }
        for (const Oru& r : orus) {
            if (r.max_power_w <= 0 || r.max_bandwidth_hz <= 0 || r.amp_efficiency <= 0 ||
                r.amp_efficiency > 1 || r.static_power_w < 0) {
                fail(Error::Kind::InvalidModel, "O-RU " + fmt_i64(r.id) + " parameters invalid");
            }
            if (r.power_levels_w.empty()) {
                fail(Error::Kind::InvalidModel,
                     "O-RU " + fmt_i64(r.id) + " has an empty power grid");
            }
            double prev = 0.0;
            for (double w : r.power_levels_w) {
                if (w < epsilon_w || w > r.max_power_w + 1e-12 || w < prev) {
                    fail(Error::Kind::InvalidModel,
                         "O-RU " + fmt_i64(r.id) + " power grid must be ascending within "
                         "[epsilon, max_power]");
                }
                prev = w;
            }
        }
    }
};

// ============================================================================
// ALLOCATION
// ============================================================================

// Joint decision for one time step: association x, bandwidth y, transmit
// power w, activation z. Ordered containers keep every traversal and every
// serialization deterministic.
struct Allocation {
    std::map<int, int> assoc;                           // UE id -> O-RU id
    std::map<std::pair<int, int>, double> bandwidth_hz; // (UE id, O-RU id) -> y
    std::map<int, double> power_w;                      // O-RU id -> w
    std::set<int> active;                               // O-RU ids with z = 1
    double objective_w = 0.0;

    double power_of(int oru_id) const {
        auto it = power_w.find(oru_id);
        return it == power_w.end() ? 0.0 : it->second;
    }
};

enum class SolveStatus { ProvedOptimal, Heuristic, Infeasible };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::ProvedOptimal: return "proved_optimal";
        case SolveStatus::Heuristic: return "heuristic";
        case SolveStatus::Infeasible: return "infeasible";
    }
    return "?";
}

struct SolveReport {
    Allocation allocation;  // empty when status == Infeasible
    SolveStatus status = SolveStatus::Infeasible;
    long long nodes_explored = 0;
    double wall_time_s = 0.0;
    std::string infeasible_reason;
};

// ============================================================================
// CONSTRAINTS
// ============================================================================

enum class ConstraintId {
    Assoc,              // every UE associated with exactly one O-RU
    PowerBound,         // 0 <= w <= max power
    PowerZeroWhenOff,   // inactive O-RU transmits nothing
    NoUsersWhenOff,     // inactive O-RU serves nobody
    PowerFloorWhenOn,   // active O-RU transmits at least epsilon
    BandwidthCap,       // per-O-RU bandwidth within capacity (0 when off)
    RateDemand,         // Shannon rate covers the UE demand
};

inline const char* to_string(ConstraintId c) {
    switch (c) {
        case ConstraintId::Assoc: return "assoc";
        case ConstraintId::PowerBound: return "power_bound";
        case ConstraintId::PowerZeroWhenOff: return "power_zero_when_off";
        case ConstraintId::NoUsersWhenOff: return "no_users_when_off";
        case ConstraintId::PowerFloorWhenOn: return "power_floor_when_on";
        case ConstraintId::BandwidthCap: return "bandwidth_cap";
        case ConstraintId::RateDemand: return "rate_demand";
    }
    return "?";
}

struct Violation {
    ConstraintId constraint;
    int subject_id = 0;      // UE id for Assoc/RateDemand, O-RU id otherwise
    double magnitude = 0.0;  // slack in model units, always > 0
};

inline constexpr double kFeasibilityRelTol = 1e-9;

inline double feasibility_tol(double scale) {
    return kFeasibilityRelTol * std::max(1.0, std::fabs(scale));
}

// ============================================================================
// OPERATIONS
// ============================================================================

// Total RAN power draw: sum over active O-RUs of w/eta + theta. Inactive
// O-RUs contribute nothing (standby draw is treated as negligible).
inline double objective(const ProblemInstance& inst, const Allocation& alloc) {
    double total = 0.0;
    for (int oru_id : alloc.active) {
        const auto& oru = inst.orus[inst.oru_index(oru_id)];
        total += alloc.power_of(oru_id) / oru.amp_efficiency + oru.static_power_w;
    }
    return total;
}

// Minimal bandwidth satisfying the Shannon rate constraint for one link:
// y * log2(1 + snr) >= demand.
inline double min_bandwidth_hz(double demand_bps, double snr) {
    if (demand_bps < 0) fail(Error::Kind::InvalidModel, "negative demand");
    if (demand_bps == 0.0) return 0.0;
    if (snr <= 0.0) {
        fail(Error::Kind::InfeasibleLink, "zero-SNR link cannot carry positive demand");
    }
    return demand_bps / std::log2(1.0 + snr);
}

// Non-throwing variant for solver cost matrices: +inf marks an unusable link.
inline double link_cost_hz(double demand_bps, double snr) {
    if (demand_bps == 0.0) return 0.0;
    if (snr <= 0.0) return std::numeric_limits<double>::infinity();
    return demand_bps / std::log2(1.0 + snr);
}

inline double shannon_rate_bps(double bandwidth_hz, double snr) {
    if (snr <= 0.0) return 0.0;
    return bandwidth_hz * std::log2(1.0 + snr);
}

// Checks all seven constraints at 1e-9 relative tolerance. Violations are
// data, not errors; an empty list means feasible. Each defect is reported
// once: the rate check covers associated UEs only (a missing association is
// already an Assoc violation).
inline std::vector<Violation> check_feasible(const ProblemInstance& inst,
                                             const Allocation& alloc) {
    std::vector<Violation> out;

    // Assoc: every UE exactly once, to a known O-RU.
    for (const auto& ue : inst.ues) {
        auto it = alloc.assoc.find(ue.id);
        if (it == alloc.assoc.end()) {
            out.push_back({ConstraintId::Assoc, ue.id, 1.0});
        } else {
            inst.oru_index(it->second);  // throws Structural on unknown target
        }
    }

    // Per-O-RU power and occupancy constraints, in id order.
    for (const auto& oru : inst.orus) {
        double w = alloc.power_of(oru.id);
        bool active = alloc.active.count(oru.id) > 0;

        if (w > oru.max_power_w + feasibility_tol(oru.max_power_w)) {
            out.push_back({ConstraintId::PowerBound, oru.id, w - oru.max_power_w});
        } else if (w < -feasibility_tol(0.0)) {
            out.push_back({ConstraintId::PowerBound, oru.id, -w});
        }

        if (!active && w > feasibility_tol(0.0)) {
            out.push_back({ConstraintId::PowerZeroWhenOff, oru.id, w});
        }

        if (!active) {
            int attached = 0;
            for (const auto& [ue_id, oru_id] : alloc.assoc) {
                if (oru_id == oru.id) ++attached;
            }
            if (attached > 0) {
                out.push_back({ConstraintId::NoUsersWhenOff, oru.id,
                               static_cast<double>(attached)});
            }
        }

        if (active && w < inst.epsilon_w - feasibility_tol(inst.epsilon_w)) {
            out.push_back({ConstraintId::PowerFloorWhenOn, oru.id, inst.epsilon_w - w});
        }

        double used = 0.0;
        for (const auto& [pair, y] : alloc.bandwidth_hz) {
            if (pair.second == oru.id) used += y;
        }
        double cap = active ? oru.max_bandwidth_hz : 0.0;
        if (used > cap + feasibility_tol(cap)) {
            out.push_back({ConstraintId::BandwidthCap, oru.id, used - cap});
        }
    }

    // Rate demand for every associated UE.
    for (const auto& [ue_id, oru_id] : alloc.assoc) {
        std::size_t u = inst.ue_index(ue_id);
        std::size_t r = inst.oru_index(oru_id);
        double y = 0.0;
        auto it = alloc.bandwidth_hz.find({ue_id, oru_id});
        if (it != alloc.bandwidth_hz.end()) y = it->second;
        double snr = snr_linear(inst.gain.at(u, r), alloc.power_of(oru_id), inst.noise_w);
        double rate = shannon_rate_bps(y, snr);
        double demand = inst.ues[u].demand_bps;
        if (rate < demand - feasibility_tol(demand)) {
            out.push_back({ConstraintId::RateDemand, ue_id, demand - rate});
        }
    }

    return out;
}

// Number of UEs whose association differs between two allocations over the
// same UE universe. Feeds handover counting.
inline int assoc_distance(const Allocation& prev, const Allocation& next) {
    if (prev.assoc.size() != next.assoc.size()) {
        fail(Error::Kind::Structural, "assoc_distance: UE universes differ in size");
    }
    int moved = 0;
    for (const auto& [ue_id, oru_id] : prev.assoc) {
        auto it = next.assoc.find(ue_id);
        if (it == next.assoc.end()) {
            fail(Error::Kind::Structural,
                 "assoc_distance: UE " + fmt_i64(ue_id) + " missing from next allocation");
        }
        if (it->second != oru_id) ++moved;
    }
    return moved;
}

}  // namespace oes
