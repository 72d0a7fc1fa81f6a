#include <gtest/gtest.h>

#include <cmath>

#include "oes/solve.hpp"
#include "test_support.hpp"

namespace {

using namespace oes;
using oes::testing::demand_for_capacity;
using oes::testing::random_instance;
using oes::testing::RandomSpec;
using oes::testing::uniform_instance;

TEST(BruteForce, SingleUeSingleOru) {
    ProblemInstance inst = uniform_instance(1, 1, 1e6, 1e-8, 1e-12, {0.25, 0.5, 1.0});
    SolveReport report = solve_bruteforce(inst);
    ASSERT_EQ(report.status, SolveStatus::ProvedOptimal);
    EXPECT_EQ(report.allocation.active, std::set<int>{0});
    // Demand fits at the lowest level, so the lowest level wins.
    EXPECT_DOUBLE_EQ(report.allocation.power_w[0], 0.25);
    EXPECT_NEAR(report.allocation.objective_w, 0.25 / 0.25 + 11.4757, 1e-12);
    EXPECT_TRUE(check_feasible(inst, report.allocation).empty());
}

// Two UEs, two identical O-RUs, both fit one O-RU: exactly one stays active,
// ties resolved toward the lexicographically smallest active set.
TEST(BruteForce, ConsolidatesOntoOneOru) {
    ProblemInstance inst = uniform_instance(2, 2, 1e6, 1e-8, 1e-12, {0.5, 1.0});
    inst.orus[0].static_power_w = inst.orus[1].static_power_w = 10.0;
    SolveReport report = solve_bruteforce(inst);
    ASSERT_EQ(report.status, SolveStatus::ProvedOptimal);
    EXPECT_EQ(report.allocation.active, std::set<int>{0});
    EXPECT_DOUBLE_EQ(report.allocation.power_w[0], 0.5);
    EXPECT_DOUBLE_EQ(report.allocation.objective_w, 0.5 / 0.25 + 10.0);
}

TEST(BruteForce, OverloadedInstanceInfeasible) {
    // Demand above what one O-RU can carry at max power.
    double snr = 1e-8 * 1.0 / 1e-12;
    double demand = 2.0 * 100e6 * std::log2(1.0 + snr);
    ProblemInstance inst = uniform_instance(1, 1, demand);
    SolveReport report = solve_bruteforce(inst);
    EXPECT_EQ(report.status, SolveStatus::Infeasible);
    EXPECT_FALSE(report.infeasible_reason.empty());
}

TEST(BruteForce, GuardsAgainstBlowup) {
    EXPECT_THROW(solve_bruteforce(uniform_instance(9, 2, 1e6)), Error);
    EXPECT_THROW(solve_bruteforce(uniform_instance(2, 5, 1e6)), Error);
    ProblemInstance inst = uniform_instance(2, 2, 1e6, 1e-8, 1e-12,
                                            {0.25, 0.5, 0.75, 1.0});
    EXPECT_THROW(solve_bruteforce(inst), Error);
}

TEST(Exact, MatchesHandCountingOnUniformCoverage) {
    // Capacity 2 UEs per O-RU: 5 UEs need ceil(5/2) = 3 active nodes.
    double snr = 1e4;
    double demand = demand_for_capacity(1e6, snr, 2);
    ProblemInstance inst = uniform_instance(5, 3, demand, 1e-8, 1e-12, {1.0}, 1e6);
    SolveReport exact = solve_exact(inst);
    ASSERT_EQ(exact.status, SolveStatus::ProvedOptimal);
    EXPECT_EQ(exact.allocation.active.size(), 3u);
    SolveReport brute = solve_bruteforce(inst);
    EXPECT_DOUBLE_EQ(exact.allocation.objective_w, brute.allocation.objective_w);
}

TEST(Exact, DominatedOruStaysInactive) {
    ProblemInstance inst = uniform_instance(2, 2, 1e6, 1e-8, 1e-12, {1.0});
    for (int u = 0; u < 2; ++u) {
        inst.gain.at(u, 1) = 1e-9;  // strictly worse channel to O-RU 1
    }
    SolveReport exact = solve_exact(inst);
    ASSERT_EQ(exact.status, SolveStatus::ProvedOptimal);
    EXPECT_EQ(exact.allocation.active, std::set<int>{0});
    SolveReport brute = solve_bruteforce(inst);
    EXPECT_DOUBLE_EQ(exact.allocation.objective_w, brute.allocation.objective_w);
}

TEST(Exact, InfeasibleReported) {
    double snr = 1e4;
    double demand = 3.0 * 100e6 * std::log2(1.0 + snr);
    ProblemInstance inst = uniform_instance(2, 2, demand);
    SolveReport report = solve_exact(inst);
    EXPECT_EQ(report.status, SolveStatus::Infeasible);
    EXPECT_FALSE(report.infeasible_reason.empty());
}

TEST(Exact, RepeatedSolvesIdentical) {
    Rng rng(7);
    RandomSpec spec;
    spec.max_orus = 4;
    spec.max_ues = 10;
    spec.max_levels = 3;
    for (int i = 0; i < 20; ++i) {
        ProblemInstance inst = random_instance(rng, spec);
        SolveReport a = solve_exact(inst);
        SolveReport b = solve_exact(inst);
        EXPECT_EQ(a.status, b.status);
        if (a.status != SolveStatus::Infeasible) {
            EXPECT_EQ(a.allocation.assoc, b.allocation.assoc);
            EXPECT_EQ(a.allocation.power_w, b.allocation.power_w);
            EXPECT_EQ(a.allocation.active, b.allocation.active);
            EXPECT_DOUBLE_EQ(a.allocation.objective_w, b.allocation.objective_w);
        }
    }
}

TEST(Exact, ThreadCountDoesNotChangeResult) {
    Rng rng(11);
    RandomSpec spec;
    spec.max_orus = 5;
    spec.max_ues = 24;
    spec.max_levels = 4;
    spec.util_hi = 0.9;
    for (int i = 0; i < 10; ++i) {
        ProblemInstance inst = random_instance(rng, spec);
        SolveOptions one;
        one.threads = 1;
        SolveOptions four;
        four.threads = 4;
        SolveReport a = solve_exact(inst, one);
        SolveReport b = solve_exact(inst, four);
        ASSERT_EQ(a.status, b.status);
        if (a.status != SolveStatus::Infeasible) {
            EXPECT_EQ(a.allocation.assoc, b.allocation.assoc);
            EXPECT_EQ(a.allocation.bandwidth_hz, b.allocation.bandwidth_hz);
            EXPECT_DOUBLE_EQ(a.allocation.objective_w, b.allocation.objective_w);
        }
    }
}

TEST(Exact, HandoverSparingTieBreak) {
    // Two identical O-RUs, one UE: without a previous association the
    // lex-smallest active set {0} wins; with the UE previously on 1, the
    // tie breaks toward staying there.
    ProblemInstance inst = uniform_instance(1, 2, 1e6, 1e-8, 1e-12, {1.0});
    SolveReport fresh = solve_exact(inst);
    ASSERT_EQ(fresh.status, SolveStatus::ProvedOptimal);
    EXPECT_EQ(fresh.allocation.active, std::set<int>{0});

    SolveOptions opts;
    opts.prev_assoc = std::map<int, int>{{0, 1}};
    SolveReport sticky = solve_exact(inst, opts);
    ASSERT_EQ(sticky.status, SolveStatus::ProvedOptimal);
    EXPECT_EQ(sticky.allocation.active, std::set<int>{1});
    EXPECT_DOUBLE_EQ(sticky.allocation.objective_w, fresh.allocation.objective_w);
}

TEST(Greedy, SingleUeMatchesExact) {
    ProblemInstance inst = uniform_instance(1, 3, 1e6, 1e-8, 1e-12, {0.25, 1.0});
    SolveReport greedy = solve_greedy(inst);
    SolveReport exact = solve_exact(inst);
    ASSERT_EQ(greedy.status, SolveStatus::Heuristic);
    ASSERT_EQ(exact.status, SolveStatus::ProvedOptimal);
    EXPECT_DOUBLE_EQ(greedy.allocation.objective_w, exact.allocation.objective_w);
    EXPECT_EQ(greedy.allocation.active, exact.allocation.active);
}

// 128 uniform UEs with 64-per-node capacity: exactly two nodes come up.
TEST(Greedy, UniformLoadUsesMinimalNodes) {
    double snr = 1e4;
    double demand = demand_for_capacity(100e6, snr, 64);
    ProblemInstance inst = uniform_instance(128, 4, demand);
    SolveReport report = solve_greedy(inst);
    ASSERT_EQ(report.status, SolveStatus::Heuristic);
    EXPECT_EQ(report.allocation.active.size(), 2u);
    EXPECT_TRUE(check_feasible(inst, report.allocation).empty());
}

TEST(Greedy, RaisesPowerWhenNeeded) {
    // Low level carries one UE, top level carries both; a single O-RU must
    // end up raised rather than reported infeasible.
    double rho = 1e6;
    double snr_hi = 1e4;
    double snr_lo = snr_hi * 0.25;
    double demand = 0.6 * rho * std::log2(1.0 + snr_lo);
    ProblemInstance inst = uniform_instance(2, 1, demand, 1e-8, 1e-12, {0.25, 1.0}, rho);
    ASSERT_GT(2.0 * demand / std::log2(1.0 + snr_lo), rho);   // not both at low
    ASSERT_LE(2.0 * demand / std::log2(1.0 + snr_hi), rho);   // both at top
    SolveReport report = solve_greedy(inst);
    ASSERT_EQ(report.status, SolveStatus::Heuristic);
    EXPECT_TRUE(check_feasible(inst, report.allocation).empty());
    EXPECT_DOUBLE_EQ(report.allocation.power_w[0], 1.0);
}

TEST(Greedy, LowersPowerAfterPlacement) {
    ProblemInstance inst = uniform_instance(1, 1, 1e3, 1e-8, 1e-12, {0.25, 0.5, 1.0});
    SolveReport report = solve_greedy(inst);
    ASSERT_EQ(report.status, SolveStatus::Heuristic);
    EXPECT_DOUBLE_EQ(report.allocation.power_w[0], 0.25);
}

// ============================================================================
// PROPERTY SWEEPS
// ============================================================================

TEST(Properties, MonotoneInUesAndOrus) {
    Rng rng(23);
    RandomSpec spec;
    spec.max_orus = 3;
    spec.max_ues = 5;
    spec.max_levels = 2;
    spec.util_hi = 0.8;
    int checked = 0;
    for (int i = 0; i < 60; ++i) {
        ProblemInstance inst = random_instance(rng, spec);
        SolveReport base = solve_exact(inst);
        if (base.status == SolveStatus::Infeasible) continue;

        // Adding a UE never lowers the optimum.
        ProblemInstance more_ues = inst;
        ProblemInstance::Ue extra{static_cast<int>(inst.ues.size()),
                                  inst.ues.front().demand_bps};
        more_ues.ues.push_back(extra);
        more_ues.gain = Matrix(more_ues.ues.size(), more_ues.orus.size());
        for (std::size_t u = 0; u < inst.ues.size(); ++u) {
            for (std::size_t r = 0; r < inst.orus.size(); ++r) {
                more_ues.gain.at(u, r) = inst.gain.at(u, r);
            }
        }
        for (std::size_t r = 0; r < inst.orus.size(); ++r) {
            more_ues.gain.at(inst.ues.size(), r) = inst.gain.at(0, r);
        }
        SolveReport grown = solve_exact(more_ues);
        if (grown.status != SolveStatus::Infeasible) {
            EXPECT_GE(grown.allocation.objective_w,
                      base.allocation.objective_w - 1e-9);
        }

        // Adding an O-RU never raises the optimum.
        ProblemInstance more_orus = inst;
        ProblemInstance::Oru extra_oru = inst.orus.front();
        extra_oru.id = static_cast<int>(inst.orus.size());
        more_orus.orus.push_back(extra_oru);
        more_orus.gain = Matrix(inst.ues.size(), more_orus.orus.size());
        for (std::size_t u = 0; u < inst.ues.size(); ++u) {
            for (std::size_t r = 0; r < inst.orus.size(); ++r) {
                more_orus.gain.at(u, r) = inst.gain.at(u, r);
            }
            more_orus.gain.at(u, inst.orus.size()) = inst.gain.at(u, 0);
        }
        SolveReport richer = solve_exact(more_orus);
        ASSERT_NE(richer.status, SolveStatus::Infeasible);
        EXPECT_LE(richer.allocation.objective_w, base.allocation.objective_w + 1e-9);
        ++checked;
    }
    EXPECT_GE(checked, 20);
}

TEST(Properties, AdaptiveNeverWorseThanAllOn) {
    Rng rng(31);
    RandomSpec spec;
    spec.max_orus = 4;
    spec.max_ues = 8;
    spec.max_levels = 3;
    spec.util_hi = 0.9;
    int checked = 0;
    for (int i = 0; i < 40; ++i) {
        ProblemInstance inst = random_instance(rng, spec);
        SolveReport report = solve_exact(inst);
        if (report.status == SolveStatus::Infeasible) continue;

        // Same associations, every O-RU forced active (newly opened ones at
        // their lowest level).
        Allocation all_on = report.allocation;
        for (const auto& oru : inst.orus) {
            if (all_on.active.insert(oru.id).second) {
                all_on.power_w[oru.id] = oru.power_levels_w.front();
            }
        }
        all_on.objective_w = objective(inst, all_on);
        EXPECT_TRUE(check_feasible(inst, all_on).empty());
        EXPECT_LE(report.allocation.objective_w, all_on.objective_w);
        ++checked;
    }
    EXPECT_GE(checked, 15);
}

TEST(Properties, PowerFloorAndBoundsHold) {
    Rng rng(37);
    RandomSpec spec;
    spec.max_orus = 4;
    spec.max_ues = 10;
    spec.max_levels = 4;
    for (int i = 0; i < 60; ++i) {
        ProblemInstance inst = random_instance(rng, spec);
        for (SolverKind kind : {SolverKind::Exact, SolverKind::Greedy}) {
            SolveReport report = solve(inst, kind);
            if (report.status == SolveStatus::Infeasible) continue;
            for (const auto& oru : inst.orus) {
                double w = report.allocation.power_of(oru.id);
                if (report.allocation.active.count(oru.id) > 0) {
                    EXPECT_GE(w, inst.epsilon_w);
                    EXPECT_LE(w, oru.max_power_w);
                } else {
                    EXPECT_DOUBLE_EQ(w, 0.0);
                    for (const auto& [ue, target] : report.allocation.assoc) {
                        EXPECT_NE(target, oru.id);
                    }
                }
            }
        }
    }
}

}  // namespace
