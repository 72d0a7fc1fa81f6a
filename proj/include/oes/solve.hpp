#pragma once

#include <string>

#include "oes/problem.hpp"
#include "oes/solver_brute.hpp"
#include "oes/solver_exact.hpp"
#include "oes/solver_greedy.hpp"

namespace oes {

enum class SolverKind { Exact, Greedy, Brute };

inline const char* to_string(SolverKind k) {
    switch (k) {
        case SolverKind::Exact: return "exact";
        case SolverKind::Greedy: return "greedy";
        case SolverKind::Brute: return "brute";
    }
    return "?";
}

inline SolverKind solver_kind_from_string(const std::string& name) {
    if (name == "exact") return SolverKind::Exact;
    if (name == "greedy") return SolverKind::Greedy;
    if (name == "brute") return SolverKind::Brute;
    fail(Error::Kind::Parse, "unknown solver '" + name + "' (expected exact|greedy|brute)");
}

inline SolveReport solve(const ProblemInstance& inst, SolverKind kind,
                         const SolveOptions& opts = {}) {
    switch (kind) {
        case SolverKind::Exact: return solve_exact(inst, opts);
        case SolverKind::Greedy: return solve_greedy(inst, opts);
        case SolverKind::Brute: return solve_bruteforce(inst);
    }
    fail(Error::Kind::Structural, "unreachable solver kind");
}

}  // namespace oes
