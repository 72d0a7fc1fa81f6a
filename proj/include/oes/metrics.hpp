#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "oes/common.hpp"
#include "oes/control_loop.hpp"
#include "oes/io.hpp"

namespace oes {

// ============================================================================
// ACCOUNTING
// ============================================================================

// Energy series over a run. total_w is always the optimizer objective of the
// epoch's allocation; metrics never recompute power on their own.
struct EnergyAccount {
    struct Entry {
        int epoch = 0;
        int n_ues = 0;
        double total_w = 0.0;
        int active_e2n = 0;
        double per_ue_w = 0.0;
    };
    std::vector<Entry> epochs;
    double baseline_allon_w = 0.0;  // every O-RU active at its top power level
};

inline double savings_vs_allon(const EnergyAccount& account, std::size_t epoch) {
    if (account.baseline_allon_w <= 0.0) {
        fail(Error::Kind::UndefinedMetric, "savings_vs_allon: baseline must be positive");
    }
    if (epoch >= account.epochs.size()) {
        fail(Error::Kind::Structural, "savings_vs_allon: epoch index out of range");
    }
    return 1.0 - account.epochs[epoch].total_w / account.baseline_allon_w;
}

// Undefined at zero UEs by design; forcing a value would hide bugs upstream.
inline double per_ue_energy(double total_w, int n_ues) {
    if (n_ues < 1) {
        fail(Error::Kind::UndefinedMetric, "per-UE energy is undefined for zero UEs");
    }
    return total_w / static_cast<double>(n_ues);
}

struct EpochMetrics {
    int epoch = 0;
    int n_ues = 0;
    double total_w = 0.0;
    double per_ue_w = 0.0;
    int active_e2n = 0;
    int inactive_e2n = 0;
    double savings = 0.0;
    int handover_count = 0;
    double handover_total_s = 0.0;
    double handover_per_ue_s = 0.0;
    double e2e_total_s = 0.0;
    std::map<Component, double> e2e_breakdown;
    double solver_wall_s = 0.0;
    double solver_model_s = 0.0;
    bool reoptimized = false;
    bool aborted = false;
};

struct RunSummary {
    std::string scenario_path;
    std::string solver;
    std::uint64_t seed = 0;
    double baseline_allon_w = 0.0;
    std::vector<EpochMetrics> epochs;
    std::vector<LoopTrace> traces;
};

inline EnergyAccount energy_account(const RunSummary& summary) {
    EnergyAccount account;
    account.baseline_allon_w = summary.baseline_allon_w;
    for (const auto& e : summary.epochs) {
        account.epochs.push_back({e.epoch, e.n_ues, e.total_w, e.active_e2n, e.per_ue_w});
    }
    return account;
}

// ============================================================================
// REPORT EMISSION
// ============================================================================

inline const std::vector<Component>& all_components() {
    static const std::vector<Component> kAll = {
        Component::RfEnvManager,  Component::E2Node,       Component::XAppMonitoring,
        Component::MonitoringStore, Component::VespaAgent, Component::VesCollector,
        Component::DataRiver,     Component::RAppEnergySavings,
        Component::A1Mediator,    Component::XAppHandover,
    };
    return kAll;
}

// Writes the per-epoch CSV series, a structured summary document, the raw
// stage trace, and plot-ready per-figure data files. Byte-stable for fixed
// inputs. Returns the list of files written.
inline std::vector<std::filesystem::path> emit_report(const RunSummary& summary,
                                                      const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::filesystem::path& rel, const std::string& content) {
        std::filesystem::path path = dir / rel;
        write_text_file(path, content);
        written.push_back(path);
    };

    {
        CsvBuilder csv({"epoch", "n_ues", "total_watts", "per_ue_watts", "active_e2n",
                        "inactive_e2n", "baseline_allon_watts", "savings_vs_allon"});
        for (const auto& e : summary.epochs) {
            csv.row({fmt_i64(e.epoch), fmt_i64(e.n_ues), fmt_f64(e.total_w),
                     fmt_f64(e.per_ue_w), fmt_i64(e.active_e2n), fmt_i64(e.inactive_e2n),
                     fmt_f64(summary.baseline_allon_w), fmt_f64(e.savings)});
        }
        emit("energy.csv", csv.str());
    }

    {
        CsvBuilder csv({"epoch", "n_ues", "handovers", "total_s", "per_ue_s"});
        for (const auto& e : summary.epochs) {
            csv.row({fmt_i64(e.epoch), fmt_i64(e.n_ues), fmt_i64(e.handover_count),
                     fmt_f64(e.handover_total_s), fmt_f64(e.handover_per_ue_s)});
        }
        emit("handover.csv", csv.str());
    }

    {
        std::vector<std::string> header = {"epoch", "n_ues", "total_s"};
        for (Component c : all_components()) header.push_back(to_string(c));
        CsvBuilder csv(header);
        for (const auto& e : summary.epochs) {
            std::vector<std::string> row = {fmt_i64(e.epoch), fmt_i64(e.n_ues),
                                            fmt_f64(e.e2e_total_s)};
            for (Component c : all_components()) {
                auto it = e.e2e_breakdown.find(c);
                row.push_back(fmt_f64(it == e.e2e_breakdown.end() ? 0.0 : it->second));
            }
            csv.row(row);
        }
        emit("e2e.csv", csv.str());
    }

    {
        CsvBuilder csv({"epoch", "n_ues", "solver_wall_s", "solver_model_s", "reoptimized",
                        "aborted"});
        for (const auto& e : summary.epochs) {
            csv.row({fmt_i64(e.epoch), fmt_i64(e.n_ues), fmt_f64(e.solver_wall_s),
                     fmt_f64(e.solver_model_s), e.reoptimized ? "1" : "0",
                     e.aborted ? "1" : "0"});
        }
        emit("solver.csv", csv.str());
    }

    {
        CsvBuilder csv({"epoch", "component", "stage", "n_ues", "start_s", "end_s"});
        for (const auto& trace : summary.traces) {
            for (const auto& s : trace.stages) {
                csv.row({fmt_i64(trace.epoch), to_string(s.component), to_string(s.stage),
                         fmt_i64(s.n_ues), fmt_f64(s.start_s), fmt_f64(s.end_s)});
            }
        }
        emit("trace.csv", csv.str());
    }

    {
        std::ostringstream o;
        o << "scenario: \"" << summary.scenario_path << "\"\n";
        o << "solver: " << summary.solver << "\n";
        o << "seed: " << summary.seed << "\n";
        o << "epochs: " << summary.epochs.size() << "\n";
        o << "baseline_allon_watts: " << fmt_f64(summary.baseline_allon_w) << "\n";
        if (!summary.epochs.empty()) {
            const auto& first = summary.epochs.front();
            const auto& last = summary.epochs.back();
            o << "first_epoch: {n_ues: " << first.n_ues
              << ", total_watts: " << fmt_f64(first.total_w)
              << ", per_ue_watts: " << fmt_f64(first.per_ue_w)
              << ", active_e2n: " << first.active_e2n << "}\n";
            o << "last_epoch: {n_ues: " << last.n_ues
              << ", total_watts: " << fmt_f64(last.total_w)
              << ", per_ue_watts: " << fmt_f64(last.per_ue_w)
              << ", active_e2n: " << last.active_e2n << "}\n";
            double wall = 0.0;
            for (const auto& e : summary.epochs) wall += e.solver_wall_s;
            o << "solver_wall_total_s: " << fmt_f64(wall) << "\n";
        }
        emit("summary.yaml", o.str());
    }

    // Plot-ready data mirroring the reported figures.
    {
        CsvBuilder csv({"n_ues", "total_watts", "per_ue_watts", "active_e2n",
                        "inactive_e2n"});
        for (const auto& e : summary.epochs) {
            csv.row({fmt_i64(e.n_ues), fmt_f64(e.total_w), fmt_f64(e.per_ue_w),
                     fmt_i64(e.active_e2n), fmt_i64(e.inactive_e2n)});
        }
        emit(std::filesystem::path("plotdata") / "energy_vs_ues.csv", csv.str());
    }
    {
        CsvBuilder csv({"n_ues", "handovers", "total_ms", "per_ue_ms"});
        for (const auto& e : summary.epochs) {
            csv.row({fmt_i64(e.n_ues), fmt_i64(e.handover_count),
                     fmt_f64(e.handover_total_s * 1e3), fmt_f64(e.handover_per_ue_s * 1e3)});
        }
        emit(std::filesystem::path("plotdata") / "handover_times.csv", csv.str());
    }
    {
        CsvBuilder csv({"n_ues", "component", "duration_s"});
        for (const auto& e : summary.epochs) {
            for (Component c : all_components()) {
                auto it = e.e2e_breakdown.find(c);
                csv.row({fmt_i64(e.n_ues), to_string(c),
                         fmt_f64(it == e.e2e_breakdown.end() ? 0.0 : it->second)});
            }
        }
        emit(std::filesystem::path("plotdata") / "stage_delays_stacked.csv", csv.str());
    }

    return written;
}

}  // namespace oes
