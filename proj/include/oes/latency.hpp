#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "oes/common.hpp"

namespace oes {

// ============================================================================
// LOOP STAGES
// ============================================================================

// One entry per timed phase of the closed loop. RF environment manager and
// E2 nodes each appear twice because their connection and handover phases
// are measured separately.
enum class StageId {
    RfEnvConnect,
    E2nConnect,
    XAppMonitorCollect,
    MonitoringStoreScrape,
    VespaExport,
    VesCollect,
    DataRiverDispatch,
    RAppSolve,
    A1PolicyDelivery,
    XAppHandoverExec,
    RfEnvHandover,
    E2nReconfig,
};

inline const char* to_string(StageId s) {
    switch (s) {
        case StageId::RfEnvConnect: return "rf_env_connect";
        case StageId::E2nConnect: return "e2n_connect";
        case StageId::XAppMonitorCollect: return "xapp_monitor_collect";
        case StageId::MonitoringStoreScrape: return "monitoring_store_scrape";
        case StageId::VespaExport: return "vespa_export";
        case StageId::VesCollect: return "ves_collect";
        case StageId::DataRiverDispatch: return "data_river_dispatch";
        case StageId::RAppSolve: return "rapp_solve";
        case StageId::A1PolicyDelivery: return "a1_policy_delivery";
        case StageId::XAppHandoverExec: return "xapp_handover_exec";
        case StageId::RfEnvHandover: return "rf_env_handover";
        case StageId::E2nReconfig: return "e2n_reconfig";
    }
    return "?";
}

// ============================================================================
// LATENCY MODEL
// ============================================================================

// Deterministic stage-time model. Each stage carries calibration points
// (n_ues, seconds); evaluation interpolates linearly in log-log space, i.e.
// a power law c*n^k per segment, exact at every calibration point, with the
// end segments extended outward. One point means a constant stage time; no
// entry means the stage is free.
struct LatencyModel {
    std::map<StageId, std::vector<std::pair<double, double>>> calibration;
    double handover_per_ue_s = 2.02e-3;
    double handover_overhead_s = 0.0;
    // Optional relative jitter (sigma/mean) applied per stage when a run
    // enables it; acceptance runs keep it off.
    std::map<StageId, double> jitter_frac;
};

inline double stage_time(StageId stage, double n_ues, const LatencyModel& model) {
    auto it = model.calibration.find(stage);
    if (it == model.calibration.end() || it->second.empty()) return 0.0;
    const auto& pts = it->second;
    if (pts.size() == 1) return pts.front().second;

    double n = std::max(n_ues, 1.0);
    std::size_t hi = 1;
    while (hi + 1 < pts.size() && n > pts[hi].first) ++hi;
    const auto& [n0, t0] = pts[hi - 1];
    const auto& [n1, t1] = pts[hi];
    if (n == n0) return t0;  // exact at calibration points by construction
    if (n == n1) return t1;
    if (t0 <= 0.0 || t1 <= 0.0 || n0 <= 0.0 || n1 <= 0.0 || n0 >= n1) {
        fail(Error::Kind::InvalidModel,
             std::string("stage ") + to_string(stage) +
                 ": calibration points must be positive and ascending in n");
    }
    double k = std::log(t1 / t0) / std::log(n1 / n0);
    return t0 * std::pow(n / n0, k);
}

// Log-log least-squares fit t = c * n^k. Returned for diagnostics and
// reporting; the stage-time model itself interpolates instead, because a
// single power law cannot reproduce the measured points closely enough.
struct PowerLawFit {
    double c = 0.0;
    double k = 0.0;
    std::vector<double> relative_residuals;  // (fit - value) / value per point
};

inline PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) {
        fail(Error::Kind::InvalidModel, "fit_power_law needs at least two points");
    }
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& [n, t] : points) {
        if (n <= 0 || t <= 0) {
            fail(Error::Kind::InvalidModel, "fit_power_law needs positive samples");
        }
        sx += std::log(n);
        sy += std::log(t);
    }
    double mx = sx / static_cast<double>(points.size());
    double my = sy / static_cast<double>(points.size());
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [n, t] : points) {
        double dx = std::log(n) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(t) - my);
    }
    PowerLawFit fit;
    fit.k = sxy / sxx;
    fit.c = std::exp(my - fit.k * mx);
    for (const auto& [n, t] : points) {
        fit.relative_residuals.push_back((fit.c * std::pow(n, fit.k) - t) / t);
    }
    return fit;
}

// Stage times measured on the reference deployment (means at 16, 256 and
// 1024 UEs where reported).
inline LatencyModel paper_latency_model() {
    LatencyModel m;
    m.calibration[StageId::RfEnvConnect] = {{16, 0.0003}, {1024, 0.035}};
    m.calibration[StageId::E2nConnect] = {{16, 0.0003}, {1024, 0.035}};
    m.calibration[StageId::XAppMonitorCollect] = {{16, 0.000155}};
    m.calibration[StageId::MonitoringStoreScrape] = {{16, 1.83}, {1024, 215.246}};
    m.calibration[StageId::VespaExport] = {{16, 4.332}, {256, 168.0}, {1024, 672.0}};
    m.calibration[StageId::VesCollect] = {{16, 1.324148}, {1024, 155.747}};
    m.calibration[StageId::DataRiverDispatch] = {{16, 0.722}, {1024, 84.922}};
    m.calibration[StageId::RAppSolve] = {{16, 1.12632}, {256, 73.0}, {1024, 310.292}};
    m.calibration[StageId::RfEnvHandover] = {{16, 0.05}, {1024, 5.881}};
    m.calibration[StageId::E2nReconfig] = {{16, 0.018}, {1024, 2.117}};
    m.handover_per_ue_s = 2.02e-3;

    m.jitter_frac[StageId::MonitoringStoreScrape] = 0.2 / 1.83;
    m.jitter_frac[StageId::VespaExport] = 0.3 / 4.332;
    m.jitter_frac[StageId::VesCollect] = 0.05 / 1.324148;
    m.jitter_frac[StageId::DataRiverDispatch] = 0.1 / 0.722;
    m.jitter_frac[StageId::RAppSolve] = 0.39 / 1.12632;
    m.jitter_frac[StageId::RfEnvHandover] = 0.005 / 0.05;
    m.jitter_frac[StageId::E2nReconfig] = 0.002 / 0.018;
    return m;
}

}  // namespace oes
