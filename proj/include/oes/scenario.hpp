#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oes/channel.hpp"
#include "oes/common.hpp"
#include "oes/problem.hpp"
#include "oes/rng.hpp"

namespace oes {

struct Position3D {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;  // meters above ground, never negative
};

inline double distance3d(const Position3D& a, const Position3D& b) {
    double dx = a.x - b.x;
    double dy = a.y - b.y;
    double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

struct OruSite {
    int id = 0;
    Position3D position;
    double antenna_gain_db = 8.0;
    double max_power_w = 1.0;
    double max_bandwidth_hz = 100e6;
    double static_power_w = 11.4757;
    double amp_efficiency = 0.25;
    double carrier_freq_hz = 7.125e9;
    int numerology = 4;  // informational only, appears in no equation
};

struct UeTerminal {
    int id = 0;
    Position3D position;
    double rx_gain_db = 2.0;
    double demand_bps = 2e6;
};

// ============================================================================
// SCENARIO CONFIGURATION
// ============================================================================

// Soccer-stadium footprint: O-RUs on both sidelines at antenna height,
// UEs in the grandstand band around the field perimeter.
struct StadiumGeometry {
    double field_length_m = 105.0;
    double field_width_m = 68.0;
    double stand_min_m = 5.0;    // inner edge of the grandstand band
    double stand_max_m = 47.0;   // outer edge
    double slope_deg = 25.0;
    double step_height_m = 2.0;
    double step_at_m = 26.0;     // band distance where the mid-stand step sits
    double antenna_height_m = 10.0;
};

struct RadioParams {
    double carrier_base_hz = 7.125e9;  // 6 channels starting at 7125 MHz
    int num_channels = 6;
    double bandwidth_hz = 100e6;
    double antenna_gain_db = 8.0;
    double ue_gain_db = 2.0;
    double max_power_w = 1.0;
    int numerology = 4;
    double static_power_w = 11.4757;
    double amp_efficiency = 0.25;
};

enum class ChannelMode { Stadium, Uniform };

struct DemandProfile {
    double default_bps = 2e6;
    // Optional per-UE-count override, used by sweep runs to pin capacity.
    std::map<int, double> per_count_bps;
};

struct ScenarioConfig {
    int oru_count = 6;
    int ue_count = 16;
    StadiumGeometry geometry;
    RadioParams radio;
    ChannelModel channel;
    ChannelMode channel_mode = ChannelMode::Stadium;
    double uniform_gain_db = -80.0;  // only for ChannelMode::Uniform
    DemandProfile demand;
    double epsilon_w = 1e-3;
    // Power grid: {epsilon} plus these fractions of each O-RU's max power.
    std::vector<double> power_level_fracs = {0.25, 0.5, 0.75, 1.0};
    std::optional<std::vector<double>> power_levels_w;  // explicit override
    std::uint64_t seed = 42;
};

struct Scenario {
    int format_version = 1;
    ScenarioConfig config;
    std::vector<OruSite> orus;
    std::vector<UeTerminal> ues;
    Matrix shadow_db;  // per (UE, O-RU) pair, frozen for the scenario lifetime
};

// ============================================================================
// VALIDATION
// ============================================================================

inline void validate_config(const ScenarioConfig& cfg) {
    auto bad = [](const std::string& field) {
        fail(Error::Kind::InvalidScenario, "invalid scenario config: " + field);
    };
    if (cfg.oru_count <= 0) bad("oru_count must be positive");
    if (cfg.ue_count <= 0) bad("ue_count must be positive");
    if (cfg.geometry.field_length_m <= 0 || cfg.geometry.field_width_m <= 0)
        bad("field dimensions must be positive");
    if (cfg.geometry.stand_min_m < 0 || cfg.geometry.stand_max_m <= cfg.geometry.stand_min_m)
        bad("grandstand band must satisfy 0 <= stand_min < stand_max");
    if (cfg.geometry.antenna_height_m < 0) bad("antenna_height_m must be non-negative");
    if (cfg.radio.max_power_w <= 0) bad("radio.max_power_w must be positive");
    if (cfg.radio.bandwidth_hz <= 0) bad("radio.bandwidth_hz must be positive");
    if (cfg.radio.amp_efficiency <= 0 || cfg.radio.amp_efficiency > 1)
        bad("radio.amp_efficiency must be in (0, 1]");
    if (cfg.radio.static_power_w < 0) bad("radio.static_power_w must be non-negative");
    if (cfg.channel.shadowing_sigma_db < 0) bad("channel.shadowing_sigma_db must be non-negative");
    if (cfg.channel.noise_w <= 0) bad("channel.noise_w must be positive");
    if (cfg.channel.reference_distance_m <= 0) bad("channel.reference_distance_m must be positive");
    if (cfg.epsilon_w <= 0) bad("epsilon_w must be positive");
    if (cfg.demand.default_bps < 0) bad("demand.default_bps must be non-negative");
    if (cfg.power_levels_w && cfg.power_levels_w->empty()) bad("power_levels_w must be non-empty");
}

// ============================================================================
// GENERATION
// ============================================================================

// Euclidean distance from a ground point to the field rectangle [0,L]x[0,W].
inline double distance_to_field(const StadiumGeometry& g, double x, double y) {
    double dx = std::max({0.0, -x, x - g.field_length_m});
    double dy = std::max({0.0, -y, y - g.field_width_m});
    return std::sqrt(dx * dx + dy * dy);
}

inline double grandstand_elevation(const StadiumGeometry& g, double band_distance) {
    double rise = std::tan(g.slope_deg * M_PI / 180.0) * (band_distance - g.stand_min_m);
    if (band_distance >= g.step_at_m) {
        rise += g.step_height_m;
    }
    return rise;
}

// Deterministic per seed: the same seed yields a bit-identical scenario.
// Draw order is fixed (UE positions first, then the shadow matrix row-major).
inline Scenario generate_stadium(const ScenarioConfig& cfg, std::uint64_t seed) {
    validate_config(cfg);
    Scenario scn;
    scn.config = cfg;
    scn.config.seed = seed;
    const auto& g = cfg.geometry;

    // O-RUs equally spaced on both sidelines.
    int side_a = (cfg.oru_count + 1) / 2;
    int side_b = cfg.oru_count - side_a;
    for (int i = 0; i < cfg.oru_count; ++i) {
        OruSite oru;
        oru.id = i;
        bool on_a = i < side_a;
        int idx = on_a ? i : i - side_a;
        int n_side = on_a ? side_a : side_b;
        oru.position.x = g.field_length_m * (idx + 1) / (n_side + 1);
        oru.position.y = on_a ? 0.0 : g.field_width_m;
        oru.position.z = g.antenna_height_m;
        oru.antenna_gain_db = cfg.radio.antenna_gain_db;
        oru.max_power_w = cfg.radio.max_power_w;
        oru.max_bandwidth_hz = cfg.radio.bandwidth_hz;
        oru.static_power_w = cfg.radio.static_power_w;
        oru.amp_efficiency = cfg.radio.amp_efficiency;
        oru.carrier_freq_hz =
            cfg.radio.carrier_base_hz +
            cfg.radio.bandwidth_hz * (i % std::max(1, cfg.radio.num_channels));
        oru.numerology = cfg.radio.numerology;
        scn.orus.push_back(oru);
    }

    Rng rng(seed);

    // UEs uniformly in the grandstand band via rejection sampling.
    double xmin = -g.stand_max_m;
    double xmax = g.field_length_m + g.stand_max_m;
    double ymin = -g.stand_max_m;
    double ymax = g.field_width_m + g.stand_max_m;
    for (int i = 0; i < cfg.ue_count; ++i) {
        double x = 0.0;
        double y = 0.0;
        double d = 0.0;
        do {
            x = rng.uniform(xmin, xmax);
            y = rng.uniform(ymin, ymax);
            d = distance_to_field(g, x, y);
        } while (d < g.stand_min_m || d > g.stand_max_m);
        UeTerminal ue;
        ue.id = i;
        ue.position = {x, y, grandstand_elevation(g, d)};
        ue.rx_gain_db = cfg.radio.ue_gain_db;
        ue.demand_bps = cfg.demand.default_bps;
        scn.ues.push_back(ue);
    }

    if (cfg.channel_mode == ChannelMode::Stadium) {
        scn.shadow_db = Matrix(scn.ues.size(), scn.orus.size());
        for (std::size_t u = 0; u < scn.ues.size(); ++u) {
            for (std::size_t r = 0; r < scn.orus.size(); ++r) {
                scn.shadow_db.at(u, r) = rng.normal(0.0, cfg.channel.shadowing_sigma_db);
            }
        }
    }
    return scn;
}

// ============================================================================
// CHANNEL EVALUATION
// ============================================================================

inline double scenario_gain(const Scenario& scn, std::size_t ue_idx, std::size_t oru_idx) {
    if (scn.config.channel_mode == ChannelMode::Uniform) {
        return db_to_linear(scn.config.uniform_gain_db);
    }
    const UeTerminal& ue = scn.ues[ue_idx];
    const OruSite& oru = scn.orus[oru_idx];
    double d = distance3d(ue.position, oru.position);
    double pl = path_loss_db(d, oru.carrier_freq_hz, scn.config.channel,
                             scn.shadow_db.at(ue_idx, oru_idx));
    return gain_from_path_loss(oru.antenna_gain_db, ue.rx_gain_db, pl);
}

inline LinkState scenario_link_state(const Scenario& scn, std::size_t ue_idx,
                                     std::size_t oru_idx, double tx_power_w) {
    const UeTerminal& ue = scn.ues[ue_idx];
    const OruSite& oru = scn.orus[oru_idx];
    double pl = 0.0;
    if (scn.config.channel_mode == ChannelMode::Uniform) {
        pl = oru.antenna_gain_db + ue.rx_gain_db - scn.config.uniform_gain_db;
    } else {
        double d = distance3d(ue.position, oru.position);
        pl = path_loss_db(d, oru.carrier_freq_hz, scn.config.channel,
                          scn.shadow_db.at(ue_idx, oru_idx));
    }
    return make_link_state(tx_power_w, oru.antenna_gain_db, ue.rx_gain_db, pl,
                           scn.config.channel.noise_w);
}

// Per-O-RU power grid: {epsilon} plus the configured fractions of max power,
// clamped to [epsilon, max], sorted and deduplicated.
inline std::vector<double> power_grid_for(const ScenarioConfig& cfg, const OruSite& oru) {
    std::vector<double> levels;
    if (cfg.power_levels_w) {
        levels = *cfg.power_levels_w;
    } else {
        levels.push_back(cfg.epsilon_w);
        for (double f : cfg.power_level_fracs) {
            levels.push_back(f * oru.max_power_w);
        }
    }
    for (double& w : levels) {
        w = std::clamp(w, cfg.epsilon_w, oru.max_power_w);
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return levels;
}

// Demand per UE for an epoch of n_ues: the per-count schedule wins,
// otherwise each UE keeps its stored demand.
inline double epoch_demand_bps(const Scenario& scn, int n_ues, const UeTerminal& ue) {
    auto it = scn.config.demand.per_count_bps.find(n_ues);
    if (it != scn.config.demand.per_count_bps.end()) {
        return it->second;
    }
    return ue.demand_bps;
}

// Builds the optimizer input for one epoch over the first n_ues terminals.
inline ProblemInstance build_instance(const Scenario& scn, int n_ues) {
    if (n_ues <= 0 || static_cast<std::size_t>(n_ues) > scn.ues.size()) {
        fail(Error::Kind::InvalidScenario,
             "build_instance: n_ues out of range (scenario holds " +
                 fmt_i64(static_cast<long long>(scn.ues.size())) + " UEs)");
    }
    ProblemInstance inst;
    inst.noise_w = scn.config.channel.noise_w;
    inst.epsilon_w = scn.config.epsilon_w;
    for (int u = 0; u < n_ues; ++u) {
        inst.ues.push_back({scn.ues[u].id, epoch_demand_bps(scn, n_ues, scn.ues[u])});
    }
    for (const OruSite& oru : scn.orus) {
        ProblemInstance::Oru o;
        o.id = oru.id;
        o.max_power_w = oru.max_power_w;
        o.max_bandwidth_hz = oru.max_bandwidth_hz;
        o.static_power_w = oru.static_power_w;
        o.amp_efficiency = oru.amp_efficiency;
        o.power_levels_w = power_grid_for(scn.config, oru);
        inst.orus.push_back(o);
    }
    inst.gain = Matrix(n_ues, scn.orus.size());
    for (int u = 0; u < n_ues; ++u) {
        for (std::size_t r = 0; r < scn.orus.size(); ++r) {
            inst.gain.at(u, r) = scenario_gain(scn, u, r);
        }
    }
    inst.validate();
    return inst;
}

}  // namespace oes
