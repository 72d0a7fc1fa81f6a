#pragma once

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <sstream>
#include <string>

#include "oes/io.hpp"
#include "oes/scenario.hpp"

namespace oes {

inline std::string scenario_to_yaml(const Scenario& scn) {
    const ScenarioConfig& cfg = scn.config;
    std::ostringstream o;
    o << "format_version: " << scn.format_version << "\n";
    o << "seed: " << cfg.seed << "\n";
    o << "counts: {orus: " << cfg.oru_count << ", ues: " << cfg.ue_count << "}\n";
    o << "geometry:\n";
    o << "  field_length_m: " << fmt_f64(cfg.geometry.field_length_m) << "\n";
    o << "  field_width_m: " << fmt_f64(cfg.geometry.field_width_m) << "\n";
    o << "  stand_min_m: " << fmt_f64(cfg.geometry.stand_min_m) << "\n";
    o << "  stand_max_m: " << fmt_f64(cfg.geometry.stand_max_m) << "\n";
    o << "  slope_deg: " << fmt_f64(cfg.geometry.slope_deg) << "\n";
    o << "  step_height_m: " << fmt_f64(cfg.geometry.step_height_m) << "\n";
    o << "  step_at_m: " << fmt_f64(cfg.geometry.step_at_m) << "\n";
    o << "  antenna_height_m: " << fmt_f64(cfg.geometry.antenna_height_m) << "\n";
    o << "radio:\n";
    o << "  carrier_base_hz: " << fmt_f64(cfg.radio.carrier_base_hz) << "\n";
    o << "  num_channels: " << cfg.radio.num_channels << "\n";
    o << "  bandwidth_hz: " << fmt_f64(cfg.radio.bandwidth_hz) << "\n";
    o << "  antenna_gain_db: " << fmt_f64(cfg.radio.antenna_gain_db) << "\n";
    o << "  ue_gain_db: " << fmt_f64(cfg.radio.ue_gain_db) << "\n";
    o << "  max_power_w: " << fmt_f64(cfg.radio.max_power_w) << "\n";
    o << "  numerology: " << cfg.radio.numerology << "\n";
    o << "  static_power_w: " << fmt_f64(cfg.radio.static_power_w) << "\n";
    o << "  amp_efficiency: " << fmt_f64(cfg.radio.amp_efficiency) << "\n";
    o << "channel:\n";
    o << "  mode: " << (cfg.channel_mode == ChannelMode::Uniform ? "uniform" : "stadium")
      << "\n";
    o << "  path_loss_exponent: " << fmt_f64(cfg.channel.path_loss_exponent) << "\n";
    o << "  reference_distance_m: " << fmt_f64(cfg.channel.reference_distance_m) << "\n";
    o << "  env_loss_factor: " << fmt_f64(cfg.channel.env_loss_factor) << "\n";
    o << "  shadowing_sigma_db: " << fmt_f64(cfg.channel.shadowing_sigma_db) << "\n";
    o << "  noise_w: " << fmt_f64(cfg.channel.noise_w) << "\n";
    o << "  uniform_gain_db: " << fmt_f64(cfg.uniform_gain_db) << "\n";
    o << "power:\n";
    o << "  epsilon_w: " << fmt_f64(cfg.epsilon_w) << "\n";
    if (cfg.power_levels_w) {
        o << "  levels_w: [";
        for (std::size_t i = 0; i < cfg.power_levels_w->size(); ++i) {
            if (i > 0) o << ", ";
            o << fmt_f64((*cfg.power_levels_w)[i]);
        }
        o << "]\n";
    } else {
        o << "  level_fracs: [";
        for (std::size_t i = 0; i < cfg.power_level_fracs.size(); ++i) {
            if (i > 0) o << ", ";
            o << fmt_f64(cfg.power_level_fracs[i]);
        }
        o << "]\n";
    }
    o << "demand:\n";
    o << "  default_bps: " << fmt_f64(cfg.demand.default_bps) << "\n";
    if (!cfg.demand.per_count_bps.empty()) {
        o << "  per_count_bps:\n";
        for (const auto& [count, bps] : cfg.demand.per_count_bps) {
            o << "    " << count << ": " << fmt_f64(bps) << "\n";
        }
    }
    o << "orus:\n";
    for (const auto& oru : scn.orus) {
        o << "  - {id: " << oru.id << ", x: " << fmt_f64(oru.position.x)
          << ", y: " << fmt_f64(oru.position.y) << ", z: " << fmt_f64(oru.position.z)
          << ", carrier_freq_hz: " << fmt_f64(oru.carrier_freq_hz) << "}\n";
    }
    o << "ues:\n";
    for (const auto& ue : scn.ues) {
        o << "  - {id: " << ue.id << ", x: " << fmt_f64(ue.position.x)
          << ", y: " << fmt_f64(ue.position.y) << ", z: " << fmt_f64(ue.position.z)
          << ", demand_bps: " << fmt_f64(ue.demand_bps) << "}\n";
    }
    if (!scn.shadow_db.empty()) {
        o << "shadow_db:\n";
        for (std::size_t u = 0; u < scn.shadow_db.rows(); ++u) {
            o << "  - [";
            for (std::size_t r = 0; r < scn.shadow_db.cols(); ++r) {
                if (r > 0) o << ", ";
                o << fmt_f64(scn.shadow_db.at(u, r));
            }
            o << "]\n";
        }
    }
    return o.str();
}

inline Scenario scenario_from_yaml(const std::string& text,
                                   const std::string& origin = "<string>") {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        fail(Error::Kind::Parse, origin + ": " + e.what());
    }
    if (!root.IsMap() || !root["format_version"]) {
        fail(Error::Kind::Parse, origin + ": not a scenario file (format_version missing)");
    }
    try {
        Scenario scn;
        scn.format_version = root["format_version"].as<int>();
        if (scn.format_version != 1) {
            fail(Error::Kind::Parse, origin + ": unsupported format_version " +
                                         fmt_i64(scn.format_version));
        }
        ScenarioConfig& cfg = scn.config;
        cfg.seed = root["seed"].as<std::uint64_t>();
        cfg.oru_count = root["counts"]["orus"].as<int>();
        cfg.ue_count = root["counts"]["ues"].as<int>();

        const auto& g = root["geometry"];
        cfg.geometry.field_length_m = g["field_length_m"].as<double>();
        cfg.geometry.field_width_m = g["field_width_m"].as<double>();
        cfg.geometry.stand_min_m = g["stand_min_m"].as<double>();
        cfg.geometry.stand_max_m = g["stand_max_m"].as<double>();
        cfg.geometry.slope_deg = g["slope_deg"].as<double>();
        cfg.geometry.step_height_m = g["step_height_m"].as<double>();
        cfg.geometry.step_at_m = g["step_at_m"].as<double>();
        cfg.geometry.antenna_height_m = g["antenna_height_m"].as<double>();

        const auto& r = root["radio"];
        cfg.radio.carrier_base_hz = r["carrier_base_hz"].as<double>();
        cfg.radio.num_channels = r["num_channels"].as<int>();
        cfg.radio.bandwidth_hz = r["bandwidth_hz"].as<double>();
        cfg.radio.antenna_gain_db = r["antenna_gain_db"].as<double>();
        cfg.radio.ue_gain_db = r["ue_gain_db"].as<double>();
        cfg.radio.max_power_w = r["max_power_w"].as<double>();
        cfg.radio.numerology = r["numerology"].as<int>();
        cfg.radio.static_power_w = r["static_power_w"].as<double>();
        cfg.radio.amp_efficiency = r["amp_efficiency"].as<double>();

        const auto& c = root["channel"];
        cfg.channel_mode =
            c["mode"].as<std::string>() == "uniform" ? ChannelMode::Uniform
                                                     : ChannelMode::Stadium;
        cfg.channel.path_loss_exponent = c["path_loss_exponent"].as<double>();
        cfg.channel.reference_distance_m = c["reference_distance_m"].as<double>();
        cfg.channel.env_loss_factor = c["env_loss_factor"].as<double>();
        cfg.channel.shadowing_sigma_db = c["shadowing_sigma_db"].as<double>();
        cfg.channel.noise_w = c["noise_w"].as<double>();
        cfg.uniform_gain_db = c["uniform_gain_db"].as<double>();

        const auto& p = root["power"];
        cfg.epsilon_w = p["epsilon_w"].as<double>();
        if (p["levels_w"]) {
            std::vector<double> levels;
            for (const auto& l : p["levels_w"]) levels.push_back(l.as<double>());
            cfg.power_levels_w = levels;
        } else {
            cfg.power_level_fracs.clear();
            for (const auto& f : p["level_fracs"]) {
                cfg.power_level_fracs.push_back(f.as<double>());
            }
        }

        const auto& d = root["demand"];
        cfg.demand.default_bps = d["default_bps"].as<double>();
        if (d["per_count_bps"]) {
            for (const auto& kv : d["per_count_bps"]) {
                cfg.demand.per_count_bps[kv.first.as<int>()] = kv.second.as<double>();
            }
        }

        for (const auto& node : root["orus"]) {
            OruSite oru;
            oru.id = node["id"].as<int>();
            oru.position = {node["x"].as<double>(), node["y"].as<double>(),
                            node["z"].as<double>()};
            oru.antenna_gain_db = cfg.radio.antenna_gain_db;
            oru.max_power_w = cfg.radio.max_power_w;
            oru.max_bandwidth_hz = cfg.radio.bandwidth_hz;
            oru.static_power_w = cfg.radio.static_power_w;
            oru.amp_efficiency = cfg.radio.amp_efficiency;
            oru.carrier_freq_hz = node["carrier_freq_hz"].as<double>();
            oru.numerology = cfg.radio.numerology;
            scn.orus.push_back(oru);
        }
        for (const auto& node : root["ues"]) {
            UeTerminal ue;
            ue.id = node["id"].as<int>();
            ue.position = {node["x"].as<double>(), node["y"].as<double>(),
                           node["z"].as<double>()};
            ue.rx_gain_db = cfg.radio.ue_gain_db;
            ue.demand_bps = node["demand_bps"].as<double>();
            scn.ues.push_back(ue);
        }
        if (root["shadow_db"]) {
            scn.shadow_db = Matrix(scn.ues.size(), scn.orus.size());
            std::size_t u = 0;
            for (const auto& row : root["shadow_db"]) {
                std::size_t rr = 0;
                for (const auto& cell : row) {
                    scn.shadow_db.at(u, rr) = cell.as<double>();
                    ++rr;
                }
                ++u;
            }
        } else if (cfg.channel_mode == ChannelMode::Stadium) {
            fail(Error::Kind::Parse,
                 origin + ": stadium-mode scenario is missing its shadow_db matrix");
        }
        if (scn.orus.empty() || scn.ues.empty()) {
            fail(Error::Kind::InvalidScenario, origin + ": scenario has no O-RUs or UEs");
        }
        return scn;
    } catch (const YAML::Exception& e) {
        fail(Error::Kind::Parse, origin + ": " + e.what());
    }
}

inline void save_scenario(const Scenario& scn, const std::filesystem::path& path) {
    write_text_file(path, scenario_to_yaml(scn));
}

inline Scenario load_scenario(const std::filesystem::path& path) {
    return scenario_from_yaml(read_text_file(path), path.string());
}

}  // namespace oes
