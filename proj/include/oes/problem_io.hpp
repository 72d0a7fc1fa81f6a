#pragma once

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <sstream>
#include <string>

#include "oes/io.hpp"
#include "oes/problem.hpp"

namespace oes {

// Problem instances and allocations travel as YAML. Emission is hand-rolled
// (deterministic layout, integers exact, doubles at 12 significant digits);
// parsing goes through yaml-cpp.

inline std::string instance_to_yaml(const ProblemInstance& inst) {
    std::ostringstream o;
    o << "format_version: 1\n";
    o << "noise_w: " << fmt_f64(inst.noise_w) << "\n";
    o << "epsilon_w: " << fmt_f64(inst.epsilon_w) << "\n";
    o << "ues:\n";
    for (const auto& ue : inst.ues) {
        o << "  - {id: " << ue.id << ", demand_bps: " << fmt_f64(ue.demand_bps) << "}\n";
    }
    if (inst.ues.empty()) o << "  []\n";
    o << "orus:\n";
    for (const auto& oru : inst.orus) {
        o << "  - {id: " << oru.id << ", max_power_w: " << fmt_f64(oru.max_power_w)
          << ", max_bandwidth_hz: " << fmt_f64(oru.max_bandwidth_hz)
          << ", static_power_w: " << fmt_f64(oru.static_power_w)
          << ", amp_efficiency: " << fmt_f64(oru.amp_efficiency) << ", power_levels_w: [";
        for (std::size_t l = 0; l < oru.power_levels_w.size(); ++l) {
            if (l > 0) o << ", ";
            o << fmt_f64(oru.power_levels_w[l]);
        }
        o << "]}\n";
    }
    o << "gain:\n";
    for (std::size_t u = 0; u < inst.gain.rows(); ++u) {
        o << "  - [";
        for (std::size_t r = 0; r < inst.gain.cols(); ++r) {
            if (r > 0) o << ", ";
            o << fmt_f64(inst.gain.at(u, r));
        }
        o << "]\n";
    }
    return o.str();
}

inline ProblemInstance instance_from_yaml(const std::string& text,
                                          const std::string& origin = "<string>") {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        fail(Error::Kind::Parse, origin + ": " + e.what());
    }
    if (!root.IsMap()) {
        fail(Error::Kind::Parse, origin + ": expected a YAML mapping");
    }
    try {
        ProblemInstance inst;
        inst.noise_w = root["noise_w"].as<double>();
        inst.epsilon_w = root["epsilon_w"].as<double>();
        for (const auto& node : root["ues"]) {
            inst.ues.push_back({node["id"].as<int>(), node["demand_bps"].as<double>()});
        }
        for (const auto& node : root["orus"]) {
            ProblemInstance::Oru oru;
            oru.id = node["id"].as<int>();
            oru.max_power_w = node["max_power_w"].as<double>();
            oru.max_bandwidth_hz = node["max_bandwidth_hz"].as<double>();
            oru.static_power_w = node["static_power_w"].as<double>();
            oru.amp_efficiency = node["amp_efficiency"].as<double>();
            for (const auto& level : node["power_levels_w"]) {
                oru.power_levels_w.push_back(level.as<double>());
            }
            inst.orus.push_back(oru);
        }
        const auto& gain = root["gain"];
        inst.gain = Matrix(inst.ues.size(), inst.orus.size());
        std::size_t u = 0;
        for (const auto& row : gain) {
            std::size_t r = 0;
            for (const auto& cell : row) {
                inst.gain.at(u, r) = cell.as<double>();
                ++r;
            }
            ++u;
        }
        inst.validate();
        return inst;
    } catch (const YAML::Exception& e) {
        fail(Error::Kind::Parse, origin + ": " + e.what());
    }
}

inline std::string allocation_to_yaml(const Allocation& alloc) {
    std::ostringstream o;
    o << "format_version: 1\n";
    o << "objective_w: " << fmt_f64(alloc.objective_w) << "\n";
    o << "active: [";
    bool first = true;
    for (int id : alloc.active) {
        if (!first) o << ", ";
        o << id;
        first = false;
    }
    o << "]\n";
    o << "power_w:\n";
    for (const auto& [id, w] : alloc.power_w) {
        o << "  " << id << ": " << fmt_f64(w) << "\n";
    }
    if (alloc.power_w.empty()) o << "  {}\n";
    o << "assoc:\n";
    for (const auto& [ue, oru] : alloc.assoc) {
        o << "  " << ue << ": " << oru << "\n";
    }
    if (alloc.assoc.empty()) o << "  {}\n";
    o << "bandwidth_hz:\n";
    for (const auto& [pair, y] : alloc.bandwidth_hz) {
        o << "  - {ue: " << pair.first << ", oru: " << pair.second
          << ", hz: " << fmt_f64(y) << "}\n";
    }
    if (alloc.bandwidth_hz.empty()) o << "  []\n";
    return o.str();
}

inline Allocation allocation_from_yaml(const std::string& text,
                                       const std::string& origin = "<string>") {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        fail(Error::Kind::Parse, origin + ": " + e.what());
    }
    try {
        Allocation alloc;
        alloc.objective_w = root["objective_w"].as<double>();
        for (const auto& id : root["active"]) {
            alloc.active.insert(id.as<int>());
        }
        if (root["power_w"].IsMap()) {
            for (const auto& kv : root["power_w"]) {
                alloc.power_w[kv.first.as<int>()] = kv.second.as<double>();
            }
        }
        if (root["assoc"].IsMap()) {
            for (const auto& kv : root["assoc"]) {
                alloc.assoc[kv.first.as<int>()] = kv.second.as<int>();
            }
        }
        for (const auto& node : root["bandwidth_hz"]) {
            alloc.bandwidth_hz[{node["ue"].as<int>(), node["oru"].as<int>()}] =
                node["hz"].as<double>();
        }
        return alloc;
    } catch (const YAML::Exception& e) {
        fail(Error::Kind::Parse, origin + ": " + e.what());
    }
}

inline std::string solve_report_to_yaml(const SolveReport& report) {
    std::ostringstream o;
    o << "status: " << to_string(report.status) << "\n";
    o << "nodes_explored: " << report.nodes_explored << "\n";
    o << "wall_time_s: " << fmt_f64(report.wall_time_s) << "\n";
    if (report.status == SolveStatus::Infeasible) {
        o << "reason: \"" << report.infeasible_reason << "\"\n";
    } else {
        o << "objective_w: " << fmt_f64(report.allocation.objective_w) << "\n";
        o << "active_count: " << report.allocation.active.size() << "\n";
    }
    return o.str();
}

inline void save_instance(const ProblemInstance& inst, const std::filesystem::path& path) {
    write_text_file(path, instance_to_yaml(inst));
}

inline ProblemInstance load_instance(const std::filesystem::path& path) {
    return instance_from_yaml(read_text_file(path), path.string());
}

inline void save_allocation(const Allocation& alloc, const std::filesystem::path& path) {
    write_text_file(path, allocation_to_yaml(alloc));
}

inline Allocation load_allocation(const std::filesystem::path& path) {
    return allocation_from_yaml(read_text_file(path), path.string());
}

}  // namespace oes
