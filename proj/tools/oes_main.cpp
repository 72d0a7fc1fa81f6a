// Command-line front end: generate scenarios, solve single instances, and
// run multi-epoch closed-loop simulations.
//
// Exit codes: 0 success, 1 usage error, 2 input parse error, 3 infeasible
// instance, 4 I/O error, 5 invalid scenario/config.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "oes/oes.hpp"

namespace {

int exit_code_for(const oes::Error& e) {
    switch (e.kind()) {
        case oes::Error::Kind::Parse: return 2;
        case oes::Error::Kind::Infeasible:
        case oes::Error::Kind::InfeasibleLink: return 3;
        case oes::Error::Kind::Io: return 4;
        default: return 5;
    }
}

bool log_enabled() {
    const char* v = std::getenv("OES_LOG");
    return v != nullptr && std::string(v) != "0" && std::string(v) != "off";
}

void log_line(const std::string& msg) {
    if (log_enabled()) std::cerr << "[oes] " << msg << "\n";
}

std::vector<int> parse_schedule(const std::string& csv) {
    std::vector<int> out;
    std::string cur;
    for (char ch : csv) {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(std::stoi(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(std::stoi(cur));
    if (out.empty()) {
        oes::fail(oes::Error::Kind::Parse, "empty --ue-schedule");
    }
    return out;
}

// Scenario-generation inputs can come from a config file (same schema as a
// scenario file minus the realized entities); flags win over the file.
oes::ScenarioConfig load_generate_config(const std::string& config_path) {
    if (config_path.empty()) return {};
    // A scenario file doubles as a config: regeneration reuses its settings.
    oes::Scenario scn = oes::load_scenario(config_path);
    return scn.config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-aware O-RAN load-balancing simulator"};
    app.require_subcommand(1);

    // ---- generate ----
    auto* gen = app.add_subcommand("generate", "Generate a stadium scenario file");
    std::string gen_config;
    std::string gen_out = "scenario.yaml";
    std::uint64_t gen_seed = 42;
    int gen_orus = -1;
    int gen_ues = -1;
    double gen_demand = -1.0;
    gen->add_option("--config", gen_config, "Existing scenario/config file to start from");
    gen->add_option("--out", gen_out, "Output scenario path");
    gen->add_option("--seed", gen_seed, "Generation seed");
    gen->add_option("--orus", gen_orus, "Number of O-RUs");
    gen->add_option("--ues", gen_ues, "Number of UEs");
    gen->add_option("--demand-bps", gen_demand, "Per-UE demand in bits/s");

    // ---- solve ----
    auto* slv = app.add_subcommand("solve", "Solve one problem instance file");
    std::string slv_instance;
    std::string slv_solver = "exact";
    std::string slv_out = "allocation.yaml";
    int slv_threads = 1;
    slv->add_option("--instance", slv_instance, "Instance file")->required();
    slv->add_option("--solver", slv_solver, "exact|greedy|brute");
    slv->add_option("--out", slv_out, "Output allocation path");
    slv->add_option("--solver-threads", slv_threads, "Worker threads for cost evaluation");

    // ---- run ----
    auto* run = app.add_subcommand("run", "Run the closed-loop simulation");
    std::string run_scenario;
    std::string run_solver = "exact";
    std::string run_out = "out";
    std::string run_schedule;
    std::string run_jitter = "off";
    std::uint64_t run_seed = 42;
    int run_epochs = 1;
    int run_threads = 1;
    run->add_option("--scenario", run_scenario, "Scenario file")->required();
    run->add_option("--epochs", run_epochs, "Number of epochs (without a schedule)");
    run->add_option("--ue-schedule", run_schedule, "Comma-separated UE counts per epoch");
    run->add_option("--solver", run_solver, "exact|greedy|brute");
    run->add_option("--out", run_out, "Output directory");
    run->add_option("--seed", run_seed, "Run seed (jitter stream)");
    run->add_option("--jitter", run_jitter, "on|off stochastic stage times");
    run->add_option("--solver-threads", run_threads, "Worker threads for cost evaluation");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            oes::ScenarioConfig cfg = load_generate_config(gen_config);
            if (gen_orus >= 0) cfg.oru_count = gen_orus;
            if (gen_ues >= 0) cfg.ue_count = gen_ues;
            if (gen_demand >= 0) cfg.demand.default_bps = gen_demand;
            log_line("generating scenario: " + std::to_string(cfg.oru_count) + " O-RUs, " +
                     std::to_string(cfg.ue_count) + " UEs, seed " + std::to_string(gen_seed));
            oes::Scenario scn = oes::generate_stadium(cfg, gen_seed);
            oes::save_scenario(scn, gen_out);
            std::cout << "scenario: " << gen_out << "\n";
            return 0;
        }

        if (slv->parsed()) {
            oes::ProblemInstance inst = oes::load_instance(slv_instance);
            oes::SolverKind kind = oes::solver_kind_from_string(slv_solver);
            oes::SolveOptions opts;
            opts.threads = slv_threads;
            log_line("solving " + slv_instance + " with " + slv_solver);
            oes::SolveReport report = oes::solve(inst, kind, opts);
            std::cout << oes::solve_report_to_yaml(report);
            if (report.status == oes::SolveStatus::Infeasible) {
                return 3;
            }
            auto violations = oes::check_feasible(inst, report.allocation);
            if (!violations.empty()) {
                std::cerr << "internal error: solver returned an infeasible allocation\n";
                return 5;
            }
            oes::save_allocation(report.allocation, slv_out);
            std::cout << "allocation: " << slv_out << "\n";
            return 0;
        }

        if (run->parsed()) {
            oes::Scenario scn = oes::load_scenario(run_scenario);
            oes::RunConfig cfg;
            cfg.solver = oes::solver_kind_from_string(run_solver);
            cfg.solver_threads = run_threads;
            cfg.epochs = run_epochs;
            cfg.seed = run_seed;
            if (run_jitter == "on") {
                cfg.jitter = true;
            } else if (run_jitter != "off") {
                oes::fail(oes::Error::Kind::Parse, "--jitter expects on|off");
            }
            if (!run_schedule.empty()) {
                cfg.ue_schedule = parse_schedule(run_schedule);
            }
            log_line("running " + std::to_string(std::max<std::size_t>(
                                      cfg.ue_schedule.size(),
                                      static_cast<std::size_t>(cfg.epochs))) +
                     " epochs with " + run_solver);
            oes::RunSummary summary = oes::run_simulation(scn, cfg, run_scenario);
            auto files = oes::emit_report(summary, run_out);
            for (const auto& f : files) {
                std::cout << "wrote: " << f.string() << "\n";
            }
            return 0;
        }
    } catch (const oes::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    }
    return 1;
}
