#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "era/scenario.hpp"

namespace fs = std::filesystem;
using namespace era;

namespace {

struct CliConfig {
    std::string scenario_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> algos;
    std::string format = "csv";
    std::string predictor = "spreading";
    bool verbose = false;
};

std::ofstream open_out(const CliConfig& cli, const std::string& file) {
    fs::create_directories(cli.out_dir);
    std::ofstream out(fs::path(cli.out_dir) / file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file + " in " + cli.out_dir);
    return out;
}

std::vector<AlgorithmConfig> select_algorithms(const Scenario& scenario,
                                               const std::vector<std::string>& names) {
    if (names.empty()) return scenario.algorithms;
    std::vector<AlgorithmConfig> out;
    for (const std::string& n : names) {
        bool found = false;
        for (const AlgorithmConfig& a : scenario.algorithms)
            if (a.label() == n) {
                out.push_back(a);
                found = true;
            }
        if (!found) throw std::invalid_argument("scenario has no algorithm named " + n);
    }
    return out;
}

nlohmann::json metrics_json(const MetricsReport& m) {
    nlohmann::json j;
    j["requestedValue"] = m.requested_value.str();
    j["welfare"] = m.accepted_value.str();
    j["revenue"] = m.revenue.str();
    j["latePct"] = m.late_pct;
    j["utilization"] = m.utilization;
    j["acceptanceRate"] = m.acceptance_rate;
    j["brokenGuarantees"] = m.broken_guarantees;
    j["submitted"] = m.submitted;
    j["accepted"] = m.accepted;
    j["earlyStarts"] = m.early_starts;
    for (const auto& [cls, cm] : m.per_class) {
        nlohmann::json c;
        c["requestedValue"] = cm.requested_value.str();
        c["acceptedValue"] = cm.accepted_value.str();
        c["submitted"] = cm.submitted;
        c["accepted"] = cm.accepted;
        c["late"] = cm.late;
        j["perClass"][cls] = std::move(c);
    }
    return j;
}

int cmd_simulate(const CliConfig& cli) {
    Scenario scenario = load_scenario(cli.scenario_path);
    WorkloadTrace workload = build_workload(scenario, cli.seed);
    auto algos = select_algorithms(scenario, cli.algos);
    if (algos.size() != 1)
        throw std::invalid_argument("simulate needs exactly one algorithm (use --algo)");

    SimulationConfig cfg = build_sim_config(scenario, algos.front(), workload);
    if (cli.seed) cfg.seed = *cli.seed;
    SimulationResult result = run_simulation(cfg);

    {
        auto out = open_out(cli, "events.log");
        for (const std::string& line : result.event_log) out << line << "\n";
    }
    {
        auto out = open_out(cli, "metrics.csv");
        write_metrics_csv(out, {{algos.front().label(), result.metrics, std::nullopt}});
    }
    if (cli.format == "json") {
        auto out = open_out(cli, "metrics.json");
        out << metrics_json(result.metrics).dump(2) << "\n";
    }
    std::cout << scenario.name << " " << algos.front().label() << ": welfare "
              << result.metrics.accepted_value.str() << " revenue " << result.metrics.revenue.str()
              << " latePct " << result.metrics.late_pct << " accepted " << result.metrics.accepted
              << "/" << result.metrics.submitted << "\n";
    return 0;
}

int cmd_compare(const CliConfig& cli) {
    Scenario scenario = load_scenario(cli.scenario_path);
    WorkloadTrace workload = build_workload(scenario, cli.seed);
    auto algos = select_algorithms(scenario, cli.algos);
    SimulationConfig base = build_sim_config(scenario, algos.front(), workload);
    if (cli.seed) base.seed = *cli.seed;
    auto rows = compare_algorithms(base, algos);
    {
        auto out = open_out(cli, "comparison.csv");
        write_metrics_csv(out, rows);
    }
    for (const ComparisonRow& row : rows) {
        std::cout << row.algorithm << ": welfare " << row.metrics.accepted_value.str()
                  << " revenue " << row.metrics.revenue.str() << " latePct "
                  << row.metrics.late_pct;
        if (row.welfare_over_opt) std::cout << " welfare/OPT " << *row.welfare_over_opt;
        std::cout << "\n";
    }
    return 0;
}

int cmd_gen_workload(const CliConfig& cli) {
    Scenario scenario = load_scenario(cli.scenario_path);
    WorkloadTrace workload = build_workload(scenario, cli.seed);
    auto out = open_out(cli, "trace.csv");
    write_trace(out, workload);
    std::cout << "wrote " << workload.requests.size() << " jobs\n";
    return 0;
}

int cmd_dump_curves(const CliConfig& cli) {
    Scenario scenario = load_scenario(cli.scenario_path);
    WorkloadTrace workload = build_workload(scenario, cli.seed);
    std::unique_ptr<DemandOracle> oracle;
    if (cli.predictor == "spreading")
        oracle = build_spreading_predictor(workload, scenario.spec);
    else if (cli.predictor == "lp")
        oracle = build_lp_predictor(workload, scenario.spec);
    else
        throw std::invalid_argument("dump-curves supports predictors: spreading, lp");
    auto out = open_out(cli, "curves.csv");
    dump_curves(out, *oracle, scenario.spec);
    std::cout << "wrote curves for horizon " << scenario.spec.grid.horizon << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reservation-based scheduling and pricing engine with a cloud simulator"};
    app.require_subcommand(1);
    CliConfig cli;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", cli.scenario_path, "Scenario JSON file")->required();
        cmd->add_option("--out", cli.out_dir, "Output directory");
        cmd->add_option("--seed", cli.seed, "Workload seed override");
    };
    CLI::App* simulate = app.add_subcommand("simulate", "Run one algorithm and emit metrics + event log");
    add_common(simulate);
    simulate->add_option("--algo", cli.algos, "Algorithm name from the scenario");
    simulate->add_option("--format", cli.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    CLI::App* compare = app.add_subcommand("compare", "Run several algorithms on identical input");
    add_common(compare);
    compare->add_option("--algo", cli.algos, "Subset of scenario algorithms");

    CLI::App* gen = app.add_subcommand("gen-workload", "Generate the scenario workload trace CSV");
    add_common(gen);

    CLI::App* curves = app.add_subcommand("dump-curves", "Dump per-slot demand curves as CSV");
    add_common(curves);
    curves->add_option("--predictor", cli.predictor, "spreading or lp");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(cli);
        if (compare->parsed()) return cmd_compare(cli);
        if (gen->parsed()) return cmd_gen_workload(cli);
        if (curves->parsed()) return cmd_dump_curves(cli);
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    }
}
