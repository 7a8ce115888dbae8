#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "era/simulator.hpp"
#include "era/workload.hpp"

namespace era {

/// A scenario file bundles the cloud spec, the workload source, the
/// algorithm set and the run options. Keys are documented in the README.
struct Scenario {
    std::string name;
    CloudSpec spec;

    std::vector<JobClassSpec> classes;  // generated workload
    std::string trace_path;             // or a trace CSV (relative to the scenario file)
    std::uint64_t workload_seed = 0;

    // Optional: size per-resource capacity as a fraction of the
    // workload's total charged resource-slots.
    std::map<std::string, double> capacity_from_demand;

    std::vector<AlgorithmConfig> algorithms;
    std::uint64_t seed = 0;
    std::vector<CapacityDelta> failure_plan;
    EarlyTermination early_termination;
    int ticks_per_slot = 1;
    bool early_start = false;
};

Scenario parse_scenario(const std::string& json_text, const std::string& base_dir = "");
Scenario load_scenario(const std::string& path);

/// Generate or load the workload; applies capacity_from_demand to the
/// scenario spec as a side effect so the returned trace and the spec
/// stay consistent.
WorkloadTrace build_workload(Scenario& scenario, std::optional<std::uint64_t> seed_override = {});

SimulationConfig build_sim_config(const Scenario& scenario, const AlgorithmConfig& algorithm,
                                  const WorkloadTrace& workload);

}  // namespace era
