#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "era/bdl.hpp"
#include "era/domain.hpp"
#include "era/engine.hpp"
#include "era/predictor.hpp"

namespace era {

enum class AlgorithmKind { basic_econ, first_fit, on_demand };
enum class PredictorKind { none, flat, spreading, lp };

struct AlgorithmConfig {
    std::string name;  // row label; defaults from kind if empty
    AlgorithmKind kind = AlgorithmKind::basic_econ;

    // Basic-Econ only.
    PredictorKind predictor = PredictorKind::none;
    DemandCurve flat_curve;
    bool history_self = false;            // predictor history = the workload itself
    std::string history_trace_path;       // or an external trace CSV
    PredictorOptions predictor_options;
    std::optional<PriceBand> price_band;

    // Baselines.
    Money fixed_unit_price;

    std::string label() const;
};

struct EarlyTermination {
    bool enabled = false;
    double min_ratio = 1.0;  // actual/reserved duration, uniform
    double max_ratio = 1.0;
};

struct SimulationConfig {
    CloudSpec spec;
    WorkloadTrace workload;
    AlgorithmConfig algorithm;
    std::uint64_t seed = 0;
    std::vector<CapacityDelta> failure_plan;
    EarlyTermination early_termination;
    int ticks_per_slot = 1;
    bool early_start = false;  // move planned jobs earlier when capacity frees
    bool audit_every_slot = false;  // ledger self-check after each slot
};

struct ClassMetrics {
    Money requested_value;
    Money accepted_value;
    int submitted = 0;
    int accepted = 0;
    int late = 0;
};

struct MetricsReport {
    Money requested_value;
    Money accepted_value;  // welfare: value of jobs fulfilled in-window
    Money revenue;
    double late_pct = 0.0;
    double utilization = 0.0;
    double acceptance_rate = 0.0;
    int broken_guarantees = 0;
    int submitted = 0;
    int accepted = 0;
    int completed = 0;
    int late_jobs = 0;
    int early_starts = 0;
    std::map<std::string, ClassMetrics> per_class;

    double welfare_share() const {
        return requested_value > Money::zero()
                   ? accepted_value.to_double() / requested_value.to_double()
                   : 0.0;
    }
};

struct SimulationResult {
    MetricsReport metrics;
    std::vector<std::string> event_log;  // "slot type jobId payload"
};

std::unique_ptr<SchedulingEngine> make_engine(const AlgorithmConfig& algo, const CloudSpec& spec,
                                              const WorkloadTrace& workload);

/// Deterministic discrete-event run: per slot, failure feedback, request
/// delivery in (submitTime, jobId) order, allocation polling, lifecycle
/// advance, termination feedback; metrics at horizon end.
SimulationResult run_simulation(const SimulationConfig& cfg);

/// Offline clairvoyant optimum by exhaustive search; enforced to small
/// instances (<= 10 jobs, <= 24 slots) and throws otherwise.
Money brute_force_optimal(const WorkloadTrace& workload, const CloudSpec& spec);

struct ComparisonRow {
    std::string algorithm;
    MetricsReport metrics;
    std::optional<double> welfare_over_opt;  // only when brute force is feasible
};

/// Run every algorithm on identical workload and spec; appends the
/// welfare/OPT ratio when the instance is small enough to brute-force.
std::vector<ComparisonRow> compare_algorithms(const SimulationConfig& base,
                                              const std::vector<AlgorithmConfig>& algorithms);

void write_metrics_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

}  // namespace era
