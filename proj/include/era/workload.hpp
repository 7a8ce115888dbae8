#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "era/bdl.hpp"
#include "era/domain.hpp"

namespace era {

/// All sampling runs on mt19937_64 with the transforms below, so a seed
/// pins the trace bytes.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {  // inclusive
        if (hi <= lo) return lo;
        return lo + static_cast<std::int64_t>(uniform() * static_cast<double>(hi - lo + 1));
    }
    double exponential(double mean) {
        double u;
        do {
            u = uniform();
        } while (u <= 0.0);
        return -mean * std::log(u);
    }
    int poisson(double rate);

private:
    std::mt19937_64 gen_;
};

struct DistributionSpec {
    enum class Kind { constant, uniform_int, uniform_real, exponential };
    Kind kind = Kind::constant;
    double a = 0.0;  // constant value / lower bound / mean
    double b = 0.0;  // upper bound

    double sample(Rng& rng) const;
};

struct JobClassSpec {
    std::string name;
    std::string config_id;
    double arrival_rate_per_slot = 0.0;  // Poisson
    int count_target = 0;
    DistributionSpec width;       // configuration count, rounded to >= 1
    DistributionSpec duration;    // slots, rounded to >= 1
    DistributionSpec laxity;      // window minus duration, slots, >= 0
    DistributionSpec unit_value;  // money per formal unit-slot
};

struct GenerateResult {
    WorkloadTrace trace;
    std::vector<std::string> warnings;  // classes that produced no feasible job
};

/// Deterministic by seed; job values are unitValue x formal units x
/// duration; windows are clipped to the horizon and infeasible samples
/// dropped.
GenerateResult generate_workload(const std::vector<JobClassSpec>& classes, const CloudSpec& spec,
                                 std::uint64_t seed);

struct ValueRule {
    Money default_unit_value;
    std::map<std::string, Money> per_class;
};

struct AugmentResult {
    WorkloadTrace trace;
    std::vector<std::string> flagged;  // rows whose window became invalid
};

/// Add deadlines and values to a raw trace that carries only shape and
/// submit times: arrival = submitTime, deadline = arrival + T + laxity.
AugmentResult augment_trace(const WorkloadTrace& raw, const ValueRule& values,
                            const DistributionSpec& laxity, const CloudSpec& spec,
                            std::uint64_t seed);

}  // namespace era
