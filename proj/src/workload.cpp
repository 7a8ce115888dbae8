#include "era/workload.hpp"

#include <algorithm>
#include <cmath>

namespace era {

int Rng::poisson(double rate) {
    if (rate <= 0.0) return 0;
    // Knuth's product method; fine for desk-scale rates.
    const double limit = std::exp(-rate);
    int k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform();
    } while (p > limit);
    return k - 1;
}

double DistributionSpec::sample(Rng& rng) const {
    switch (kind) {
        case Kind::constant: return a;
        case Kind::uniform_int: return static_cast<double>(rng.uniform_int(
            static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)));
        case Kind::uniform_real: return a + (b - a) * rng.uniform();
        case Kind::exponential: return rng.exponential(a);
    }
    return a;
}

GenerateResult generate_workload(const std::vector<JobClassSpec>& classes, const CloudSpec& spec,
                                 std::uint64_t seed) {
    GenerateResult out;
    const Slot horizon = spec.grid.horizon;
    std::uint64_t class_index = 0;
    for (const JobClassSpec& cls : classes) {
        Rng rng(seed * 0x9e3779b97f4a7c15ULL + class_index++);
        const Configuration* config = spec.find_config(cls.config_id);
        if (!config) throw std::invalid_argument("class " + cls.name + ": unknown configuration " + cls.config_id);
        const Quantity units_per_config = config->formal.total();
        int emitted = 0;
        for (Slot slot = 0; slot < horizon && emitted < cls.count_target; ++slot) {
            const int n = rng.poisson(cls.arrival_rate_per_slot);
            for (int k = 0; k < n && emitted < cls.count_target; ++k) {
                const Quantity width = std::max<Quantity>(1, std::llround(cls.width.sample(rng)));
                const Slot duration = std::max<Slot>(1, static_cast<Slot>(std::llround(cls.duration.sample(rng))));
                const Slot laxity = std::max<Slot>(0, static_cast<Slot>(std::llround(cls.laxity.sample(rng))));
                const Money unit_value = Money::from_double(cls.unit_value.sample(rng));
                if (slot + duration > horizon) continue;  // cannot fit before the horizon ends
                Slot deadline = std::min<Slot>(horizon, slot + duration + laxity);

                ReservationRequest job;
                job.job_id = cls.name + "-" + std::to_string(emitted);
                job.job_class = cls.name;
                job.submit_time = slot;
                job.max_price = unit_value * (width * units_per_config * duration);
                ResourceRequest r;
                r.configs[cls.config_id] = width;
                r.duration = duration;
                r.arrival = slot;
                r.deadline = deadline;
                job.requests.push_back(std::move(r));
                out.trace.requests.push_back(std::move(job));
                ++emitted;
            }
        }
        if (emitted == 0 && cls.count_target > 0)
            out.warnings.push_back("class " + cls.name + " produced no feasible jobs");
    }
    std::stable_sort(out.trace.requests.begin(), out.trace.requests.end(),
                     [](const ReservationRequest& a, const ReservationRequest& b) {
                         return a.submit_time < b.submit_time;
                     });
    return out;
}

AugmentResult augment_trace(const WorkloadTrace& raw, const ValueRule& values,
                            const DistributionSpec& laxity, const CloudSpec& spec,
                            std::uint64_t seed) {
    AugmentResult out;
    Rng rng(seed);
    for (const ReservationRequest& src : raw.requests) {
        ReservationRequest job = src;
        Money unit = values.default_unit_value;
        if (auto it = values.per_class.find(job.job_class); it != values.per_class.end())
            unit = it->second;
        std::int64_t unit_slots = 0;
        bool ok = true;
        for (ResourceRequest& r : job.requests) {
            r.arrival = job.submit_time;
            const Slot lax = std::max<Slot>(0, static_cast<Slot>(std::llround(laxity.sample(rng))));
            r.deadline = std::min<Slot>(spec.grid.horizon, r.arrival + r.duration + lax);
            if (r.deadline - r.arrival < r.duration) ok = false;
            unit_slots += formal_demand(r, spec).total() * r.duration;
        }
        job.max_price = unit * unit_slots;
        if (ok)
            out.trace.requests.push_back(std::move(job));
        else
            out.flagged.push_back(src.job_id);
    }
    return out;
}

}  // namespace era
