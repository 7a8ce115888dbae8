#include "era/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "era/workload.hpp"

namespace era {

std::string AlgorithmConfig::label() const {
    if (!name.empty()) return name;
    switch (kind) {
        case AlgorithmKind::basic_econ: return "basicEcon";
        case AlgorithmKind::first_fit: return "firstFit";
        case AlgorithmKind::on_demand: return "onDemand";
    }
    return "unknown";
}

std::unique_ptr<SchedulingEngine> make_engine(const AlgorithmConfig& algo, const CloudSpec& spec,
                                              const WorkloadTrace& workload) {
    switch (algo.kind) {
        case AlgorithmKind::first_fit:
            return std::make_unique<FirstFitEngine>(spec, algo.fixed_unit_price);
        case AlgorithmKind::on_demand:
            return std::make_unique<OnDemandEngine>(spec, algo.fixed_unit_price);
        case AlgorithmKind::basic_econ: {
            std::shared_ptr<const DemandOracle> oracle;
            switch (algo.predictor) {
                case PredictorKind::none:
                    oracle = std::make_shared<FlatPredictor>(DemandCurve{}, spec.grid.horizon);
                    break;
                case PredictorKind::flat:
                    oracle = std::make_shared<FlatPredictor>(algo.flat_curve, spec.grid.horizon);
                    break;
                case PredictorKind::spreading:
                case PredictorKind::lp: {
                    WorkloadTrace history;
                    if (algo.history_self)
                        history = workload;
                    else if (!algo.history_trace_path.empty())
                        history = parse_trace_file(algo.history_trace_path, spec).trace;
                    oracle = algo.predictor == PredictorKind::spreading
                                 ? std::shared_ptr<const DemandOracle>(build_spreading_predictor(
                                       history, spec, algo.predictor_options))
                                 : std::shared_ptr<const DemandOracle>(
                                       build_lp_predictor(history, spec, algo.predictor_options));
                    break;
                }
            }
            return std::make_unique<BasicEconEngine>(spec, std::move(oracle), algo.price_band);
        }
    }
    throw std::logic_error("unreachable algorithm kind");
}

namespace {

struct EntryRun {
    Slot start = -1;
    Slot planned_duration = 0;
    Slot actual_duration = 0;
    Slot deadline = 0;
    bool started = false;
};

struct JobRun {
    const ReservationRequest* req = nullptr;
    bool accepted = false;
    bool cancelled = false;
    bool completed = false;
    bool late = false;
    bool logged_start = false;
    Money price;
    std::vector<EntryRun> entries;
};

std::string bundle_str(const Bundle& b) {
    std::string s;
    for (const auto& [r, q] : b.quantities) {
        if (!s.empty()) s += "+";
        s += r + ":" + std::to_string(q);
    }
    return s.empty() ? "-" : s;
}

}  // namespace

SimulationResult run_simulation(const SimulationConfig& cfg) {
    cfg.spec.check();
    SimulationResult result;
    auto& log = result.event_log;
    auto emit = [&](Slot slot, const std::string& type, const std::string& job,
                    const std::string& payload) {
        log.push_back(std::to_string(slot) + " " + type + " " + job +
                      (payload.empty() ? "" : " " + payload));
    };

    std::unique_ptr<SchedulingEngine> engine = make_engine(cfg.algorithm, cfg.spec, cfg.workload);
    const Slot horizon = cfg.spec.grid.horizon;

    // Arrival order: submit slot, then jobId for determinism.
    std::vector<const ReservationRequest*> arrivals;
    for (const ReservationRequest& r : cfg.workload.requests) arrivals.push_back(&r);
    std::stable_sort(arrivals.begin(), arrivals.end(),
                     [](const ReservationRequest* a, const ReservationRequest* b) {
                         if (a->submit_time != b->submit_time) return a->submit_time < b->submit_time;
                         return a->job_id < b->job_id;
                     });

    std::map<std::string, JobRun> jobs;
    Rng lifecycle_rng(cfg.seed ^ 0xe7a11ce5u);

    double util_allocated = 0.0, util_capacity = 0.0;
    MetricsReport& m = result.metrics;
    std::size_t next_arrival = 0;

    auto sync_entry_starts = [&](JobRun& run, const std::string& job_id) {
        const std::vector<Placement>* ps = engine->ledger().placements_of(job_id);
        if (!ps) return;
        for (const Placement& p : *ps) {
            EntryRun& e = run.entries[p.entry];
            if (!e.started) e.start = p.start;
        }
    };

    for (Slot slot = 0; slot < horizon; ++slot) {
        // 1. Cloud feedback: failure-plan capacity changes for this slot.
        CloudFeedback failure_fb;
        for (const CapacityDelta& d : cfg.failure_plan)
            if (d.slot == slot) failure_fb.capacity_deltas.push_back(d);
        if (!failure_fb.capacity_deltas.empty()) {
            for (const CapacityDelta& d : failure_fb.capacity_deltas)
                emit(slot, "capacity", d.resource,
                     std::to_string(d.slot) + " " + std::to_string(d.delta));
            UpdateSummary summary = engine->apply_update(slot, failure_fb);
            for (const std::string& job : summary.cancelled_jobs) {
                JobRun& run = jobs.at(job);
                run.cancelled = true;
                ++m.broken_guarantees;
                m.revenue = m.revenue - run.price;  // refund
                emit(slot, "cancel", job, "guarantee-broken");
            }
        }

        engine->begin_slot(slot);

        // 2. Deliver arriving requests.
        while (next_arrival < arrivals.size() && arrivals[next_arrival]->submit_time == slot) {
            const ReservationRequest& req = *arrivals[next_arrival++];
            Quote q = engine->make_reservation(slot, req);
            JobRun& run = jobs[req.job_id];
            run.req = &req;
            for (const ResourceRequest& r : req.requests) {
                EntryRun e;
                e.planned_duration = r.duration;
                e.actual_duration = r.duration;
                e.deadline = r.deadline;
                run.entries.push_back(e);
            }
            if (q.accepted) {
                run.accepted = true;
                run.price = q.price;
                m.revenue += q.price;
                if (cfg.early_termination.enabled) {
                    for (EntryRun& e : run.entries) {
                        const double ratio =
                            cfg.early_termination.min_ratio +
                            (cfg.early_termination.max_ratio - cfg.early_termination.min_ratio) *
                                lifecycle_rng.uniform();
                        e.actual_duration = std::clamp<Slot>(
                            static_cast<Slot>(std::llround(ratio * e.planned_duration)), 1,
                            e.planned_duration);
                    }
                }
                sync_entry_starts(run, req.job_id);
                std::string starts;
                for (Slot s : q.starts) starts += (starts.empty() ? "" : ",") + std::to_string(s);
                emit(slot, "accept", req.job_id, q.price.str() + " " + (starts.empty() ? "queued" : starts));
            } else {
                emit(slot, "reject", req.job_id, q.reason);
            }
        }

        // 3. Optional early start: pull planned jobs forward when space frees.
        if (cfg.early_start) {
            for (auto& [job_id, run] : jobs) {
                if (!run.accepted || run.cancelled || run.completed) continue;
                const std::vector<Placement>* ps = engine->ledger().placements_of(job_id);
                if (!ps || ps->empty()) continue;
                bool movable = true;
                for (const Placement& p : *ps)
                    if (p.state != PlacementState::planned || p.start <= slot || p.arrival > slot)
                        movable = false;
                if (!movable) continue;
                std::vector<Placement> original = *ps;
                PlanLedger& ledger = engine->mutable_ledger();
                ledger.retract(job_id);
                bool ok = true;
                for (Placement p : original) {
                    p.start = slot;
                    if (!ledger.fits(p.charged, slot, p.duration)) {
                        ok = false;
                        break;
                    }
                    ledger.commit(std::move(p));
                }
                if (!ok) {
                    ledger.retract(job_id);
                    for (Placement p : original) ledger.commit(std::move(p));
                } else {
                    for (EntryRun& e : run.entries) e.start = slot;
                    ++m.early_starts;
                    emit(slot, "earlystart", job_id, std::to_string(slot));
                }
            }
        }

        // 4. Allocation polling.
        std::vector<std::pair<std::string, Bundle>> alloc;
        for (int tick = 0; tick < std::max(1, cfg.ticks_per_slot); ++tick) {
            auto current = engine->current_allocation(slot);
            if (tick == 0)
                alloc = std::move(current);
            else if (current != alloc)
                throw std::logic_error("getCurrentAllocation not idempotent within a slot");
        }
        Bundle total_alloc;
        for (const auto& [job_id, bundle] : alloc) {
            total_alloc += bundle;
            JobRun& run = jobs.at(job_id);
            if (!run.logged_start) {
                run.logged_start = true;
                engine->mutable_ledger().mark_running(job_id, slot);
                sync_entry_starts(run, job_id);
                for (EntryRun& e : run.entries)
                    if (e.start == slot) e.started = true;
                emit(slot, "start", job_id, bundle_str(bundle));
            } else {
                engine->mutable_ledger().mark_running(job_id, slot);
                for (EntryRun& e : run.entries)
                    if (e.start == slot) e.started = true;
            }
        }
        for (const auto& [resource, q] : total_alloc.quantities) {
            if (q > engine->ledger().capacity(resource, slot))
                throw std::logic_error("mock cloud over capacity: " + resource + " at slot " +
                                       std::to_string(slot));
            util_allocated += static_cast<double>(q);
        }
        for (const ResourceType& r : cfg.spec.resources)
            util_capacity += static_cast<double>(engine->ledger().capacity(r.id, slot));

        // 5. Advance lifecycle; emit terminations at slot end.
        for (auto& [job_id, run] : jobs) {
            if (!run.accepted || run.cancelled || run.completed) continue;
            bool all_done = true;
            for (EntryRun& e : run.entries) {
                const bool done = e.started && slot + 1 >= e.start + e.actual_duration;
                if (!done) all_done = false;
            }
            if (!all_done) continue;
            run.completed = true;
            CloudFeedback fb;
            fb.terminations.push_back(job_id);
            engine->apply_update(slot, fb);
            bool late = false;
            for (const EntryRun& e : run.entries)
                if (e.start + e.actual_duration > e.deadline) late = true;
            run.late = late;
            emit(slot, "finish", job_id, late ? "late" : "ontime");
        }

        if (cfg.audit_every_slot && !engine->ledger().audit())
            throw std::logic_error("ledger audit failed at slot " + std::to_string(slot));
    }

    // 6. Metrics.
    for (const auto& [job_id, run] : jobs) {
        const Money value = run.req->max_price;
        const std::string& cls = run.req->job_class;
        ClassMetrics& cm = m.per_class[cls.empty() ? "-" : cls];
        ++m.submitted;
        ++cm.submitted;
        m.requested_value += value;
        cm.requested_value += value;
        if (!run.accepted) continue;
        ++m.accepted;
        ++cm.accepted;
        if (run.cancelled) continue;  // refunded when cancelled, value not counted
        if (!run.completed) {
            // Never completed inside the horizon: late, payment refunded.
            ++m.late_jobs;
            ++cm.late;
            m.revenue = m.revenue - run.price;
            continue;
        }
        ++m.completed;
        if (run.late) {
            ++m.late_jobs;
            ++cm.late;
            m.revenue = m.revenue - run.price;
        } else {
            m.accepted_value += value;
            cm.accepted_value += value;
        }
    }
    m.late_pct = m.accepted > 0 ? static_cast<double>(m.late_jobs) / m.accepted : 0.0;
    m.acceptance_rate = m.submitted > 0 ? static_cast<double>(m.accepted) / m.submitted : 0.0;
    m.utilization = util_capacity > 0.0 ? util_allocated / util_capacity : 0.0;
    return result;
}

namespace {

struct BruteState {
    const CloudSpec* spec;
    std::vector<const ReservationRequest*> jobs;
    std::map<std::string, std::vector<Quantity>> used;
    Money best;

    bool fits(const Bundle& b, Slot s, Slot t_len) const {
        for (const auto& [r, q] : b.quantities) {
            const auto& cap = spec->capacity.at(r);
            const auto& u = used.at(r);
            for (Slot t = s; t < s + t_len; ++t)
                if (u[t] + q > cap[t]) return false;
        }
        return true;
    }
    void apply(const Bundle& b, Slot s, Slot t_len, int sign) {
        for (const auto& [r, q] : b.quantities)
            for (Slot t = s; t < s + t_len; ++t) used.at(r)[t] += sign * q;
    }

    void place_entries(std::size_t job, std::size_t entry, Money acc);
    void search(std::size_t job, Money acc);
};

void BruteState::place_entries(std::size_t job, std::size_t entry, Money acc) {
    const ReservationRequest& j = *jobs[job];
    if (entry == j.requests.size()) {
        search(job + 1, acc + j.max_price);
        return;
    }
    const ResourceRequest& r = j.requests[entry];
    const Bundle charged = charged_demand(r, *spec);
    for (Slot s = r.arrival; s + r.duration <= r.deadline; ++s) {
        if (!fits(charged, s, r.duration)) continue;
        apply(charged, s, r.duration, +1);
        place_entries(job, entry + 1, acc);
        apply(charged, s, r.duration, -1);
    }
}

void BruteState::search(std::size_t job, Money acc) {
    if (job == jobs.size()) {
        best = std::max(best, acc);
        return;
    }
    search(job + 1, acc);          // reject
    place_entries(job, 0, acc);    // accept at every feasible start combo
}

}  // namespace

Money brute_force_optimal(const WorkloadTrace& workload, const CloudSpec& spec) {
    if (workload.requests.size() > 10)
        throw std::invalid_argument("brute force limited to 10 jobs");
    if (spec.grid.horizon > 24)
        throw std::invalid_argument("brute force limited to 24 slots");
    BruteState st;
    st.spec = &spec;
    for (const ReservationRequest& r : workload.requests) st.jobs.push_back(&r);
    for (const ResourceType& r : spec.resources) st.used[r.id].assign(spec.grid.horizon, 0);
    st.search(0, Money::zero());
    return st.best;
}

std::vector<ComparisonRow> compare_algorithms(const SimulationConfig& base,
                                              const std::vector<AlgorithmConfig>& algorithms) {
    std::optional<Money> opt;
    if (base.workload.requests.size() <= 10 && base.spec.grid.horizon <= 24)
        opt = brute_force_optimal(base.workload, base.spec);

    std::vector<ComparisonRow> rows;
    for (const AlgorithmConfig& algo : algorithms) {
        SimulationConfig cfg = base;
        cfg.algorithm = algo;
        SimulationResult r = run_simulation(cfg);
        ComparisonRow row{algo.label(), r.metrics, std::nullopt};
        if (opt && *opt > Money::zero())
            row.welfare_over_opt = r.metrics.accepted_value.to_double() / opt->to_double();
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_metrics_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    out << "algorithm,welfare,revenue,latePct,utilization,acceptanceRate\n";
    for (const ComparisonRow& row : rows) {
        std::ostringstream line;
        line << row.algorithm << ',' << row.metrics.accepted_value.str() << ','
             << row.metrics.revenue.str() << ',' << row.metrics.late_pct << ','
             << row.metrics.utilization << ',' << row.metrics.acceptance_rate;
        out << line.str() << "\n";
    }
}

}  // namespace era
