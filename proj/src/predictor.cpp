#include "era/predictor.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "era/simplex.hpp"

namespace era {
namespace {

void check_slot(Slot now, Slot t, Slot horizon) {
    if (t < 0 || t >= horizon) throw std::out_of_range("slot outside horizon");
    if (t < now) throw std::out_of_range("queried slot before current time");
}

Slot resolve_period(const CloudSpec& spec, const PredictorOptions& opt) {
    Slot p = opt.period_slots;
    if (p <= 0) p = static_cast<Slot>(std::max<std::int64_t>(1, 86400 / spec.grid.slot_duration_sec));
    return std::min(p, spec.grid.horizon);
}

Slot resolve_history_limit(const CloudSpec& spec, const PredictorOptions& opt) {
    Slot h = opt.history_slots;
    if (h <= 0) h = static_cast<Slot>(std::max<std::int64_t>(1, 7 * 86400 / spec.grid.slot_duration_sec));
    return h;
}

/// Entries of history jobs, flattened, with the job's uniform unit price.
struct HistoryEntry {
    const ReservationRequest* job;
    const ResourceRequest* req;
    int entry_index;
    Bundle charged;
    Money unit_price;   // v / (total formal units x slots of the whole job)
    double value_share; // exact, unrounded value apportioned to this entry
};

std::vector<HistoryEntry> flatten_history(const WorkloadTrace& history, const CloudSpec& spec,
                                          Slot history_limit) {
    Slot latest = 0;
    for (const ReservationRequest& job : history.requests)
        for (const ResourceRequest& r : job.requests) latest = std::max(latest, r.deadline);
    const Slot cutoff = latest - history_limit;

    std::vector<HistoryEntry> entries;
    for (const ReservationRequest& job : history.requests) {
        std::int64_t unit_slots = 0;
        Slot job_latest = 0;
        for (const ResourceRequest& r : job.requests) {
            unit_slots += formal_demand(r, spec).total() * r.duration;
            job_latest = std::max(job_latest, r.deadline);
        }
        if (unit_slots <= 0 || job_latest <= cutoff) continue;
        const Money unit = job.max_price.div(unit_slots);
        for (int i = 0; i < static_cast<int>(job.requests.size()); ++i) {
            const ResourceRequest& r = job.requests[i];
            const double share =
                job.max_price.to_double() *
                (static_cast<double>(formal_demand(r, spec).total() * r.duration) /
                 static_cast<double>(unit_slots));
            entries.push_back({&job, &r, i, charged_demand(r, spec), unit, share});
        }
    }
    return entries;
}

/// Per-slot-of-period curve table shared by the data-based predictors.
class TablePredictor : public DemandOracle {
public:
    TablePredictor(std::map<std::string, std::vector<DemandCurve>> table, Slot period, Slot horizon)
        : table_(std::move(table)), period_(period), horizon_(horizon) {}

    DemandCurve curve_at(Slot now, Slot t, const std::string& resource) const override {
        check_slot(now, t, horizon_);
        auto it = table_.find(resource);
        if (it == table_.end()) return {};
        return it->second[t % period_];
    }

private:
    std::map<std::string, std::vector<DemandCurve>> table_;
    Slot period_;
    Slot horizon_;
};

/// Fold per-absolute-slot contributions into slot-of-period curves,
/// averaging over the number of absolute slots that map to each bucket.
std::map<std::string, std::vector<DemandCurve>> fold(
    const std::map<std::string, std::vector<std::vector<CurvePoint>>>& contributions,
    Slot span, Slot period) {
    std::map<std::string, std::vector<DemandCurve>> table;
    for (const auto& [resource, per_slot] : contributions) {
        std::vector<DemandCurve>& curves = table[resource];
        curves.resize(period);
        for (Slot sigma = 0; sigma < period; ++sigma) {
            std::vector<CurvePoint> merged;
            int buckets = 0;
            for (Slot t = sigma; t < span; t += period) {
                ++buckets;
                const auto& pts = per_slot[t];
                merged.insert(merged.end(), pts.begin(), pts.end());
            }
            DemandCurve c = DemandCurve::from_contributions(std::move(merged));
            curves[sigma] = buckets > 1 ? c.scaled(1.0 / buckets) : c;
        }
    }
    return table;
}

}  // namespace

std::optional<Money> oracle_query(const DemandOracle& oracle, Slot now, Slot t,
                                  const std::string& resource, double q) {
    return oracle.curve_at(now, t, resource).inverse_price(q);
}

DemandCurve FlatPredictor::curve_at(Slot now, Slot t, const std::string& resource) const {
    check_slot(now, t, horizon_);
    (void)resource;
    return curve_;
}

std::unique_ptr<DemandOracle> build_spreading_predictor(const WorkloadTrace& history,
                                                        const CloudSpec& spec,
                                                        const PredictorOptions& opt) {
    const Slot period = resolve_period(spec, opt);
    const Slot span = spec.grid.horizon;
    auto entries = flatten_history(history, spec, resolve_history_limit(spec, opt));

    std::map<std::string, std::vector<std::vector<CurvePoint>>> contributions;
    for (const ResourceType& r : spec.resources) contributions[r.id].resize(span);

    for (const HistoryEntry& e : entries) {
        const double window = e.req->deadline - e.req->arrival;
        for (const auto& [resource, w] : e.charged.quantities) {
            const double q = static_cast<double>(w) * e.req->duration / window;
            for (Slot t = std::max<Slot>(0, e.req->arrival);
                 t < std::min(span, e.req->deadline); ++t)
                contributions[resource][t].push_back({e.unit_price, q});
        }
    }
    return std::make_unique<TablePredictor>(fold(contributions, span, period), period,
                                            spec.grid.horizon);
}

FractionalAllocation solve_fractional_allocation(
    const WorkloadTrace& history, const CloudSpec& spec,
    const std::map<std::string, std::vector<Quantity>>* committed,
    const PredictorOptions& opt) {
    const Slot span = spec.grid.horizon;
    auto entries = flatten_history(history, spec, resolve_history_limit(spec, opt));

    // Variables: one per (entry, feasible start).
    struct Var {
        std::size_t entry;
        Slot start;
    };
    std::vector<Var> vars;
    std::vector<std::size_t> entry_first_var(entries.size() + 1, 0);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        entry_first_var[i] = vars.size();
        const ResourceRequest& r = *entries[i].req;
        for (Slot s = std::max<Slot>(0, r.arrival); s + r.duration <= std::min(span, r.deadline); ++s)
            vars.push_back({i, s});
    }
    entry_first_var[entries.size()] = vars.size();

    FractionalAllocation out;
    if (vars.empty()) return out;

    // Rows: one per entry (sum x <= 1), one per (resource, slot).
    std::vector<std::string> resources;
    for (const ResourceType& r : spec.resources) resources.push_back(r.id);
    const std::size_t n = vars.size();
    const std::size_t entry_rows = entries.size();
    const std::size_t cap_rows = resources.size() * span;
    SimplexSolver::Matrix a(entry_rows + cap_rows, SimplexSolver::Row(n, 0.0));
    SimplexSolver::Row b(entry_rows + cap_rows, 0.0);
    SimplexSolver::Row c(n, 0.0);

    for (std::size_t i = 0; i < entries.size(); ++i) b[i] = 1.0;
    for (std::size_t ri = 0; ri < resources.size(); ++ri) {
        const auto& cap = spec.capacity.at(resources[ri]);
        for (Slot t = 0; t < span; ++t) {
            double residual = static_cast<double>(cap[t]);
            if (committed) {
                auto it = committed->find(resources[ri]);
                if (it != committed->end()) residual -= static_cast<double>(it->second[t]);
            }
            b[entry_rows + ri * span + t] = std::max(0.0, residual);
        }
    }

    for (std::size_t v = 0; v < n; ++v) {
        const HistoryEntry& e = entries[vars[v].entry];
        a[vars[v].entry][v] = 1.0;
        c[v] = e.value_share;
        for (std::size_t ri = 0; ri < resources.size(); ++ri) {
            const Quantity w = e.charged.get(resources[ri]);
            if (w == 0) continue;
            for (Slot t = vars[v].start; t < vars[v].start + e.req->duration; ++t)
                a[entry_rows + ri * span + t][v] += static_cast<double>(w);
        }
    }

    SimplexSolver::Result res = SimplexSolver::solve(a, b, c);
    if (res.status != SimplexSolver::Status::optimal)
        throw std::runtime_error("fractional allocation LP did not reach an optimum");
    out.objective = res.objective;
    for (std::size_t v = 0; v < n; ++v) {
        if (res.x[v] <= DemandCurve::kEps) continue;
        const HistoryEntry& e = entries[vars[v].entry];
        out.pieces.push_back({e.job->job_id, e.entry_index, vars[v].start, std::min(1.0, res.x[v])});
    }
    return out;
}

std::unique_ptr<DemandOracle> build_lp_predictor(const WorkloadTrace& history,
                                                 const CloudSpec& spec,
                                                 const PredictorOptions& opt) {
    const Slot period = resolve_period(spec, opt);
    const Slot span = spec.grid.horizon;
    FractionalAllocation alloc = solve_fractional_allocation(history, spec, nullptr, opt);

    // Index jobs for entry lookup.
    std::map<std::string, const ReservationRequest*> jobs;
    for (const ReservationRequest& job : history.requests) jobs[job.job_id] = &job;

    std::map<std::string, std::vector<std::vector<CurvePoint>>> contributions;
    for (const ResourceType& r : spec.resources) contributions[r.id].resize(span);

    for (const FractionalPiece& piece : alloc.pieces) {
        const ReservationRequest& job = *jobs.at(piece.job_id);
        const ResourceRequest& req = job.requests[piece.entry];
        std::int64_t unit_slots = 0;
        for (const ResourceRequest& r : job.requests)
            unit_slots += formal_demand(r, spec).total() * r.duration;
        const Money unit = job.max_price.div(std::max<std::int64_t>(1, unit_slots));
        const Bundle w = charged_demand(req, spec);
        for (Slot t = piece.start; t < std::min(span, piece.start + req.duration); ++t)
            for (const auto& [resource, q] : w.quantities)
                contributions[resource][t].push_back({unit, static_cast<double>(q) * piece.x});
    }
    return std::make_unique<TablePredictor>(fold(contributions, span, period), period,
                                            spec.grid.horizon);
}

void dump_curves(std::ostream& out, const DemandOracle& oracle, const CloudSpec& spec) {
    out << "slot,resource,price,cumulativeQuantity\n";
    for (Slot t = 0; t < spec.grid.horizon; ++t) {
        for (const ResourceType& r : spec.resources) {
            DemandCurve c = oracle.curve_at(0, t, r.id);
            for (const CurvePoint& pt : c.points())
                out << t << ',' << r.id << ',' << pt.price.str() << ',' << pt.quantity << "\n";
        }
    }
}

}  // namespace era
