#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "era/bdl.hpp"
#include "era/curve.hpp"
#include "era/domain.hpp"

namespace era {

/// Demand oracle: per future slot and resource, the predicted demand
/// curve. Answers never depend on a querying job's bid, only on the
/// oracle's fitted state.
class DemandOracle {
public:
    virtual ~DemandOracle() = default;

    /// Curve of demand predicted to arrive between `now` and `t` for
    /// slot `t`. Throws std::out_of_range if t is outside the horizon
    /// or before now.
    virtual DemandCurve curve_at(Slot now, Slot t, const std::string& resource) const = 0;
};

/// Highest price at which predicted demand for slot t reaches quantity
/// q; infinity sentinel for q = 0, nullopt if no price generates q.
std::optional<Money> oracle_query(const DemandOracle& oracle, Slot now, Slot t,
                                  const std::string& resource, double q);

/// Constant curve at every slot and resource; the cold-start fallback.
class FlatPredictor : public DemandOracle {
public:
    FlatPredictor(DemandCurve curve, Slot horizon) : curve_(std::move(curve)), horizon_(horizon) {}
    DemandCurve curve_at(Slot now, Slot t, const std::string& resource) const override;

private:
    DemandCurve curve_;
    Slot horizon_;
};

struct PredictorOptions {
    Slot period_slots = 0;    // 0: 24 simulated hours, clamped to the horizon
    Slot history_slots = 0;   // 0: one simulated week
};

/// Spreading predictor: each past job spreads its demand uniformly over
/// its window at its uniform unit price, then curves are folded by
/// slot-of-period and averaged.
std::unique_ptr<DemandOracle> build_spreading_predictor(const WorkloadTrace& history,
                                                        const CloudSpec& spec,
                                                        const PredictorOptions& opt = {});

struct FractionalPiece {
    std::string job_id;
    int entry;    // index into the job's AND list
    Slot start;
    double x;     // fraction of the entry started at `start`
};

struct FractionalAllocation {
    double objective = 0.0;
    std::vector<FractionalPiece> pieces;
};

/// Value-maximizing fractional allocation over past requests: per job
/// entry, start fractions sum to at most 1; per slot and resource, the
/// charged occupancy stays within capacity. Optionally, already
/// committed quantities are subtracted from capacity first.
FractionalAllocation solve_fractional_allocation(
    const WorkloadTrace& history, const CloudSpec& spec,
    const std::map<std::string, std::vector<Quantity>>* committed = nullptr,
    const PredictorOptions& opt = {});

/// LP-relaxation predictor: per-slot curves read off the fractional
/// optimum (occupancy at the job's uniform unit price), folded like the
/// spreading predictor.
std::unique_ptr<DemandOracle> build_lp_predictor(const WorkloadTrace& history,
                                                 const CloudSpec& spec,
                                                 const PredictorOptions& opt = {});

/// Debug dump: CSV rows (slot, resource, price, cumulativeQuantity).
void dump_curves(std::ostream& out, const DemandOracle& oracle, const CloudSpec& spec);

}  // namespace era
