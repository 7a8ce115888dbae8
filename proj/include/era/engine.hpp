#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "era/domain.hpp"
#include "era/ledger.hpp"
#include "era/predictor.hpp"

namespace era {

struct Quote {
    bool accepted = false;
    Money price;               // computed threshold price (set even on price rejects)
    std::vector<Slot> starts;  // one per AND-list entry when accepted
    std::string reason;        // reject reason, empty when accepted
};

struct CapacityDelta {
    Slot slot = 0;
    std::string resource;
    Quantity delta = 0;
};

struct CloudFeedback {
    std::vector<CapacityDelta> capacity_deltas;
    std::map<std::string, Bundle> consumption;
    std::vector<std::string> terminations;
    std::map<std::string, int> waiting_processes;
};

struct UpdateSummary {
    std::vector<std::string> cancelled_jobs;  // broken guarantees
    int released_slots = 0;
};

/// Serial state machine behind makeReservation / getCurrentAllocation /
/// update. Calls must be externally serialized; independent runs use
/// independent engines.
class SchedulingEngine {
public:
    explicit SchedulingEngine(const CloudSpec& spec) : spec_(&spec), ledger_(spec) {}
    virtual ~SchedulingEngine() = default;

    virtual Quote make_reservation(Slot now, const ReservationRequest& req) = 0;

    /// Placements whose interval contains `now`; idempotent per slot.
    virtual std::vector<std::pair<std::string, Bundle>> current_allocation(Slot now) const {
        return ledger_.allocation_at(now);
    }

    virtual UpdateSummary apply_update(Slot now, const CloudFeedback& fb);

    /// Called once per slot before any allocation query.
    virtual void begin_slot(Slot now) { (void)now; }

    const PlanLedger& ledger() const { return ledger_; }
    PlanLedger& mutable_ledger() { return ledger_; }

    /// Last feedback's consumption / waiting-process info, metrics only.
    const std::map<std::string, int>& waiting_processes() const { return waiting_; }

protected:
    const CloudSpec* spec_;
    PlanLedger ledger_;
    std::map<std::string, int> waiting_;
};

/// Price floor/ceiling per formal unit-slot, applied to the computed
/// total before the bid comparison (so it is still bid-independent).
struct PriceBand {
    Money unit_floor;
    Money unit_ceiling;
};

// Alg-1 primitives, exposed for direct testing. `i` is 1-based.
Money unit_price(const PlanLedger& ledger, const DemandOracle& oracle, Slot now, Slot t,
                 const std::string& resource, Quantity i);
Money interval_cost(const PlanLedger& ledger, const DemandOracle& oracle, Slot now,
                    const ResourceRequest& req, Slot start);

/// Basic-Econ: externality pricing against predicted demand, cheapest
/// feasible start (earliest on ties), threshold acceptance.
class BasicEconEngine : public SchedulingEngine {
public:
    BasicEconEngine(const CloudSpec& spec, std::shared_ptr<const DemandOracle> oracle,
                    std::optional<PriceBand> band = std::nullopt)
        : SchedulingEngine(spec), oracle_(std::move(oracle)), band_(band) {}

    Quote make_reservation(Slot now, const ReservationRequest& req) override;

    void swap_oracle(std::shared_ptr<const DemandOracle> oracle) { oracle_ = std::move(oracle); }

private:
    std::shared_ptr<const DemandOracle> oracle_;
    std::optional<PriceBand> band_;
};

/// Greedy baseline: earliest feasible start in the window, fixed unit price.
class FirstFitEngine : public SchedulingEngine {
public:
    FirstFitEngine(const CloudSpec& spec, Money fixed_unit_price)
        : SchedulingEngine(spec), fixed_unit_price_(fixed_unit_price) {}

    Quote make_reservation(Slot now, const ReservationRequest& req) override;

private:
    Money fixed_unit_price_;
};

/// On-demand baseline: admission looks at the current slot only; jobs
/// that cannot actually hold their full interval wait in a FIFO queue
/// and start when capacity frees (the source of late jobs).
class OnDemandEngine : public SchedulingEngine {
public:
    OnDemandEngine(const CloudSpec& spec, Money fixed_unit_price)
        : SchedulingEngine(spec), fixed_unit_price_(fixed_unit_price) {}

    Quote make_reservation(Slot now, const ReservationRequest& req) override;
    void begin_slot(Slot now) override;
    UpdateSummary apply_update(Slot now, const CloudFeedback& fb) override;

    const std::deque<ReservationRequest>& waiting_queue() const { return queue_; }

private:
    bool try_start(const ReservationRequest& req, Slot now, Money price);

    Money fixed_unit_price_;
    std::deque<ReservationRequest> queue_;
    std::map<std::string, Money> queued_price_;
};

}  // namespace era
