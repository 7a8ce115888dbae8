#include "era/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace era {

UpdateSummary SchedulingEngine::apply_update(Slot now, const CloudFeedback& fb) {
    UpdateSummary summary;
    for (const std::string& job : fb.terminations) {
        if (!ledger_.has_job(job)) throw std::invalid_argument("termination for unknown job: " + job);
        summary.released_slots += ledger_.finish(job, now);
    }
    for (const CapacityDelta& d : fb.capacity_deltas) {
        auto cancelled = ledger_.adjust_capacity(d.resource, d.slot, d.delta, now);
        summary.cancelled_jobs.insert(summary.cancelled_jobs.end(), cancelled.begin(),
                                      cancelled.end());
    }
    for (const auto& [job, _] : fb.consumption)
        if (!ledger_.has_job(job)) throw std::invalid_argument("consumption for unknown job: " + job);
    for (const auto& [job, count] : fb.waiting_processes) {
        if (!ledger_.has_job(job)) throw std::invalid_argument("waiting count for unknown job: " + job);
        waiting_[job] = count;
    }
    return summary;
}

Money unit_price(const PlanLedger& ledger, const DemandOracle& oracle, Slot now, Slot t,
                 const std::string& resource, Quantity i) {
    const Quantity residual = ledger.capacity(resource, t) - ledger.promised(resource, t) - i;
    if (residual < 0) return Money::infinity();  // cannot be promised at any price
    return oracle.curve_at(now, t, resource).highest_price_exceeding(static_cast<double>(residual));
}

namespace {

// cost[t] of Alg. 1: sum over resources of the first W_r marginal unit
// prices, where W_r is the formal per-slot demand. Infinite if any
// charged unit cannot fit.
Money slot_cost(const PlanLedger& ledger, const DemandOracle& oracle, Slot now, Slot t,
                const Bundle& formal, const Bundle& charged) {
    if (!ledger.fits(charged, t, 1)) return Money::infinity();
    Money cost;
    for (const auto& [resource, w] : formal.quantities) {
        const Quantity cap = ledger.capacity(resource, t);
        const Quantity prom = ledger.promised(resource, t);
        const DemandCurve curve = oracle.curve_at(now, t, resource);
        for (Quantity i = 1; i <= w; ++i) {
            const Quantity residual = cap - prom - i;
            if (residual < 0) return Money::infinity();
            cost += curve.highest_price_exceeding(static_cast<double>(residual));
        }
    }
    return cost;
}

}  // namespace

Money interval_cost(const PlanLedger& ledger, const DemandOracle& oracle, Slot now,
                    const ResourceRequest& req, Slot start) {
    const Bundle formal = formal_demand(req, ledger.spec());
    const Bundle charged = charged_demand(req, ledger.spec());
    Money total;
    for (Slot t = start; t < start + req.duration; ++t) {
        const Money c = slot_cost(ledger, oracle, now, t, formal, charged);
        if (c.is_infinite()) return Money::infinity();
        total += c;
    }
    return total;
}

Quote BasicEconEngine::make_reservation(Slot now, const ReservationRequest& req) {
    Quote quote;
    ValidationResult v = validate_request(req, *spec_);
    if (!v.ok()) {
        quote.reason = v.violations.front().message;
        return quote;
    }
    if (ledger_.has_job(req.job_id)) {
        quote.reason = "duplicate job id";
        return quote;
    }

    // Entries are priced sequentially against a ledger that already
    // includes earlier entries' tentative placements; committed
    // atomically at the end.
    Money total;
    std::vector<Slot> starts;
    std::int64_t unit_slots = 0;
    bool feasible = true;
    for (int e = 0; e < static_cast<int>(req.requests.size()) && feasible; ++e) {
        const ResourceRequest& r = req.requests[e];
        const Bundle formal = formal_demand(r, *spec_);
        const Bundle charged = charged_demand(r, *spec_);
        unit_slots += formal.total() * r.duration;

        std::vector<Money> cost(r.deadline - r.arrival);
        for (Slot t = r.arrival; t < r.deadline; ++t)
            cost[t - r.arrival] = slot_cost(ledger_, *oracle_, now, t, formal, charged);

        Money best = Money::infinity();
        Slot best_start = -1;
        for (Slot s = r.arrival; s + r.duration <= r.deadline; ++s) {
            Money sum;
            for (Slot t = s; t < s + r.duration && !sum.is_infinite(); ++t)
                sum += cost[t - r.arrival];
            if (sum < best) {  // earliest start wins ties
                best = sum;
                best_start = s;
            }
        }
        if (best.is_infinite()) {
            feasible = false;
            break;
        }
        Placement p;
        p.job_id = req.job_id;
        p.entry = e;
        p.start = best_start;
        p.duration = r.duration;
        p.charged = charged;
        p.formal = formal;
        p.arrival = r.arrival;
        p.deadline = r.deadline;
        ledger_.commit(std::move(p));
        total += best;
        starts.push_back(best_start);
    }

    if (!feasible) {
        ledger_.retract(req.job_id);
        quote.reason = "no feasible start";
        return quote;
    }
    if (band_) {
        total = std::clamp(total, band_->unit_floor * unit_slots, band_->unit_ceiling * unit_slots);
    }
    quote.price = total;  // computed before the single comparison with V
    if (total > req.max_price) {
        ledger_.retract(req.job_id);
        quote.reason = "price above willingness to pay";
        return quote;
    }
    // Recommit with the whole-job price recorded on entry 0.
    ledger_.retract(req.job_id);
    for (int e = 0; e < static_cast<int>(req.requests.size()); ++e) {
        const ResourceRequest& r = req.requests[e];
        Placement p;
        p.job_id = req.job_id;
        p.entry = e;
        p.start = starts[e];
        p.duration = r.duration;
        p.charged = charged_demand(r, *spec_);
        p.formal = formal_demand(r, *spec_);
        p.arrival = r.arrival;
        p.deadline = r.deadline;
        p.price = (e == 0) ? total : Money::zero();
        ledger_.commit(std::move(p));
    }
    quote.accepted = true;
    quote.starts = std::move(starts);
    return quote;
}

Quote FirstFitEngine::make_reservation(Slot now, const ReservationRequest& req) {
    (void)now;
    Quote quote;
    ValidationResult v = validate_request(req, *spec_);
    if (!v.ok()) {
        quote.reason = v.violations.front().message;
        return quote;
    }
    if (ledger_.has_job(req.job_id)) {
        quote.reason = "duplicate job id";
        return quote;
    }

    std::int64_t unit_slots = 0;
    std::vector<Slot> starts;
    bool feasible = true;
    for (int e = 0; e < static_cast<int>(req.requests.size()) && feasible; ++e) {
        const ResourceRequest& r = req.requests[e];
        const Bundle charged = charged_demand(r, *spec_);
        const Bundle formal = formal_demand(r, *spec_);
        unit_slots += formal.total() * r.duration;
        Slot found = -1;
        for (Slot s = r.arrival; s + r.duration <= r.deadline; ++s) {
            if (ledger_.fits(charged, s, r.duration)) {
                found = s;
                break;
            }
        }
        if (found < 0) {
            feasible = false;
            break;
        }
        Placement p;
        p.job_id = req.job_id;
        p.entry = e;
        p.start = found;
        p.duration = r.duration;
        p.charged = charged;
        p.formal = formal;
        p.arrival = r.arrival;
        p.deadline = r.deadline;
        ledger_.commit(std::move(p));
        starts.push_back(found);
    }

    const Money price = fixed_unit_price_ * unit_slots;
    quote.price = price;
    if (!feasible || price > req.max_price) {
        ledger_.retract(req.job_id);
        quote.reason = feasible ? "price above willingness to pay" : "no feasible start";
        return quote;
    }
    ledger_.retract(req.job_id);
    for (int e = 0; e < static_cast<int>(req.requests.size()); ++e) {
        const ResourceRequest& r = req.requests[e];
        Placement p;
        p.job_id = req.job_id;
        p.entry = e;
        p.start = starts[e];
        p.duration = r.duration;
        p.charged = charged_demand(r, *spec_);
        p.formal = formal_demand(r, *spec_);
        p.arrival = r.arrival;
        p.deadline = r.deadline;
        p.price = (e == 0) ? price : Money::zero();
        ledger_.commit(std::move(p));
    }
    quote.accepted = true;
    quote.starts = std::move(starts);
    return quote;
}

bool OnDemandEngine::try_start(const ReservationRequest& req, Slot now, Money price) {
    for (int e = 0; e < static_cast<int>(req.requests.size()); ++e) {
        const ResourceRequest& r = req.requests[e];
        Placement p;
        p.job_id = req.job_id;
        p.entry = e;
        p.start = now;
        p.duration = r.duration;
        p.charged = charged_demand(r, *spec_);
        p.formal = formal_demand(r, *spec_);
        p.arrival = r.arrival;
        p.deadline = r.deadline;
        p.price = (e == 0) ? price : Money::zero();
        if (now + r.duration > ledger_.horizon() || !ledger_.fits(p.charged, now, r.duration)) {
            ledger_.retract(req.job_id);
            return false;
        }
        ledger_.commit(std::move(p));
    }
    return true;
}

Quote OnDemandEngine::make_reservation(Slot now, const ReservationRequest& req) {
    Quote quote;
    ValidationResult v = validate_request(req, *spec_);
    if (!v.ok()) {
        quote.reason = v.violations.front().message;
        return quote;
    }
    if (ledger_.has_job(req.job_id) || queued_price_.count(req.job_id)) {
        quote.reason = "duplicate job id";
        return quote;
    }

    // Availability is checked for the immediate slot only.
    Bundle instantaneous;
    std::int64_t unit_slots = 0;
    for (const ResourceRequest& r : req.requests) {
        instantaneous += charged_demand(r, *spec_);
        unit_slots += formal_demand(r, *spec_).total() * r.duration;
    }
    bool free_now = now < ledger_.horizon();
    for (const auto& [resource, q] : instantaneous.quantities)
        if (free_now && ledger_.free_at(resource, now) < q) free_now = false;

    const Money price = fixed_unit_price_ * unit_slots;
    quote.price = price;
    if (!free_now) {
        quote.reason = "no capacity at the current slot";
        return quote;
    }
    if (price > req.max_price) {
        quote.reason = "price above willingness to pay";
        return quote;
    }
    quote.accepted = true;
    if (try_start(req, now, price)) {
        quote.starts.assign(req.requests.size(), now);
    } else {
        // Accepted but the full interval does not fit: wait for capacity.
        queue_.push_back(req);
        queued_price_[req.job_id] = price;
    }
    return quote;
}

void OnDemandEngine::begin_slot(Slot now) {
    // Strict FIFO: later arrivals do not jump the head of the queue.
    while (!queue_.empty()) {
        const ReservationRequest& head = queue_.front();
        if (!try_start(head, now, queued_price_.at(head.job_id))) break;
        queued_price_.erase(head.job_id);
        queue_.pop_front();
    }
}

UpdateSummary OnDemandEngine::apply_update(Slot now, const CloudFeedback& fb) {
    for (const std::string& job : fb.terminations) {
        std::erase_if(queue_, [&](const ReservationRequest& r) { return r.job_id == job; });
        queued_price_.erase(job);
    }
    CloudFeedback filtered = fb;
    std::erase_if(filtered.terminations,
                  [&](const std::string& job) { return !ledger_.has_job(job); });
    return SchedulingEngine::apply_update(now, filtered);
}

}  // namespace era
