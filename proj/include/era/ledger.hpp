#pragma once

#include <map>
#include <string>
#include <vector>

#include "era/domain.hpp"

namespace era {

enum class PlacementState { planned, running, finished, cancelled };

/// One committed interval for one AND-list entry of a job.
struct Placement {
    std::string job_id;
    int entry = 0;
    Slot start = 0;
    Slot duration = 1;
    Slot effective_end = 1;  // truncated on early finish / cancellation
    Bundle charged;          // per-slot, against capacity
    Bundle formal;           // per-slot, what unit pricing counts
    Slot arrival = 0;
    Slot deadline = 1;
    Money price;             // whole-job price is carried on entry 0
    PlacementState state = PlacementState::planned;
};

/// The scheduler's source of truth: committed quantities per slot plus
/// per-job placements. Maintains promised <= capacity at every slot.
class PlanLedger {
public:
    explicit PlanLedger(const CloudSpec& spec);

    const CloudSpec& spec() const { return *spec_; }
    Slot horizon() const { return spec_->grid.horizon; }

    Quantity capacity(const std::string& resource, Slot t) const;
    Quantity promised(const std::string& resource, Slot t) const;
    Quantity free_at(const std::string& resource, Slot t) const;

    /// True iff adding `b` to every slot of [start, start+duration)
    /// keeps promised within capacity.
    bool fits(const Bundle& b, Slot start, Slot duration) const;

    /// Commit a placement; throws if it would exceed capacity or reuse
    /// a (job, entry) key.
    void commit(Placement p);

    /// Remove all placements of a job as if never committed (tentative
    /// AND-list rollback). Returns false if the job is unknown.
    bool retract(const std::string& job_id);

    bool has_job(const std::string& job_id) const { return placements_.count(job_id) > 0; }
    const std::vector<Placement>* placements_of(const std::string& job_id) const;
    const std::map<std::string, std::vector<Placement>>& placements() const { return placements_; }

    void mark_running(const std::string& job_id, Slot now);

    /// Termination: mark finished, release promised quantities for
    /// slots > now. Returns the number of released slot-entries.
    int finish(const std::string& job_id, Slot now);

    /// Cancel a whole job (all entries must be non-finished); releases
    /// every slot the job still holds from `now` on, past slots stay
    /// charged for running entries.
    void cancel(const std::string& job_id, Slot now);

    /// Apply a capacity change; if a slot becomes over-committed,
    /// cancels planned jobs by ascending value density until feasible
    /// (running jobs only as a last resort). Returns cancelled job ids.
    std::vector<std::string> adjust_capacity(const std::string& resource, Slot t, Quantity delta,
                                             Slot now);

    /// Jobs whose interval contains `now`, with their summed per-slot
    /// charged bundles.
    std::vector<std::pair<std::string, Bundle>> allocation_at(Slot now) const;

    /// Recompute promised from placements and check it matches the
    /// incremental series and stays within capacity.
    bool audit() const;

private:
    Quantity& promised_ref(const std::string& resource, Slot t);
    void add_interval(const Placement& p, Slot from, Slot to, int sign);
    std::vector<std::string> repair(const std::string& resource, Slot t, Slot now);

    const CloudSpec* spec_;
    std::map<std::string, std::vector<Quantity>> capacity_;
    std::map<std::string, std::vector<Quantity>> promised_;
    std::map<std::string, std::vector<Placement>> placements_;
};

}  // namespace era
