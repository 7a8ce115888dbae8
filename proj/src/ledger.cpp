#include "era/ledger.hpp"

#include <algorithm>
#include <stdexcept>

namespace era {

PlanLedger::PlanLedger(const CloudSpec& spec) : spec_(&spec), capacity_(spec.capacity) {
    for (const ResourceType& r : spec.resources)
        promised_[r.id].assign(spec.grid.horizon, 0);
}

Quantity PlanLedger::capacity(const std::string& resource, Slot t) const {
    return capacity_.at(resource).at(t);
}

Quantity PlanLedger::promised(const std::string& resource, Slot t) const {
    return promised_.at(resource).at(t);
}

Quantity PlanLedger::free_at(const std::string& resource, Slot t) const {
    return capacity(resource, t) - promised(resource, t);
}

bool PlanLedger::fits(const Bundle& b, Slot start, Slot duration) const {
    if (start < 0 || start + duration > horizon()) return false;
    for (const auto& [resource, q] : b.quantities) {
        if (q == 0) continue;
        const auto& cap = capacity_.at(resource);
        const auto& prom = promised_.at(resource);
        for (Slot t = start; t < start + duration; ++t)
            if (prom[t] + q > cap[t]) return false;
    }
    return true;
}

Quantity& PlanLedger::promised_ref(const std::string& resource, Slot t) {
    return promised_.at(resource).at(t);
}

void PlanLedger::add_interval(const Placement& p, Slot from, Slot to, int sign) {
    for (const auto& [resource, q] : p.charged.quantities)
        for (Slot t = from; t < to; ++t) promised_ref(resource, t) += sign * q;
}

void PlanLedger::commit(Placement p) {
    if (!fits(p.charged, p.start, p.duration))
        throw std::logic_error("placement exceeds capacity: " + p.job_id);
    for (const Placement& existing : placements_[p.job_id])
        if (existing.entry == p.entry)
            throw std::logic_error("duplicate placement entry for job " + p.job_id);
    p.effective_end = p.start + p.duration;
    p.state = PlacementState::planned;
    add_interval(p, p.start, p.effective_end, +1);
    placements_[p.job_id].push_back(std::move(p));
}

bool PlanLedger::retract(const std::string& job_id) {
    auto it = placements_.find(job_id);
    if (it == placements_.end()) return false;
    for (const Placement& p : it->second)
        if (p.state == PlacementState::planned || p.state == PlacementState::running)
            add_interval(p, p.start, p.effective_end, -1);
    placements_.erase(it);
    return true;
}

const std::vector<Placement>* PlanLedger::placements_of(const std::string& job_id) const {
    auto it = placements_.find(job_id);
    return it == placements_.end() ? nullptr : &it->second;
}

void PlanLedger::mark_running(const std::string& job_id, Slot now) {
    auto it = placements_.find(job_id);
    if (it == placements_.end()) throw std::invalid_argument("unknown job: " + job_id);
    for (Placement& p : it->second)
        if (p.state == PlacementState::planned && p.start <= now && now < p.effective_end)
            p.state = PlacementState::running;
}

int PlanLedger::finish(const std::string& job_id, Slot now) {
    auto it = placements_.find(job_id);
    if (it == placements_.end()) throw std::invalid_argument("unknown job: " + job_id);
    int released = 0;
    for (Placement& p : it->second) {
        if (p.state == PlacementState::finished || p.state == PlacementState::cancelled) continue;
        const Slot cut = std::clamp<Slot>(now + 1, p.start, p.effective_end);
        released += p.effective_end - cut;
        add_interval(p, cut, p.effective_end, -1);
        p.effective_end = cut;
        p.state = PlacementState::finished;
    }
    return released;
}

void PlanLedger::cancel(const std::string& job_id, Slot now) {
    auto it = placements_.find(job_id);
    if (it == placements_.end()) throw std::invalid_argument("unknown job: " + job_id);
    for (Placement& p : it->second) {
        if (p.state == PlacementState::finished || p.state == PlacementState::cancelled) continue;
        const Slot cut = std::clamp<Slot>(now, p.start, p.effective_end);
        add_interval(p, cut, p.effective_end, -1);
        p.effective_end = cut;
        p.state = PlacementState::cancelled;
    }
}

namespace {

// Ascending price per formal unit-slot; the repair order.
double value_density(const std::vector<Placement>& job) {
    Money price;
    std::int64_t unit_slots = 0;
    for (const Placement& p : job) {
        price += p.price;
        unit_slots += p.formal.total() * p.duration;
    }
    if (unit_slots <= 0) return 0.0;
    return price.to_double() / static_cast<double>(unit_slots);
}

}  // namespace

std::vector<std::string> PlanLedger::repair(const std::string& resource, Slot t, Slot now) {
    std::vector<std::string> cancelled;
    auto over = [&] { return promised(resource, t) > capacity(resource, t); };
    // Two passes: planned-only jobs first, then (forced) running ones.
    for (bool allow_running : {false, true}) {
        while (over()) {
            const std::string* pick = nullptr;
            double pick_density = 0.0;
            for (const auto& [job_id, entries] : placements_) {
                bool covers = false, has_running = false, live = false;
                for (const Placement& p : entries) {
                    if (p.state == PlacementState::finished || p.state == PlacementState::cancelled)
                        continue;
                    live = true;
                    if (p.state == PlacementState::running) has_running = true;
                    if (p.charged.get(resource) > 0 && p.start <= t && t < p.effective_end)
                        covers = true;
                }
                if (!live || !covers || (has_running && !allow_running)) continue;
                const double d = value_density(entries);
                if (!pick || d < pick_density) {
                    pick = &job_id;
                    pick_density = d;
                }
            }
            if (!pick) break;
            std::string job = *pick;
            cancel(job, now);
            cancelled.push_back(job);
        }
        if (!over()) break;
    }
    return cancelled;
}

std::vector<std::string> PlanLedger::adjust_capacity(const std::string& resource, Slot t,
                                                     Quantity delta, Slot now) {
    auto it = capacity_.find(resource);
    if (it == capacity_.end()) throw std::invalid_argument("unknown resource: " + resource);
    it->second.at(t) = std::max<Quantity>(0, it->second.at(t) + delta);
    if (promised(resource, t) > it->second.at(t)) return repair(resource, t, now);
    return {};
}

std::vector<std::pair<std::string, Bundle>> PlanLedger::allocation_at(Slot now) const {
    std::vector<std::pair<std::string, Bundle>> out;
    for (const auto& [job_id, entries] : placements_) {
        Bundle b;
        bool any = false;
        for (const Placement& p : entries) {
            if (p.state == PlacementState::cancelled) continue;
            if (p.state == PlacementState::finished && now >= p.effective_end) continue;
            if (p.start <= now && now < p.effective_end) {
                b += p.charged;
                any = true;
            }
        }
        if (any) out.emplace_back(job_id, std::move(b));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

bool PlanLedger::audit() const {
    std::map<std::string, std::vector<Quantity>> recomputed;
    for (const ResourceType& r : spec_->resources) recomputed[r.id].assign(horizon(), 0);
    for (const auto& [job_id, entries] : placements_)
        for (const Placement& p : entries)
            for (const auto& [resource, q] : p.charged.quantities)
                for (Slot t = p.start; t < p.effective_end; ++t) recomputed[resource][t] += q;
    for (const auto& [resource, series] : recomputed) {
        const auto& prom = promised_.at(resource);
        const auto& cap = capacity_.at(resource);
        for (Slot t = 0; t < horizon(); ++t) {
            if (series[t] != prom[t]) return false;
            if (prom[t] > cap[t]) return false;
        }
    }
    return true;
}

}  // namespace era
