#include "era/domain.hpp"

#include <set>
#include <stdexcept>

namespace era {

const Configuration* CloudSpec::find_config(const std::string& id) const {
    for (const auto& c : configurations)
        if (c.id == id) return &c;
    return nullptr;
}

const ResourceType* CloudSpec::find_resource(const std::string& id) const {
    for (const auto& r : resources)
        if (r.id == id) return &r;
    return nullptr;
}

void CloudSpec::check() const {
    if (!grid.valid()) throw std::invalid_argument("invalid time grid");
    if (tick_interval_sec <= 0) throw std::invalid_argument("tickInterval must be positive");
    std::set<std::string> ids;
    for (const auto& r : resources)
        if (!ids.insert(r.id).second)
            throw std::invalid_argument("duplicate resource id: " + r.id);
    std::set<std::string> cids;
    for (const auto& c : configurations) {
        if (!cids.insert(c.id).second)
            throw std::invalid_argument("duplicate configuration id: " + c.id);
        if (c.formal.quantities.empty())
            throw std::invalid_argument("configuration " + c.id + " has empty formal bundle");
        for (const auto& [r, q] : c.formal.quantities) {
            const ResourceType* rt = find_resource(r);
            if (!rt) throw std::invalid_argument("configuration " + c.id + " references unknown resource " + r);
            if (rt->kind != ResourceKind::formal)
                throw std::invalid_argument("formal bundle of " + c.id + " uses virtual resource " + r);
            if (q < 0) throw std::invalid_argument("negative quantity in " + c.id);
            // Shared resources: actual covers at least the formal amount.
            if (c.actual.get(r) < q)
                throw std::invalid_argument("configuration " + c.id + ": actual < formal for resource " + r);
        }
        for (const auto& [r, q] : c.actual.quantities) {
            if (!find_resource(r))
                throw std::invalid_argument("configuration " + c.id + " references unknown resource " + r);
            if (q < 0) throw std::invalid_argument("negative quantity in " + c.id);
        }
    }
    for (const auto& r : resources) {
        auto it = capacity.find(r.id);
        if (it == capacity.end())
            throw std::invalid_argument("missing capacity series for resource " + r.id);
        if (static_cast<Slot>(it->second.size()) != grid.horizon)
            throw std::invalid_argument("capacity series length mismatch for " + r.id);
        for (Quantity q : it->second)
            if (q < 0) throw std::invalid_argument("negative capacity for " + r.id);
    }
}

ValidationResult validate_request(const ReservationRequest& req, const CloudSpec& spec) {
    ValidationResult res;
    auto flag = [&](int idx, std::string msg) { res.violations.push_back({idx, std::move(msg)}); };

    if (req.job_id.empty()) flag(-1, "empty job id");
    if (req.requests.empty()) flag(-1, "empty request list");
    if (req.max_price < Money::zero()) flag(-1, "negative max price");

    for (int i = 0; i < static_cast<int>(req.requests.size()); ++i) {
        const ResourceRequest& r = req.requests[i];
        if (r.duration < 1) flag(i, "duration must be at least one slot");
        if (r.arrival >= r.deadline) flag(i, "arrival not before deadline");
        if (r.deadline - r.arrival < r.duration) flag(i, "window shorter than duration");
        if (r.arrival < 0 || r.deadline > spec.grid.horizon) flag(i, "window outside horizon");
        if (req.submit_time > r.arrival) flag(i, "submit time after arrival");
        if (r.configs.empty()) flag(i, "empty configuration map");
        for (const auto& [cid, count] : r.configs) {
            if (!spec.find_config(cid)) flag(i, "unknown configuration: " + cid);
            if (count < 1) flag(i, "configuration count must be at least 1");
        }
    }
    return res;
}

static Bundle demand_of(const ResourceRequest& req, const CloudSpec& spec, bool actual) {
    Bundle b;
    for (const auto& [cid, count] : req.configs) {
        const Configuration* c = spec.find_config(cid);
        if (!c) throw std::invalid_argument("unknown configuration: " + cid);
        b += (actual ? c->actual : c->formal) * count;
    }
    return b;
}

Bundle charged_demand(const ResourceRequest& req, const CloudSpec& spec) {
    return demand_of(req, spec, true);
}

Bundle formal_demand(const ResourceRequest& req, const CloudSpec& spec) {
    return demand_of(req, spec, false);
}

}  // namespace era
