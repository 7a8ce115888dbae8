#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "era/money.hpp"

namespace era {

using Slot = std::int32_t;
using Quantity = std::int64_t;

/// Discrete time grid: everything in the system is an integer slot index
/// in [0, horizon).
struct TimeGrid {
    std::int64_t slot_duration_sec = 1;
    Slot horizon = 1;

    bool valid() const { return slot_duration_sec > 0 && horizon >= 1; }

    /// Wall-clock seconds to slots; arrivals round up, deadlines round
    /// down, durations round up (never promise finer than the grid).
    Slot arrival_slot(std::int64_t sec) const {
        return static_cast<Slot>((sec + slot_duration_sec - 1) / slot_duration_sec);
    }
    Slot deadline_slot(std::int64_t sec) const {
        return static_cast<Slot>(sec / slot_duration_sec);
    }
    Slot duration_slots(std::int64_t sec) const {
        return static_cast<Slot>((sec + slot_duration_sec - 1) / slot_duration_sec);
    }
};

enum class ResourceKind { formal, virtual_ };

struct ResourceType {
    std::string id;
    ResourceKind kind = ResourceKind::formal;
};

/// Additive map resource id -> nonnegative quantity.
struct Bundle {
    std::map<std::string, Quantity> quantities;

    Quantity get(const std::string& r) const {
        auto it = quantities.find(r);
        return it == quantities.end() ? 0 : it->second;
    }
    void add(const std::string& r, Quantity q) {
        if (q != 0) quantities[r] += q;
    }
    Bundle& operator+=(const Bundle& o) {
        for (const auto& [r, q] : o.quantities) add(r, q);
        return *this;
    }
    Bundle operator*(Quantity k) const {
        Bundle b;
        for (const auto& [r, q] : quantities) b.add(r, q * k);
        return b;
    }
    bool operator==(const Bundle&) const = default;

    /// Total units across all resources.
    Quantity total() const {
        Quantity t = 0;
        for (const auto& [r, q] : quantities) t += q;
        return t;
    }
};

/// A sellable configuration: the formal bundle is what the user sees and
/// what unit pricing counts; the actual bundle (formal and/or virtual
/// resources) is what gets charged against capacity.
struct Configuration {
    std::string id;
    Bundle formal;
    Bundle actual;
};

struct CloudSpec {
    TimeGrid grid;
    std::vector<ResourceType> resources;
    std::vector<Configuration> configurations;
    std::map<std::string, std::vector<Quantity>> capacity;  // per slot, length = horizon
    std::int64_t tick_interval_sec = 1;

    const Configuration* find_config(const std::string& id) const;
    const ResourceType* find_resource(const std::string& id) const;

    /// Throws std::invalid_argument on structural problems (missing
    /// capacity series, negative quantities, duplicate ids).
    void check() const;
};

/// One entry of a reservation's AND list: configs x duration x window.
struct ResourceRequest {
    std::map<std::string, Quantity> configs;  // config id -> count >= 1
    Slot duration = 1;                        // T
    Slot arrival = 0;                         // A (inclusive)
    Slot deadline = 1;                        // D (exclusive)
};

struct ReservationRequest {
    std::string job_id;
    std::vector<ResourceRequest> requests;
    Money max_price;  // V
    Slot submit_time = 0;
    std::string job_class;  // metrics label, empty if none
};

struct Violation {
    int request_index = -1;  // -1: whole-reservation problem
    std::string message;
};

struct ValidationResult {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// Structural validation of a request against a cloud spec; violations
/// are data, not failures.
ValidationResult validate_request(const ReservationRequest& req, const CloudSpec& spec);

/// Per-slot bundle charged against capacity while the request runs:
/// sum over (config, count) of count x config.actual.
Bundle charged_demand(const ResourceRequest& req, const CloudSpec& spec);

/// Per-slot bundle the user sees (and that unit pricing counts):
/// sum over (config, count) of count x config.formal.
Bundle formal_demand(const ResourceRequest& req, const CloudSpec& spec);

}  // namespace era
