#pragma once

#include <optional>
#include <vector>

#include "era/money.hpp"

namespace era {

struct CurvePoint {
    Money price;
    double quantity;  // cumulative demand at any price <= this breakpoint's price
};

/// Non-increasing step function price -> predicted quantity. Breakpoints
/// are stored with strictly decreasing prices and strictly increasing
/// cumulative quantities; demand(p) is the quantity at the lowest
/// breakpoint price >= p, and 0 above all breakpoints.
class DemandCurve {
public:
    static constexpr double kEps = 1e-9;

    DemandCurve() = default;

    /// Build from raw (unit price, quantity) contributions: sorts by
    /// descending price, merges equal prices, accumulates quantities and
    /// drops empty steps.
    static DemandCurve from_contributions(std::vector<CurvePoint> contributions);

    const std::vector<CurvePoint>& points() const { return points_; }
    bool empty() const { return points_.empty(); }
    double max_quantity() const { return points_.empty() ? 0.0 : points_.back().quantity; }

    double demand_at(Money p) const;

    /// Highest price p with demand(p) >= q. q <= 0 yields the infinity
    /// sentinel (any price sells zero); q above the curve's maximum
    /// yields nullopt (no price generates that demand).
    std::optional<Money> inverse_price(double q) const;

    /// Highest price p with demand(p) > q strictly, or zero if predicted
    /// demand never exceeds q. This is the Basic-Econ line-7 query.
    Money highest_price_exceeding(double q) const;

    /// Pointwise scale of all quantities by a nonnegative factor.
    DemandCurve scaled(double factor) const;

private:
    std::vector<CurvePoint> points_;
};

}  // namespace era
