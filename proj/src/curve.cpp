#include "era/curve.hpp"

#include <algorithm>

namespace era {

DemandCurve DemandCurve::from_contributions(std::vector<CurvePoint> contributions) {
    DemandCurve curve;
    std::erase_if(contributions, [](const CurvePoint& c) { return c.quantity <= kEps; });
    std::sort(contributions.begin(), contributions.end(),
              [](const CurvePoint& a, const CurvePoint& b) { return a.price > b.price; });
    double cumulative = 0.0;
    for (const CurvePoint& c : contributions) {
        cumulative += c.quantity;
        if (!curve.points_.empty() && curve.points_.back().price == c.price)
            curve.points_.back().quantity = cumulative;
        else
            curve.points_.push_back({c.price, cumulative});
    }
    return curve;
}

double DemandCurve::demand_at(Money p) const {
    // Quantity of the lowest breakpoint whose price is >= p.
    double q = 0.0;
    for (const CurvePoint& pt : points_) {
        if (pt.price >= p)
            q = pt.quantity;
        else
            break;
    }
    return q;
}

std::optional<Money> DemandCurve::inverse_price(double q) const {
    if (q <= kEps) return Money::infinity();
    // First breakpoint (highest price first) reaching quantity q.
    auto it = std::lower_bound(points_.begin(), points_.end(), q - kEps,
                               [](const CurvePoint& pt, double v) { return pt.quantity < v; });
    if (it == points_.end()) return std::nullopt;
    return it->price;
}

Money DemandCurve::highest_price_exceeding(double q) const {
    auto it = std::upper_bound(points_.begin(), points_.end(), q + kEps,
                               [](double v, const CurvePoint& pt) { return v < pt.quantity; });
    if (it == points_.end()) return Money::zero();
    return it->price;
}

DemandCurve DemandCurve::scaled(double factor) const {
    DemandCurve c;
    if (factor <= 0.0) return c;
    for (const CurvePoint& pt : points_) c.points_.push_back({pt.price, pt.quantity * factor});
    std::erase_if(c.points_, [](const CurvePoint& p) { return p.quantity <= kEps; });
    return c;
}

}  // namespace era
