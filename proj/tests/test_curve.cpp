#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "era/curve.hpp"

using namespace era;

namespace {

DemandCurve curve_of(std::initializer_list<std::pair<const char*, double>> pts) {
    std::vector<CurvePoint> v;
    for (const auto& [p, q] : pts) v.push_back({Money::parse(p), q});
    return DemandCurve::from_contributions(std::move(v));
}

// Reference answer by scanning every candidate price: all breakpoint
// prices plus one raw unit on either side, descending.
std::optional<Money> scan_inverse(const DemandCurve& c, double q) {
    if (q <= 0.0) return Money::infinity();
    std::vector<Money> candidates;
    for (const CurvePoint& pt : c.points()) {
        candidates.push_back(Money::from_raw(pt.price.raw() + 1));
        candidates.push_back(pt.price);
        if (pt.price.raw() > 0) candidates.push_back(Money::from_raw(pt.price.raw() - 1));
    }
    candidates.push_back(Money::zero());
    std::sort(candidates.begin(), candidates.end(), std::greater<>());
    for (Money p : candidates)
        if (c.demand_at(p) >= q - DemandCurve::kEps) return p;
    return std::nullopt;
}

Money scan_exceeding(const DemandCurve& c, double q) {
    std::vector<Money> candidates;
    for (const CurvePoint& pt : c.points()) candidates.push_back(pt.price);
    std::sort(candidates.begin(), candidates.end(), std::greater<>());
    for (Money p : candidates)
        if (c.demand_at(p) > q + DemandCurve::kEps) return p;
    return Money::zero();
}

}  // namespace

TEST_CASE("empty curve") {
    DemandCurve c;
    CHECK(c.demand_at(Money::zero()) == 0.0);
    CHECK(c.inverse_price(1.0) == std::nullopt);
    CHECK(c.inverse_price(0.0) == Money::infinity());
    CHECK(c.highest_price_exceeding(0.0) == Money::zero());
}

TEST_CASE("two-step curve lookups") {
    DemandCurve c = curve_of({{"5", 8}, {"2", 4}});  // cumulative: 8 @ >=5... wait, sorted desc
    // contributions (5,8) and (2,4) cumulate to breakpoints (5,8), (2,12)
    REQUIRE(c.points().size() == 2);
    CHECK(c.points()[0].quantity == 8);
    CHECK(c.points()[1].quantity == 12);

    CHECK(c.demand_at(Money::parse("6")) == 0.0);
    CHECK(c.demand_at(Money::parse("5")) == 8.0);
    CHECK(c.demand_at(Money::parse("3")) == 8.0);  // the 4 extra units need price <= 2
    CHECK(c.demand_at(Money::zero()) == 12.0);

    CHECK(c.inverse_price(8.0) == Money::parse("5"));
    CHECK(c.inverse_price(9.0) == Money::parse("2"));
    CHECK(c.inverse_price(12.0) == Money::parse("2"));
    CHECK(c.inverse_price(13.0) == std::nullopt);
    CHECK(c.inverse_price(0.0) == Money::infinity());

    CHECK(c.highest_price_exceeding(7.0) == Money::parse("5"));
    CHECK(c.highest_price_exceeding(8.0) == Money::parse("2"));
    CHECK(c.highest_price_exceeding(11.0) == Money::parse("2"));
    CHECK(c.highest_price_exceeding(12.0) == Money::zero());
}

TEST_CASE("contributions merge equal prices and drop empty steps") {
    DemandCurve c = curve_of({{"3", 2}, {"3", 5}, {"1", 0}, {"7", 1}});
    REQUIRE(c.points().size() == 2);
    CHECK(c.points()[0].price == Money::parse("7"));
    CHECK(c.points()[0].quantity == 1);
    CHECK(c.points()[1].price == Money::parse("3"));
    CHECK(c.points()[1].quantity == 8);
}

TEST_CASE("scaling") {
    DemandCurve c = curve_of({{"5", 8}, {"2", 4}}).scaled(0.5);
    CHECK(c.demand_at(Money::parse("5")) == doctest::Approx(4.0));
    CHECK(c.demand_at(Money::parse("2")) == doctest::Approx(6.0));
    CHECK(curve_of({{"5", 8}}).scaled(0.0).empty());
}

TEST_CASE("curve invariants hold for random inputs") {
    std::mt19937_64 gen(2024);
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<CurvePoint> raw;
        const int n = static_cast<int>(gen() % 12);
        for (int i = 0; i < n; ++i)
            raw.push_back({Money::from_raw(static_cast<std::int64_t>(gen() % 500000)),
                           static_cast<double>(gen() % 30)});
        DemandCurve c = DemandCurve::from_contributions(raw);
        for (std::size_t i = 1; i < c.points().size(); ++i) {
            CHECK(c.points()[i].price < c.points()[i - 1].price);
            CHECK(c.points()[i].quantity > c.points()[i - 1].quantity);
        }
        // demand is non-increasing in price
        double prev = c.demand_at(Money::zero());
        for (const CurvePoint& pt : c.points()) {
            CHECK(c.demand_at(pt.price) <= prev + DemandCurve::kEps);
        }
    }
}

TEST_CASE("inverse agrees with exhaustive price scan on random curves") {
    std::mt19937_64 gen(7);
    for (int iter = 0; iter < 1000; ++iter) {
        std::vector<CurvePoint> raw;
        const int n = 1 + static_cast<int>(gen() % 8);
        for (int i = 0; i < n; ++i)
            raw.push_back({Money::from_raw(static_cast<std::int64_t>(gen() % 200000)),
                           static_cast<double>(1 + gen() % 20)});
        DemandCurve c = DemandCurve::from_contributions(raw);

        for (int k = 0; k < 6; ++k) {
            const double q = static_cast<double>(gen() % 140) / 2.0;
            CHECK(c.inverse_price(q) == scan_inverse(c, q));
            CHECK(c.highest_price_exceeding(q) == scan_exceeding(c, q));
        }
        // exact at every breakpoint quantity
        for (const CurvePoint& pt : c.points()) {
            auto inv = c.inverse_price(pt.quantity);
            REQUIRE(inv.has_value());
            CHECK(*inv == pt.price);
        }
    }
}
