#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "era/domain.hpp"

using namespace era;

namespace {

CloudSpec two_resource_spec() {
    CloudSpec spec;
    spec.grid.slot_duration_sec = 3600;
    spec.grid.horizon = 20;
    spec.resources = {{"core", ResourceKind::formal}, {"gb", ResourceKind::formal}};
    Configuration a;
    a.id = "confA";
    a.formal.add("core", 4);
    a.formal.add("gb", 7);
    a.actual = a.formal;
    Configuration b;
    b.id = "confB";
    b.formal.add("core", 1);
    b.actual.add("core", 1);
    b.actual.add("gb", 1);
    spec.configurations = {a, b};
    spec.capacity["core"].assign(20, 100);
    spec.capacity["gb"].assign(20, 200);
    return spec;
}

}  // namespace

TEST_CASE("money parse and print") {
    CHECK(Money::parse("100").str() == "100.0000");
    CHECK(Money::parse("-3.5").raw() == -35000);
    CHECK(Money::parse("0.6500") == Money::from_raw(6500));
    CHECK(Money::infinity().str() == "inf");
    CHECK_THROWS_AS(Money::parse("1.00001"), std::invalid_argument);
    CHECK_THROWS_AS(Money::parse("abc"), std::invalid_argument);
}

TEST_CASE("money arithmetic saturates at the sentinel") {
    Money inf = Money::infinity();
    CHECK((inf + Money::from_units(5)).is_infinite());
    CHECK((Money::from_units(5) + inf).is_infinite());
    CHECK((inf * 3).is_infinite());
    CHECK(Money::from_units(7).div(2) == Money::parse("3.5"));
    // rounding to nearest, ties away from zero
    CHECK(Money::from_raw(3).div(2) == Money::from_raw(2));
    CHECK(Money::from_raw(-3).div(2) == Money::from_raw(-2));
}

TEST_CASE("grid rounding: arrivals up, deadlines down, durations up") {
    TimeGrid g{3600, 24};
    CHECK(g.arrival_slot(3600) == 1);
    CHECK(g.arrival_slot(3601) == 2);
    CHECK(g.deadline_slot(7199) == 1);
    CHECK(g.deadline_slot(7200) == 2);
    CHECK(g.duration_slots(1) == 1);
    CHECK(g.duration_slots(3600) == 1);
    CHECK(g.duration_slots(3601) == 2);
}

TEST_CASE("bundle algebra") {
    Bundle b;
    b.add("core", 4);
    b.add("gb", 7);
    Bundle tripled = b * 3;
    CHECK(tripled.get("core") == 12);
    CHECK(tripled.get("gb") == 21);
    CHECK(tripled.total() == 33);

    Bundle c;
    c.add("core", 1);
    c += b;
    CHECK(c.get("core") == 5);
    CHECK(c.get("gb") == 7);
    CHECK(b.get("ssd") == 0);
}

TEST_CASE("charged demand multiplies config bundles by counts") {
    CloudSpec spec = two_resource_spec();
    ResourceRequest req;
    req.configs["confA"] = 3;
    req.duration = 2;
    req.arrival = 0;
    req.deadline = 5;
    Bundle d = charged_demand(req, spec);
    CHECK(d.get("core") == 12);
    CHECK(d.get("gb") == 21);

    // 100 containers of a 2-core 6GB shape
    CloudSpec big = two_resource_spec();
    Configuration cont;
    cont.id = "container";
    cont.formal.add("core", 2);
    cont.formal.add("gb", 6);
    cont.actual = cont.formal;
    big.configurations.push_back(cont);
    ResourceRequest r2;
    r2.configs["container"] = 100;
    r2.duration = 1;
    r2.deadline = 1;
    Bundle d2 = charged_demand(r2, big);
    CHECK(d2.get("core") == 200);
    CHECK(d2.get("gb") == 600);
}

TEST_CASE("formal vs charged demand differ when the actual bundle does") {
    CloudSpec spec = two_resource_spec();
    ResourceRequest req;
    req.configs["confB"] = 5;
    req.duration = 1;
    req.deadline = 1;
    CHECK(formal_demand(req, spec).get("gb") == 0);
    CHECK(formal_demand(req, spec).get("core") == 5);
    CHECK(charged_demand(req, spec).get("gb") == 5);
}

TEST_CASE("demand is additive over merged requests") {
    CloudSpec spec = two_resource_spec();
    std::mt19937_64 gen(99);
    for (int iter = 0; iter < 50; ++iter) {
        ResourceRequest r1, r2, merged;
        r1.configs["confA"] = static_cast<Quantity>(gen() % 5 + 1);
        r2.configs["confB"] = static_cast<Quantity>(gen() % 5 + 1);
        merged.configs = r1.configs;
        merged.configs.insert(r2.configs.begin(), r2.configs.end());
        for (ResourceRequest* r : {&r1, &r2, &merged}) {
            r->duration = 1;
            r->deadline = 1;
        }
        Bundle sum = charged_demand(r1, spec);
        sum += charged_demand(r2, spec);
        CHECK(sum == charged_demand(merged, spec));
    }
}

TEST_CASE("validation accepts a feasible window") {
    CloudSpec spec = two_resource_spec();
    ReservationRequest req;
    req.job_id = "j1";
    req.max_price = Money::from_units(50);
    ResourceRequest r;
    r.configs["confA"] = 1;
    r.duration = 2;
    r.arrival = 3;
    r.deadline = 10;
    req.requests.push_back(r);
    CHECK(validate_request(req, spec).ok());
}

TEST_CASE("validation flags bad windows, configs and prices") {
    CloudSpec spec = two_resource_spec();
    ReservationRequest req;
    req.job_id = "j1";
    req.max_price = Money::from_units(50);

    SUBCASE("window shorter than duration") {
        ResourceRequest r;
        r.configs["confA"] = 1;
        r.duration = 5;
        r.arrival = 3;
        r.deadline = 7;
        req.requests.push_back(r);
        auto v = validate_request(req, spec);
        REQUIRE_FALSE(v.ok());
        CHECK(v.violations[0].request_index == 0);
    }
    SUBCASE("unknown configuration") {
        ResourceRequest r;
        r.configs["nope"] = 1;
        r.duration = 1;
        r.deadline = 5;
        req.requests.push_back(r);
        CHECK_FALSE(validate_request(req, spec).ok());
    }
    SUBCASE("deadline beyond horizon") {
        ResourceRequest r;
        r.configs["confA"] = 1;
        r.duration = 1;
        r.arrival = 0;
        r.deadline = 25;
        req.requests.push_back(r);
        CHECK_FALSE(validate_request(req, spec).ok());
    }
    SUBCASE("negative price") {
        ResourceRequest r;
        r.configs["confA"] = 1;
        r.duration = 1;
        r.deadline = 5;
        req.requests.push_back(r);
        req.max_price = Money::parse("-1");
        CHECK_FALSE(validate_request(req, spec).ok());
    }
    SUBCASE("empty request list") {
        CHECK_FALSE(validate_request(req, spec).ok());
    }
}

TEST_CASE("cloud spec structural check") {
    CloudSpec spec = two_resource_spec();
    CHECK_NOTHROW(spec.check());
    SUBCASE("missing capacity series") {
        spec.capacity.erase("gb");
        CHECK_THROWS_AS(spec.check(), std::invalid_argument);
    }
    SUBCASE("capacity length mismatch") {
        spec.capacity["core"].resize(3);
        CHECK_THROWS_AS(spec.check(), std::invalid_argument);
    }
    SUBCASE("duplicate configuration id") {
        spec.configurations.push_back(spec.configurations[0]);
        CHECK_THROWS_AS(spec.check(), std::invalid_argument);
    }
}
