#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "era/workload.hpp"

using namespace era;

namespace {

CloudSpec core_spec(Slot horizon, Quantity capacity) {
    CloudSpec spec;
    spec.grid.slot_duration_sec = 3600;
    spec.grid.horizon = horizon;
    spec.resources = {{"core", ResourceKind::formal}};
    Configuration c;
    c.id = "core2";
    c.formal.add("core", 2);
    c.actual = c.formal;
    spec.configurations = {c};
    spec.capacity["core"].assign(horizon, capacity);
    return spec;
}

JobClassSpec basic_class(const std::string& name, double rate, int count) {
    JobClassSpec c;
    c.name = name;
    c.config_id = "core2";
    c.arrival_rate_per_slot = rate;
    c.count_target = count;
    c.width = {DistributionSpec::Kind::constant, 3, 0};
    c.duration = {DistributionSpec::Kind::constant, 2, 0};
    c.laxity = {DistributionSpec::Kind::constant, 4, 0};
    c.unit_value = {DistributionSpec::Kind::constant, 5, 0};
    return c;
}

std::string trace_bytes(const WorkloadTrace& t) {
    std::ostringstream out;
    write_trace(out, t);
    return out.str();
}

}  // namespace

TEST_CASE("sampler edge cases") {
    Rng rng(1);
    CHECK(rng.poisson(0.0) == 0);
    CHECK(rng.uniform_int(4, 4) == 4);
    CHECK(rng.uniform_int(7, 3) == 7);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(rng.exponential(2.0) >= 0.0);
        const std::int64_t k = rng.uniform_int(-3, 3);
        CHECK(k >= -3);
        CHECK(k <= 3);
    }
}

TEST_CASE("distribution sampling respects bounds") {
    Rng rng(9);
    DistributionSpec u{DistributionSpec::Kind::uniform_real, 1.5, 2.5};
    DistributionSpec e{DistributionSpec::Kind::exponential, 3.0, 0};
    DistributionSpec c{DistributionSpec::Kind::constant, 42.0, 0};
    for (int i = 0; i < 200; ++i) {
        const double x = u.sample(rng);
        CHECK(x >= 1.5);
        CHECK(x < 2.5);
        CHECK(e.sample(rng) >= 0.0);
        CHECK(c.sample(rng) == 42.0);
    }
}

TEST_CASE("generation is deterministic per seed") {
    CloudSpec spec = core_spec(48, 100);
    std::vector<JobClassSpec> classes = {basic_class("a", 2.0, 40), basic_class("b", 1.0, 20)};
    classes[1].duration = {DistributionSpec::Kind::uniform_int, 1, 5};
    classes[1].unit_value = {DistributionSpec::Kind::uniform_real, 0.5, 2.0};

    GenerateResult r1 = generate_workload(classes, spec, 123);
    GenerateResult r2 = generate_workload(classes, spec, 123);
    CHECK(trace_bytes(r1.trace) == trace_bytes(r2.trace));

    GenerateResult r3 = generate_workload(classes, spec, 124);
    CHECK(trace_bytes(r1.trace) != trace_bytes(r3.trace));
}

TEST_CASE("generated jobs are valid and priced from their shape") {
    CloudSpec spec = core_spec(48, 100);
    std::vector<JobClassSpec> classes = {basic_class("web", 2.0, 30)};
    GenerateResult r = generate_workload(classes, spec, 7);
    CHECK(r.warnings.empty());
    CHECK(r.trace.requests.size() == 30);
    Slot prev_submit = 0;
    for (const ReservationRequest& job : r.trace.requests) {
        CHECK(validate_request(job, spec).ok());
        CHECK(job.job_class == "web");
        CHECK(job.submit_time >= prev_submit);
        prev_submit = job.submit_time;
        // value = unitValue x width x formal units x duration = 5 x 3 x 2 x 2
        CHECK(job.max_price == Money::from_units(60));
        const ResourceRequest& req = job.requests[0];
        CHECK(req.arrival == job.submit_time);
        CHECK(req.deadline <= 48);
        CHECK(req.deadline - req.arrival >= req.duration);
    }
}

TEST_CASE("deadlines clip to the horizon") {
    CloudSpec spec = core_spec(10, 100);
    JobClassSpec cls = basic_class("x", 5.0, 50);
    cls.laxity = {DistributionSpec::Kind::constant, 100, 0};
    GenerateResult r = generate_workload({cls}, spec, 3);
    CHECK(!r.trace.requests.empty());
    for (const ReservationRequest& job : r.trace.requests) {
        CHECK(job.requests[0].deadline == 10);
        CHECK(validate_request(job, spec).ok());
    }
}

TEST_CASE("zero rate produces nothing and a warning") {
    CloudSpec spec = core_spec(10, 100);
    GenerateResult r = generate_workload({basic_class("idle", 0.0, 5)}, spec, 1);
    CHECK(r.trace.requests.empty());
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("idle") != std::string::npos);
}

TEST_CASE("unknown configuration id is a hard error") {
    CloudSpec spec = core_spec(10, 100);
    JobClassSpec cls = basic_class("bad", 1.0, 5);
    cls.config_id = "nope";
    CHECK_THROWS_AS(generate_workload({cls}, spec, 1), std::invalid_argument);
}

TEST_CASE("augmenting a shape-only trace adds windows and values") {
    CloudSpec spec = core_spec(10, 100);
    WorkloadTrace raw;
    ReservationRequest j;
    j.job_id = "r1";
    j.job_class = "gold";
    j.submit_time = 2;
    ResourceRequest r;
    r.configs["core2"] = 2;
    r.duration = 3;
    j.requests.push_back(r);
    raw.requests.push_back(j);

    ReservationRequest tail = j;
    tail.job_id = "r2";
    tail.job_class = "";
    tail.submit_time = 9;  // 3 slots no longer fit before the horizon
    raw.requests.push_back(tail);

    ValueRule values;
    values.default_unit_value = Money::from_units(1);
    values.per_class["gold"] = Money::from_units(4);
    DistributionSpec laxity{DistributionSpec::Kind::constant, 2, 0};
    AugmentResult out = augment_trace(raw, values, laxity, spec, 5);

    REQUIRE(out.trace.requests.size() == 1);
    REQUIRE(out.flagged.size() == 1);
    CHECK(out.flagged[0] == "r2");
    const ReservationRequest& a = out.trace.requests[0];
    CHECK(a.requests[0].arrival == 2);
    CHECK(a.requests[0].deadline == 7);  // arrival + duration + laxity
    // 2 x core2 x 3 slots = 12 unit-slots at 4 each
    CHECK(a.max_price == Money::from_units(48));
}
