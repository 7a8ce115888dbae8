#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "era/bdl.hpp"

using namespace era;

namespace {

CloudSpec hourly_spec() {
    CloudSpec spec;
    spec.grid.slot_duration_sec = 3600;
    spec.grid.horizon = 24;
    spec.resources = {{"core", ResourceKind::formal}, {"gb", ResourceKind::formal}};
    Configuration c;
    c.id = "container";
    c.formal.add("core", 2);
    c.formal.add("gb", 6);
    c.actual = c.formal;
    Configuration s;
    s.id = "small";
    s.formal.add("core", 1);
    s.actual = s.formal;
    spec.configurations = {c, s};
    spec.capacity["core"].assign(24, 1000);
    spec.capacity["gb"].assign(24, 3000);
    return spec;
}

}  // namespace

TEST_CASE("reservation with clock times lands on the hour grid") {
    const std::string text = R"({
      "jobId": "batch-7",
      "maxPrice": "100",
      "requests": [
        {"configs": {"container": 100}, "duration": "5h", "window": ["06:00", "18:00"]}
      ]
    })";
    ReservationRequest req = parse_reservation(text, hourly_spec().grid);
    CHECK(req.job_id == "batch-7");
    CHECK(req.max_price == Money::from_units(100));
    REQUIRE(req.requests.size() == 1);
    CHECK(req.requests[0].duration == 5);
    CHECK(req.requests[0].arrival == 6);
    CHECK(req.requests[0].deadline == 18);
    CHECK(req.requests[0].configs.at("container") == 100);
    // submit defaults to the earliest window start
    CHECK(req.submit_time == 6);
}

TEST_CASE("off-grid times round conservatively") {
    TimeGrid grid{3600, 24};
    const std::string text = R"({
      "jobId": "j", "maxPrice": 10,
      "requests": [{"configs": {"small": 1}, "duration": "90m", "window": ["06:30", "17:30"]}]
    })";
    ReservationRequest req = parse_reservation(text, grid);
    CHECK(req.requests[0].duration == 2);   // 90 min rounds up
    CHECK(req.requests[0].arrival == 7);    // start rounds up
    CHECK(req.requests[0].deadline == 17);  // end rounds down
}

TEST_CASE("integer slots and duration suffixes pass through") {
    TimeGrid grid{60, 120};
    const std::string text = R"({
      "jobId": "j", "maxPrice": "2.5", "submitTime": 1, "class": "gold",
      "requests": [
        {"configs": {"small": 2}, "duration": 3, "window": [5, 30]},
        {"configs": {"small": 1}, "duration": "45s", "window": ["10m", "40m"]}
      ]
    })";
    ReservationRequest req = parse_reservation(text, grid);
    CHECK(req.submit_time == 1);
    CHECK(req.job_class == "gold");
    REQUIRE(req.requests.size() == 2);
    CHECK(req.requests[1].duration == 1);  // 45 s rounds up to one minute slot
    CHECK(req.requests[1].arrival == 10);
    CHECK(req.requests[1].deadline == 40);
}

TEST_CASE("malformed reservations are rejected") {
    TimeGrid grid{3600, 24};
    CHECK_THROWS_AS(parse_reservation("{", grid), ParseError);
    CHECK_THROWS_AS(parse_reservation(R"({"maxPrice": 1, "requests": []})", grid), ParseError);
    CHECK_THROWS_AS(parse_reservation(R"({"jobId": "j", "maxPrice": 1, "requests": []})", grid),
                    ParseError);
    CHECK_THROWS_AS(
        parse_reservation(
            R"({"jobId": "j", "maxPrice": 1, "operator": "OR",
                "requests": [{"configs": {"small": 1}, "duration": 1, "window": [0, 2]}]})",
            grid),
        ParseError);
    CHECK_THROWS_AS(
        parse_reservation(
            R"({"jobId": "j", "maxPrice": 1,
                "requests": [{"configs": {"small": 1}, "duration": "10x", "window": [0, 2]}]})",
            grid),
        ParseError);
}

TEST_CASE("serialize then parse is the identity on slot-valued requests") {
    TimeGrid grid{3600, 48};
    std::mt19937_64 gen(5);
    for (int iter = 0; iter < 100; ++iter) {
        ReservationRequest req;
        req.job_id = "job-" + std::to_string(iter);
        req.max_price = Money::from_raw(static_cast<std::int64_t>(gen() % 10000000));
        req.submit_time = static_cast<Slot>(gen() % 10);
        if (gen() % 2) req.job_class = "c" + std::to_string(gen() % 3);
        const int entries = 1 + static_cast<int>(gen() % 3);
        for (int e = 0; e < entries; ++e) {
            ResourceRequest r;
            r.configs["small"] = static_cast<Quantity>(1 + gen() % 5);
            if (gen() % 2) r.configs["container"] = static_cast<Quantity>(1 + gen() % 3);
            r.duration = static_cast<Slot>(1 + gen() % 6);
            r.arrival = req.submit_time + static_cast<Slot>(gen() % 5);
            r.deadline = r.arrival + r.duration + static_cast<Slot>(gen() % 8);
            req.requests.push_back(std::move(r));
        }
        ReservationRequest back = parse_reservation(serialize_reservation(req), grid);
        CHECK(back.job_id == req.job_id);
        CHECK(back.max_price == req.max_price);
        CHECK(back.submit_time == req.submit_time);
        CHECK(back.job_class == req.job_class);
        REQUIRE(back.requests.size() == req.requests.size());
        for (std::size_t i = 0; i < req.requests.size(); ++i) {
            CHECK(back.requests[i].configs == req.requests[i].configs);
            CHECK(back.requests[i].duration == req.requests[i].duration);
            CHECK(back.requests[i].arrival == req.requests[i].arrival);
            CHECK(back.requests[i].deadline == req.requests[i].deadline);
        }
    }
}

TEST_CASE("trace rows merge by job and seq") {
    CloudSpec spec = hourly_spec();
    std::istringstream in(
        "submitTime,jobId,seq,configId,count,durationSlots,arrivalSlot,deadlineSlot,value,class\n"
        "0,a,0,small,2,2,0,6,10,web\n"
        "0,a,0,container,1,2,0,6,10,web\n"
        "0,a,1,small,1,1,2,8,10,web\n"
        "1,b,0,small,3,1,1,4,5,\n");
    TraceParseResult res = parse_trace(in, spec);
    REQUIRE(res.trace.requests.size() == 2);
    const ReservationRequest& a = res.trace.requests[0];
    REQUIRE(a.requests.size() == 2);
    CHECK(a.requests[0].configs.at("small") == 2);
    CHECK(a.requests[0].configs.at("container") == 1);
    CHECK(a.requests[1].configs.size() == 1);
    CHECK(a.job_class == "web");
    CHECK(res.trace.requests[1].job_id == "b");
    CHECK(res.trace.requests[1].job_class.empty());
}

TEST_CASE("trace ordering is stable within a submit slot") {
    CloudSpec spec = hourly_spec();
    std::istringstream in(
        "submitTime,jobId,seq,configId,count,durationSlots,arrivalSlot,deadlineSlot,value,class\n"
        "3,z,0,small,1,1,3,6,1,\n"
        "3,a,0,small,1,1,3,6,1,\n"
        "1,m,0,small,1,1,1,6,1,\n");
    TraceParseResult res = parse_trace(in, spec);
    REQUIRE(res.trace.requests.size() == 3);
    CHECK(res.trace.requests[0].job_id == "m");
    CHECK(res.trace.requests[1].job_id == "z");  // input order kept for equal submits
    CHECK(res.trace.requests[2].job_id == "a");
}

TEST_CASE("non-contiguous job rows are duplicates") {
    CloudSpec spec = hourly_spec();
    std::istringstream in(
        "submitTime,jobId,seq,configId,count,durationSlots,arrivalSlot,deadlineSlot,value,class\n"
        "0,a,0,small,1,1,0,4,1,\n"
        "0,b,0,small,1,1,0,4,1,\n"
        "0,a,1,small,1,1,0,4,1,\n");
    CHECK_THROWS_WITH_AS(parse_trace(in, spec), doctest::Contains("duplicate job id"), ParseError);
}

TEST_CASE("strict mode reports the offending line, lenient mode skips") {
    CloudSpec spec = hourly_spec();
    const std::string text =
        "submitTime,jobId,seq,configId,count,durationSlots,arrivalSlot,deadlineSlot,value,class\n"
        "0,good,0,small,1,1,0,4,1,\n"
        "0,bad,0,small,1,5,0,3,1,\n";  // window shorter than duration

    std::istringstream strict_in(text);
    try {
        parse_trace(strict_in, spec, true);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }

    std::istringstream lenient_in(text);
    TraceParseResult res = parse_trace(lenient_in, spec, false);
    CHECK(res.trace.requests.size() == 1);
    REQUIRE(res.skipped.size() == 1);
    CHECK(res.skipped[0].line == 3);
}

TEST_CASE("header and field count are enforced") {
    CloudSpec spec = hourly_spec();
    std::istringstream missing("");
    CHECK_THROWS_AS(parse_trace(missing, spec), ParseError);
    std::istringstream wrong("time,job\n");
    CHECK_THROWS_AS(parse_trace(wrong, spec), ParseError);
    std::istringstream short_row(
        "submitTime,jobId,seq,configId,count,durationSlots,arrivalSlot,deadlineSlot,value,class\n"
        "0,a,0,small,1\n");
    CHECK_THROWS_AS(parse_trace(short_row, spec), ParseError);
}

TEST_CASE("write then parse reproduces the trace") {
    CloudSpec spec = hourly_spec();
    std::istringstream in(
        "submitTime,jobId,seq,configId,count,durationSlots,arrivalSlot,deadlineSlot,value,class\n"
        "0,a,0,small,2,2,0,6,10.5000,web\n"
        "0,a,1,container,1,1,2,8,10.5000,web\n"
        "2,b,0,small,3,1,2,4,5.0000,\n");
    WorkloadTrace trace = parse_trace(in, spec).trace;
    std::ostringstream out;
    write_trace(out, trace);
    std::istringstream round(out.str());
    WorkloadTrace back = parse_trace(round, spec).trace;
    REQUIRE(back.requests.size() == trace.requests.size());
    for (std::size_t i = 0; i < trace.requests.size(); ++i) {
        CHECK(back.requests[i].job_id == trace.requests[i].job_id);
        CHECK(back.requests[i].max_price == trace.requests[i].max_price);
        CHECK(back.requests[i].requests.size() == trace.requests[i].requests.size());
    }
}
