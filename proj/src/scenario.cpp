#include "era/scenario.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace era {
namespace {

using Json = nlohmann::json;

Money money_of(const Json& v) {
    if (v.is_string()) return Money::parse(v.get<std::string>());
    if (v.is_number_integer()) return Money::from_units(v.get<std::int64_t>());
    return Money::from_double(v.get<double>());
}

Bundle bundle_of(const Json& v) {
    Bundle b;
    for (const auto& [r, q] : v.items()) b.add(r, q.get<Quantity>());
    return b;
}

DistributionSpec distribution_of(const Json& v) {
    DistributionSpec d;
    const std::string type = v.at("type").get<std::string>();
    if (type == "constant") {
        d.kind = DistributionSpec::Kind::constant;
        d.a = v.at("value").get<double>();
    } else if (type == "uniformInt") {
        d.kind = DistributionSpec::Kind::uniform_int;
        d.a = v.at("min").get<double>();
        d.b = v.at("max").get<double>();
    } else if (type == "uniformReal") {
        d.kind = DistributionSpec::Kind::uniform_real;
        d.a = v.at("min").get<double>();
        d.b = v.at("max").get<double>();
    } else if (type == "exponential") {
        d.kind = DistributionSpec::Kind::exponential;
        d.a = v.at("mean").get<double>();
    } else {
        throw std::invalid_argument("unknown distribution type: " + type);
    }
    return d;
}

CloudSpec cloud_of(const Json& v) {
    CloudSpec spec;
    spec.grid.slot_duration_sec = v.value("slotDurationSec", std::int64_t{3600});
    spec.grid.horizon = v.at("horizon").get<Slot>();
    spec.tick_interval_sec = v.value("tickIntervalSec", spec.grid.slot_duration_sec);
    for (const Json& r : v.at("resources")) {
        ResourceType rt;
        rt.id = r.at("id").get<std::string>();
        rt.kind = r.value("kind", std::string("formal")) == "virtual" ? ResourceKind::virtual_
                                                                      : ResourceKind::formal;
        spec.resources.push_back(std::move(rt));
    }
    for (const Json& c : v.at("configurations")) {
        Configuration conf;
        conf.id = c.at("id").get<std::string>();
        conf.formal = bundle_of(c.at("formal"));
        conf.actual = c.contains("actual") ? bundle_of(c.at("actual")) : conf.formal;
        spec.configurations.push_back(std::move(conf));
    }
    for (const auto& [resource, series] : v.at("capacity").items()) {
        std::vector<Quantity>& cap = spec.capacity[resource];
        if (series.is_array()) {
            cap = series.get<std::vector<Quantity>>();
            if (static_cast<Slot>(cap.size()) != spec.grid.horizon)
                throw std::invalid_argument("capacity array length mismatch for " + resource);
        } else {
            cap.assign(spec.grid.horizon, series.get<Quantity>());
        }
    }
    return spec;
}

AlgorithmConfig algorithm_of(const Json& v) {
    AlgorithmConfig a;
    const std::string algo = v.at("algo").get<std::string>();
    if (algo == "basicEcon")
        a.kind = AlgorithmKind::basic_econ;
    else if (algo == "firstFit")
        a.kind = AlgorithmKind::first_fit;
    else if (algo == "onDemand")
        a.kind = AlgorithmKind::on_demand;
    else
        throw std::invalid_argument("unknown algorithm: " + algo);
    a.name = v.value("name", std::string());

    if (v.contains("fixedUnitPrice")) a.fixed_unit_price = money_of(v.at("fixedUnitPrice"));
    if (v.contains("priceBand")) {
        PriceBand band;
        band.unit_floor = money_of(v.at("priceBand").at("unitFloor"));
        band.unit_ceiling = money_of(v.at("priceBand").at("unitCeiling"));
        a.price_band = band;
    }
    if (v.contains("predictor")) {
        const Json& p = v.at("predictor");
        const std::string type = p.at("type").get<std::string>();
        if (type == "none")
            a.predictor = PredictorKind::none;
        else if (type == "flat")
            a.predictor = PredictorKind::flat;
        else if (type == "spreading")
            a.predictor = PredictorKind::spreading;
        else if (type == "lp")
            a.predictor = PredictorKind::lp;
        else
            throw std::invalid_argument("unknown predictor type: " + type);
        if (type == "flat" && p.contains("points")) {
            std::vector<CurvePoint> pts;
            for (const Json& pt : p.at("points"))
                pts.push_back({money_of(pt.at("price")), pt.at("quantity").get<double>()});
            a.flat_curve = DemandCurve::from_contributions(std::move(pts));
        }
        const std::string history = p.value("history", std::string("self"));
        if (history == "self")
            a.history_self = true;
        else if (!history.empty())
            a.history_trace_path = history;
        a.predictor_options.period_slots = p.value("periodSlots", 0);
        a.predictor_options.history_slots = p.value("historySlots", 0);
    }
    return a;
}

JobClassSpec class_of(const Json& v) {
    JobClassSpec c;
    c.name = v.at("name").get<std::string>();
    c.config_id = v.at("configId").get<std::string>();
    c.arrival_rate_per_slot = v.at("arrivalRatePerSlot").get<double>();
    c.count_target = v.at("count").get<int>();
    c.width = distribution_of(v.at("width"));
    c.duration = distribution_of(v.at("durationSlots"));
    c.laxity = distribution_of(v.at("laxitySlots"));
    c.unit_value = distribution_of(v.at("unitValue"));
    return c;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text, const std::string& base_dir) {
    Json doc = Json::parse(json_text);
    Scenario s;
    s.name = doc.value("name", std::string("scenario"));
    s.spec = cloud_of(doc.at("cloud"));

    const Json& wl = doc.at("workload");
    if (wl.contains("classes")) {
        for (const Json& c : wl.at("classes")) s.classes.push_back(class_of(c));
        s.workload_seed = wl.value("seed", std::uint64_t{0});
    } else if (wl.contains("trace")) {
        s.trace_path = wl.at("trace").get<std::string>();
        if (!base_dir.empty() && !s.trace_path.empty() && s.trace_path.front() != '/')
            s.trace_path = base_dir + "/" + s.trace_path;
    } else {
        throw std::invalid_argument("workload needs either classes or trace");
    }

    if (doc.contains("capacityFromDemand"))
        for (const auto& [r, f] : doc.at("capacityFromDemand").items())
            s.capacity_from_demand[r] = f.get<double>();

    for (const Json& a : doc.at("algorithms")) s.algorithms.push_back(algorithm_of(a));
    s.seed = doc.value("seed", std::uint64_t{0});

    if (doc.contains("failurePlan")) {
        for (const Json& f : doc.at("failurePlan")) {
            CapacityDelta d;
            d.slot = f.at("slot").get<Slot>();
            d.resource = f.at("resource").get<std::string>();
            d.delta = f.at("delta").get<Quantity>();
            s.failure_plan.push_back(std::move(d));
        }
    }
    if (doc.contains("earlyTermination")) {
        s.early_termination.enabled = true;
        s.early_termination.min_ratio = doc.at("earlyTermination").value("minRatio", 1.0);
        s.early_termination.max_ratio = doc.at("earlyTermination").value("maxRatio", 1.0);
    }
    s.ticks_per_slot = doc.value("ticksPerSlot", 1);
    s.early_start = doc.value("earlyStart", false);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string dir;
    if (auto pos = path.find_last_of('/'); pos != std::string::npos) dir = path.substr(0, pos);
    return parse_scenario(buf.str(), dir);
}

WorkloadTrace build_workload(Scenario& scenario, std::optional<std::uint64_t> seed_override) {
    WorkloadTrace trace;
    if (!scenario.classes.empty()) {
        const std::uint64_t seed = seed_override.value_or(
            scenario.workload_seed != 0 ? scenario.workload_seed : scenario.seed);
        trace = generate_workload(scenario.classes, scenario.spec, seed).trace;
    } else {
        trace = parse_trace_file(scenario.trace_path, scenario.spec).trace;
    }

    for (const auto& [resource, fraction] : scenario.capacity_from_demand) {
        double demanded = 0.0;
        for (const ReservationRequest& job : trace.requests)
            for (const ResourceRequest& r : job.requests)
                demanded += static_cast<double>(charged_demand(r, scenario.spec).get(resource)) *
                            r.duration;
        const Quantity per_slot = std::max<Quantity>(
            1, std::llround(fraction * demanded / scenario.spec.grid.horizon));
        scenario.spec.capacity[resource].assign(scenario.spec.grid.horizon, per_slot);
    }
    return trace;
}

SimulationConfig build_sim_config(const Scenario& scenario, const AlgorithmConfig& algorithm,
                                  const WorkloadTrace& workload) {
    SimulationConfig cfg;
    cfg.spec = scenario.spec;
    cfg.workload = workload;
    cfg.algorithm = algorithm;
    cfg.seed = scenario.seed;
    cfg.failure_plan = scenario.failure_plan;
    cfg.early_termination = scenario.early_termination;
    cfg.ticks_per_slot = scenario.ticks_per_slot;
    cfg.early_start = scenario.early_start;
    return cfg;
}

}  // namespace era
