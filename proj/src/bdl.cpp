#include "era/bdl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace era {
namespace {

using Json = nlohmann::ordered_json;

bool is_integer(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

// "HH:MM" -> seconds since midnight; "Nh"/"Nm"/"Ns" -> seconds.
std::int64_t parse_time_seconds(const std::string& s) {
    auto colon = s.find(':');
    if (colon != std::string::npos) {
        const std::string h = s.substr(0, colon), m = s.substr(colon + 1);
        if (!is_integer(h) || !is_integer(m)) throw ParseError(-1, "malformed clock time: " + s);
        return std::stoll(h) * 3600 + std::stoll(m) * 60;
    }
    if (s.empty()) throw ParseError(-1, "empty time value");
    const char unit = s.back();
    const std::string num = s.substr(0, s.size() - 1);
    if (!is_integer(num)) throw ParseError(-1, "malformed time value: " + s);
    const std::int64_t n = std::stoll(num);
    switch (unit) {
        case 'h': return n * 3600;
        case 'm': return n * 60;
        case 's': return n;
        default: throw ParseError(-1, "unknown time unit in: " + s);
    }
}

enum class Rounding { arrival, deadline, duration };

Slot to_slot(const Json& v, const TimeGrid& grid, Rounding mode) {
    if (v.is_number_integer()) return v.get<Slot>();
    if (!v.is_string()) throw ParseError(-1, "time value must be an integer slot or a string");
    const std::int64_t sec = parse_time_seconds(v.get<std::string>());
    switch (mode) {
        case Rounding::arrival: return grid.arrival_slot(sec);
        case Rounding::deadline: return grid.deadline_slot(sec);
        case Rounding::duration: return grid.duration_slots(sec);
    }
    return 0;
}

}  // namespace

ReservationRequest parse_reservation(const std::string& text, const TimeGrid& grid) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(-1, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError(-1, "reservation document must be an object");
    if (doc.contains("operator") && doc["operator"] != "AND")
        throw ParseError(-1, "unsupported operator: only AND lists are accepted");

    ReservationRequest req;
    if (!doc.contains("jobId") || !doc["jobId"].is_string())
        throw ParseError(-1, "missing jobId");
    req.job_id = doc["jobId"].get<std::string>();
    if (!doc.contains("maxPrice")) throw ParseError(-1, "missing maxPrice");
    req.max_price = doc["maxPrice"].is_string() ? Money::parse(doc["maxPrice"].get<std::string>())
                                                : Money::from_units(doc["maxPrice"].get<std::int64_t>());
    if (doc.contains("class")) req.job_class = doc["class"].get<std::string>();

    if (!doc.contains("requests") || !doc["requests"].is_array())
        throw ParseError(-1, "missing requests list");
    if (doc["requests"].empty()) throw ParseError(-1, "empty request list");

    for (const Json& entry : doc["requests"]) {
        ResourceRequest r;
        if (!entry.contains("configs") || !entry["configs"].is_object() || entry["configs"].empty())
            throw ParseError(-1, "request entry missing configs");
        for (const auto& [cid, count] : entry["configs"].items())
            r.configs[cid] = count.get<Quantity>();
        if (!entry.contains("duration")) throw ParseError(-1, "request entry missing duration");
        r.duration = to_slot(entry["duration"], grid, Rounding::duration);
        if (r.duration < 1) throw ParseError(-1, "duration must be at least one slot");
        if (!entry.contains("window") || !entry["window"].is_array() || entry["window"].size() != 2)
            throw ParseError(-1, "request entry missing window [start, end)");
        r.arrival = to_slot(entry["window"][0], grid, Rounding::arrival);
        r.deadline = to_slot(entry["window"][1], grid, Rounding::deadline);
        req.requests.push_back(std::move(r));
    }

    if (doc.contains("submitTime"))
        req.submit_time = doc["submitTime"].get<Slot>();
    else {
        req.submit_time = req.requests.front().arrival;
        for (const ResourceRequest& r : req.requests)
            req.submit_time = std::min(req.submit_time, r.arrival);
    }
    return req;
}

std::string serialize_reservation(const ReservationRequest& req) {
    Json doc;
    doc["jobId"] = req.job_id;
    doc["maxPrice"] = req.max_price.str();
    doc["submitTime"] = req.submit_time;
    if (!req.job_class.empty()) doc["class"] = req.job_class;
    doc["requests"] = Json::array();
    for (const ResourceRequest& r : req.requests) {
        Json entry;
        entry["configs"] = Json::object();
        for (const auto& [cid, count] : r.configs) entry["configs"][cid] = count;
        entry["duration"] = r.duration;
        entry["window"] = Json::array({r.arrival, r.deadline});
        doc["requests"].push_back(std::move(entry));
    }
    return doc.dump();
}

namespace {

const char* kTraceHeader = "submitTime,jobId,seq,configId,count,durationSlots,arrivalSlot,deadlineSlot,value,class";

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

TraceParseResult parse_trace(std::istream& in, const CloudSpec& spec, bool strict) {
    TraceParseResult result;
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "missing header row");
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line != kTraceHeader)
        throw ParseError(1, "unexpected header, want: " + std::string(kTraceHeader));

    std::vector<ReservationRequest> jobs;
    std::vector<int> first_lines;
    std::map<std::string, std::size_t> open;          // jobId -> index in jobs
    std::map<std::string, int> closed;                // jobId -> 1 once another job started
    std::map<std::pair<std::size_t, std::int64_t>, std::size_t> seq_index;
    std::map<std::tuple<std::size_t, std::int64_t, std::string>, int> seen_config;
    std::string last_job;

    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        auto f = split_csv(line);
        if (f.size() != 10) throw ParseError(lineno, "expected 10 fields, got " + std::to_string(f.size()));
        try {
            const std::string& job_id = f[1];
            if (job_id.empty()) throw ParseError(lineno, "empty job id");
            if (job_id != last_job && closed.count(job_id))
                throw ParseError(lineno, "duplicate job id: " + job_id);

            std::size_t ji;
            if (auto it = open.find(job_id); it != open.end() && job_id == last_job) {
                ji = it->second;
            } else {
                if (!last_job.empty()) {
                    closed[last_job] = 1;
                    open.erase(last_job);
                }
                ji = jobs.size();
                jobs.emplace_back();
                first_lines.push_back(lineno);
                jobs[ji].job_id = job_id;
                jobs[ji].submit_time = static_cast<Slot>(std::stoll(f[0]));
                jobs[ji].max_price = Money::parse(f[8]);
                jobs[ji].job_class = f[9];
                open[job_id] = ji;
                last_job = job_id;
            }
            ReservationRequest& job = jobs[ji];
            if (job.submit_time != static_cast<Slot>(std::stoll(f[0])))
                throw ParseError(lineno, "submitTime disagrees across rows of job " + job_id);
            if (job.max_price != Money::parse(f[8]))
                throw ParseError(lineno, "value disagrees across rows of job " + job_id);

            const std::int64_t seq = std::stoll(f[2]);
            const std::string& config_id = f[3];
            if (seen_config.count({ji, seq, config_id}))
                throw ParseError(lineno, "duplicate config " + config_id + " in seq of job " + job_id);
            seen_config[{ji, seq, config_id}] = lineno;

            auto key = std::make_pair(ji, seq);
            std::size_t ri;
            if (auto it = seq_index.find(key); it != seq_index.end()) {
                ri = it->second;
            } else {
                ri = job.requests.size();
                job.requests.emplace_back();
                job.requests[ri].duration = static_cast<Slot>(std::stoll(f[5]));
                job.requests[ri].arrival = static_cast<Slot>(std::stoll(f[6]));
                job.requests[ri].deadline = static_cast<Slot>(std::stoll(f[7]));
                seq_index[key] = ri;
            }
            ResourceRequest& r = job.requests[ri];
            if (r.duration != static_cast<Slot>(std::stoll(f[5])) ||
                r.arrival != static_cast<Slot>(std::stoll(f[6])) ||
                r.deadline != static_cast<Slot>(std::stoll(f[7])))
                throw ParseError(lineno, "request fields disagree within seq of job " + job_id);
            r.configs[config_id] += std::stoll(f[4]);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(lineno, std::string("malformed row: ") + e.what());
        }
    }

    for (std::size_t i = 0; i < jobs.size(); ++i) {
        ValidationResult v = validate_request(jobs[i], spec);
        if (v.ok()) {
            result.trace.requests.push_back(std::move(jobs[i]));
        } else if (strict) {
            throw ParseError(first_lines[i], "invalid request " + jobs[i].job_id + ": " + v.violations.front().message);
        } else {
            result.skipped.push_back({first_lines[i], jobs[i].job_id + ": " + v.violations.front().message});
        }
    }
    std::stable_sort(result.trace.requests.begin(), result.trace.requests.end(),
                     [](const ReservationRequest& a, const ReservationRequest& b) {
                         return a.submit_time < b.submit_time;
                     });
    return result;
}

TraceParseResult parse_trace_file(const std::string& path, const CloudSpec& spec, bool strict) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file: " + path);
    return parse_trace(in, spec, strict);
}

void write_trace(std::ostream& out, const WorkloadTrace& trace) {
    out << kTraceHeader << "\n";
    for (const ReservationRequest& job : trace.requests) {
        for (std::size_t seq = 0; seq < job.requests.size(); ++seq) {
            const ResourceRequest& r = job.requests[seq];
            for (const auto& [cid, count] : r.configs) {
                out << job.submit_time << ',' << job.job_id << ',' << seq << ',' << cid << ','
                    << count << ',' << r.duration << ',' << r.arrival << ',' << r.deadline << ','
                    << job.max_price.str() << ',' << job.job_class << "\n";
            }
        }
    }
}

}  // namespace era
