#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "era/domain.hpp"

namespace era {

/// Ordered list of reservation requests, nondecreasing in submit time,
/// with unique job ids. Input order is preserved for equal submit times.
struct WorkloadTrace {
    std::vector<ReservationRequest> requests;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& message)
        : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Parse one reservation document (JSON). Times may be integer slots,
/// "HH:MM" clock strings, or duration strings like "5h" / "30m" / "45s";
/// wall-clock values are rounded onto the grid (arrival up, deadline
/// down, duration up). The list structure carries AND semantics; no
/// other operator is accepted.
ReservationRequest parse_reservation(const std::string& text, const TimeGrid& grid);

/// Inverse of parse_reservation on valid requests: emits slots as
/// integers and money as a fixed-point decimal string, so the round trip
/// is the identity.
std::string serialize_reservation(const ReservationRequest& req);

struct TraceIssue {
    int line;
    std::string message;
};

struct TraceParseResult {
    WorkloadTrace trace;
    std::vector<TraceIssue> skipped;  // lenient mode only
};

/// Parse the trace CSV (header mandatory). Rows failing validation are
/// rejected with their line number in strict mode and reported/excluded
/// in lenient mode. Rows sharing (jobId, seq) merge into one resource
/// request; rows sharing jobId with distinct seq form an AND list.
TraceParseResult parse_trace(std::istream& in, const CloudSpec& spec, bool strict = true);
TraceParseResult parse_trace_file(const std::string& path, const CloudSpec& spec, bool strict = true);

void write_trace(std::ostream& out, const WorkloadTrace& trace);

}  // namespace era
