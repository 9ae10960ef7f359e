#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "poolshare/core.hpp"
#include "poolshare/mechanisms.hpp"

namespace poolshare {

// Trace files are self-contained: they embed the instance and the mechanism
// identity so audits never need to re-simulate. Rationals serialize as
// canonical "p/q" strings to stay exact; schema_id versions the layout.
inline constexpr const char* kTraceSchemaId = "poolshare-trace-v1";

struct TraceFile {
  std::string mechanism;              // mechanism_name() string
  std::optional<Num> alpha;           // karma only
  Instance instance;
  AllocationTrace trace;
  std::optional<std::string> rng;     // generator tag for synthetic instances
  std::optional<std::uint64_t> seed;
};

std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);

std::string trace_file_to_json(const TraceFile& tf);
TraceFile trace_file_from_json(const std::string& text);

// Lossy tabular view (12 significant digits), one row per (round, agent):
// round,agent,demand,allocation,utility,cumulative_utility,credit_before,credit_after
void write_trace_csv(std::ostream& os, const Instance& instance, const AllocationTrace& trace);

}  // namespace poolshare
