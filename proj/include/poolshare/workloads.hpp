#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "poolshare/core.hpp"
#include "poolshare/num.hpp"

namespace poolshare {

// One task submission from a demand trace.
struct TaskEvent {
  std::int64_t timestamp_us = 0;  // nonnegative
  std::string agent_id;
  Num cpu_request;                // >= 0, normalized units
};

enum class AgentCapPolicy { TopByTotalDemand, Random };

struct WorkloadConfig {
  // Bucketing.
  std::int64_t round_length_us = 15ll * 60 * 1000 * 1000;  // 15-minute rounds
  Num min_mean_demand = Num(1, 100);  // agents below this mean are dropped
  std::size_t max_agents = 0;         // 0 = unlimited
  std::size_t max_rounds = 0;         // 0 = unlimited
  AgentCapPolicy cap_policy = AgentCapPolicy::TopByTotalDemand;
  std::uint64_t seed = 1;             // random cap policy + generator stream

  // Synthetic generator.
  std::size_t agents = 50;
  std::size_t rounds = 500;
  Num burst_amplitude = Num(2);       // peak/base demand factor, in [1, 2]
  std::size_t amplitude_steps = 8;    // resolution of the burst-size grid
  std::size_t mean_episode_rounds = 4;
};

// Sum each agent's requests per round bucket (floor(timestamp / round
// length)), drop agents with constant rows or mean demand below the
// threshold, optionally cap rounds (earliest kept) and agents (per policy),
// and set endowments to row means. Agents are ordered by id. Throws
// std::invalid_argument on an empty trace or when no agent survives.
Instance bucket_trace(std::vector<TaskEvent> events, const WorkloadConfig& config);

// Deterministic synthetic workload (generator "splitmix64", seeded from
// config.seed). Rounds alternate between pool-wide calm and busy episodes
// with geometric lengths (mean config.mean_episode_rounds). Each agent draws
// an integer base level; the j-th busy round pairs with the j-th calm round,
// and per (agent, pair) a burst size z in {1..q}/q scales demand to
// base*(1+(amplitude-1)z) busy and base*(1-(amplitude-1)z) calm, so row means
// equal the base level exactly and endowments equal row means. Unpaired
// rounds sit at the base level. Same filters as bucket_trace; amplitude 1
// yields constant rows, which all get filtered and raise an error.
Instance synth_bursty(const WorkloadConfig& config);

// Hard-coded example catalog: motivating_example, prop43, thm44,
// thm44_misreport. Keys are stable identifiers used by the CLI.
const std::map<std::string, Instance>& bundled_instances();
Instance bundled_instance(const std::string& name);  // throws on unknown name

// CSV with exactly this header: timestamp_us,agent_id,cpu_request
std::vector<TaskEvent> read_task_events_csv(std::istream& in);

}  // namespace poolshare
