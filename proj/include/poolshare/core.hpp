#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "poolshare/num.hpp"

namespace poolshare {

using Matrix = std::vector<std::vector<Num>>;  // rows = rounds, cols = agents

// A pool-sharing problem: per-agent endowments plus a rounds x agents demand
// matrix. `demands` holds what agents REPORT; `true_demands`, when present,
// holds what they actually need (incentive experiments). When absent, reports
// are taken as truthful.
struct Instance {
  std::vector<Num> endowments;           // e_i > 0
  Matrix demands;                        // d'_{t,i} >= 0
  std::optional<Matrix> true_demands;    // d_{t,i}, same shape

  std::size_t agents() const { return endowments.size(); }
  std::size_t rounds() const { return demands.size(); }
  Num total_endowment() const;           // E
  const Matrix& truth() const { return true_demands ? *true_demands : demands; }

  // Throws std::invalid_argument on empty agents, nonpositive endowments,
  // ragged or negative demand rows, or a true-demand shape mismatch.
  void validate() const;
};

// Everything a mechanism produced over a full run. Credits have T+1 rows:
// row 0 is the all-zero opening balance, row t is the balance entering round
// t+1. util is measured against REPORTED demands (u'_{t,i} = min(a, d')).
struct AllocationTrace {
  Matrix alloc;     // T x n
  Matrix credits;   // (T+1) x n
  Matrix util;      // T x n
  Matrix cum_util;  // T x n

  bool operator==(const AllocationTrace&) const = default;
};

// Throws std::invalid_argument if the trace does not match the instance shape
// or breaks the structural invariants: a >= 0, sum_i a_{t,i} <= E, credits row
// 0 all zero, util == min(alloc, demands), cum_util the prefix sums of util.
void validate_trace(const Instance& instance, const AllocationTrace& trace);

// Round utility: what an agent actually uses out of an allocation.
// Pre: alloc >= 0, demand >= 0 (throws std::invalid_argument otherwise).
Num utility(const Num& alloc, const Num& demand);

// Efficiency check: in every round where some agent got less than it asked
// for, the realized round utilities must add up to the whole pool E.
// All indices in the verdict are 1-based.
struct PeCheck {
  bool pass = true;
  std::size_t round = 0;  // first violating round
  std::size_t agent = 0;  // first under-served agent in that round
};
PeCheck is_pareto_efficient(const Instance& instance, const AllocationTrace& trace);

// Stay-alone baseline: cumulative utility each agent would get by consuming
// only its own endowment every round, evaluated against TRUE demands.
// Returns the final per-agent totals.
std::vector<Num> static_utility(const Instance& instance);

// Prefix variant of the baseline: row t holds the baseline totals through
// round t+1. Used by the prefix-wise incentive checks.
Matrix static_utility_prefix(const Instance& instance);

// Sharing-incentive check, prefix-wise: for every agent and every prefix
// length t, cumulative TRUE-demand utility from the trace must not fall below
// the stay-alone baseline. first_violation[i] is the minimal violating prefix
// (1-based round) for agent i, or nullopt if the agent passes.
struct SiReport {
  bool pass = true;
  std::vector<std::optional<std::size_t>> first_violation;
};
SiReport check_sharing_incentives(const Instance& instance, const AllocationTrace& trace);

}  // namespace poolshare
