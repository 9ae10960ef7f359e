#pragma once

#include <optional>
#include <string>
#include <vector>

#include "poolshare/core.hpp"
#include "poolshare/mechanisms.hpp"
#include "poolshare/num.hpp"

namespace poolshare {

// The five per-round conditions a credit ledger must satisfy. Throughout,
// u'_{t,i} = min(a_{t,i}, d'_{t,i}) is the reported-demand utility and
// Delta c_{t,i} = c_{t+1,i} - c_{t,i} the round's ledger movement.
//
// CF1  min(0, e_i - u'_i) <= Delta c_i <= max(0, e_i - u'_i)
// CF2  if sum_{j != i} u'_j > E - e_i then Delta c_i >= sum_{j != i} u'_j - (E - e_i)
// CF3  sum_i Delta c_i <= 0
// CF4  a_i >= min(d'_i, e_i + min(0, c_i))
// CF5  if some j has a_j > max(0, e_j + c_j), then every i has
//      a_i >= d'_i or a_i >= e_i + c_i
enum class Condition { CF1, CF2, CF3, CF4, CF5 };
const char* condition_name(Condition c);

enum class Verdict { Pass, Fail, NotApplicable };
const char* verdict_name(Verdict v);

// One evaluated (round, condition[, agent]) cell. Indices are 1-based.
// trigger_agent is the j whose over-cap allocation activated CF5.
struct AuditEntry {
  std::size_t round = 0;
  Condition condition = Condition::CF1;
  std::optional<std::size_t> agent;
  Verdict verdict = Verdict::Pass;
  std::optional<std::size_t> trigger_agent;
  std::string detail;
};

struct AuditReport {
  std::vector<AuditEntry> entries;
  bool pass = true;
  const AuditEntry* first_failure() const;
};

// Evaluate CF1..CF5 at every round against the trace's explicit credit
// ledger. Premise-less cells report NotApplicable. Requires a structurally
// valid trace (validate_trace).
AuditReport audit_explicit(const Instance& instance, const AllocationTrace& trace);

// Interval bounds [lower_i, upper_i] on every credit balance any conforming
// ledger could hold at the start of a round, propagated forward.
struct CreditBoundsState {
  std::vector<Num> lower;
  std::vector<Num> upper;
};

struct RefuteWitness {
  std::size_t round = 0;
  Condition condition = Condition::CF1;
  std::optional<std::size_t> agent;          // the agent whose condition dies
  std::optional<std::size_t> trigger_agent;  // CF5's over-cap agent j
  std::string detail;
};

// REFUTED is sound: no credit ledger (of any real values) can satisfy
// CF1..CF5 on this trace. CONSISTENT is NOT a proof that one exists.
// bounds[t-1] holds the start-of-round-t intervals that were derived.
struct RefuteResult {
  bool refuted = false;
  std::optional<RefuteWitness> witness;
  std::vector<CreditBoundsState> bounds;
};

// Forward interval propagation over the trace's allocations (any credits the
// trace carries are ignored). Requires the trace to be efficient
// (is_pareto_efficient); throws std::invalid_argument otherwise, because in
// efficient strict-shortage rounds the ledger movement is forced to
// e_i - a_i, which the propagation relies on.
RefuteResult refute_credit_existence(const Instance& instance, const AllocationTrace& trace);

// Single-round deviation probe: for every (agent, round), replay the truthful
// history, swap in each grid report at that round only, and compare the
// agent's round utility (vs true demand) against truthful play. Fails iff
// some deviation strictly gains.
struct OspWitness {
  std::size_t agent = 0;  // 1-based
  std::size_t round = 0;  // 1-based
  Num deviation;
  Num truthful_utility;
  Num deviated_utility;
};

struct OspResult {
  bool pass = true;
  std::optional<OspWitness> witness;
};

OspResult check_osp(MechanismKind kind, const Instance& instance,
                    const std::vector<Num>& grid, const Num& alpha = Num(1, 2));

// Half-integer steps 0, 1/2, 1, ... covering the largest true demand.
std::vector<Num> default_osp_grid(const Instance& instance);

// Full-schedule deviation probe: agent (1-based) reports `schedule` instead
// of its true demands while everyone else stays truthful. Both totals are
// measured against true demands.
struct SpProbeResult {
  Num truthful_utility;
  Num misreport_utility;
};

SpProbeResult sp_probe(MechanismKind kind, const Instance& instance, std::size_t agent,
                       const std::vector<Num>& schedule, const Num& alpha = Num(1, 2));

}  // namespace poolshare
