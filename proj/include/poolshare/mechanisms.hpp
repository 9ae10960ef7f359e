#pragma once

#include <optional>
#include <string>
#include <vector>

#include "poolshare/core.hpp"
#include "poolshare/num.hpp"

namespace poolshare {

enum class MechanismKind { LendRecoup, Smmf, Dmmf, Karma, Static };

const char* mechanism_name(MechanismKind kind);
std::optional<MechanismKind> mechanism_from_name(const std::string& name);

enum class Branch {
  NoShortage,       // total reports fit in the pool
  ShortageCapped,   // shortage served from capped targets within the round
  ShortageSurplus,  // shortage with slack after capping: cumulative top-up
};

// Rolling per-instance state folded over rounds. Credits open at zero and
// follow c_{t+1} = c_t + e - a for every mechanism (Static allocates e, so
// its ledger stays identically zero; the max-min mechanisms carry the same
// bookkeeping ledger so their traces can be audited against it).
struct MechanismState {
  MechanismKind kind = MechanismKind::Static;
  std::vector<Num> endowments;
  Num alpha = Num(1, 2);          // per-round guarantee fraction (Karma only)
  std::size_t round = 1;          // 1-based index of the round about to run
  std::vector<Num> past_alloc;    // componentwise nondecreasing
  std::vector<Num> past_util;     // cumulative reported-demand utilities
  std::vector<Num> credits;       // c_round

  static MechanismState init(MechanismKind kind, std::vector<Num> endowments,
                             Num alpha = Num(1, 2));
};

struct RoundResult {
  std::vector<Num> alloc;
  std::vector<Num> credit_delta;                 // always e - alloc
  std::optional<std::vector<Num>> capped_demands; // min(d', max(0, e+c)); shortage only
  Branch branch = Branch::NoShortage;
};

// One round of each rule. All take the state by const reference and the
// current reports (length n, entries >= 0); none mutates state.
//
// LendRecoup: no shortage -> water-fill with floors at the reports; shortage
// -> cap each report at max(0, e_i + c_i); if the caps cover the pool, fill
// within them, else top up cumulative allocations toward round * E between
// cumulative caps and cumulative reports.
RoundResult lendrecoup_step(const MechanismState& state, const std::vector<Num>& reports);

// Per-round max-min: shortage -> fill toward the reports from zero floors;
// no shortage -> floors at the reports, surplus spread by weight.
RoundResult smmf_step(const MechanismState& state, const std::vector<Num>& reports);

// Cumulative max-min: shortage -> water-fill cumulative utilities between
// their current values and current value + report; no shortage as smmf.
RoundResult dmmf_step(const MechanismState& state, const std::vector<Num>& reports);

// Guarantee-then-priority: shortage -> stage 1 grants min(d'_i, alpha*e_i),
// stage 2 spreads the rest by cumulative-utility water-filling; no shortage
// as smmf. alpha outside [0,1] throws std::domain_error. alpha = 0 reproduces
// dmmf exactly.
RoundResult karma_step(const MechanismState& state, const std::vector<Num>& reports,
                       const Num& alpha);

// Everyone consumes exactly their endowment; reports are ignored.
RoundResult static_step(const MechanismState& state, const std::vector<Num>& reports);

// Dispatch on state.kind (Karma uses state.alpha).
RoundResult step(const MechanismState& state, const std::vector<Num>& reports);

// Advance the fold: cumulative allocations/utilities, credits, round index.
void apply_round(MechanismState& state, const std::vector<Num>& reports,
                 const RoundResult& result);

// Fold a mechanism over every round of the instance (agents report
// instance.demands). Deterministic; validates the instance first.
AllocationTrace run(MechanismKind kind, const Instance& instance, const Num& alpha = Num(1, 2));

}  // namespace poolshare
