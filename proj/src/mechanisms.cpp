#include "poolshare/mechanisms.hpp"

#include <stdexcept>

#include "poolshare/detail/vec.hpp"
#include "poolshare/pswc.hpp"

namespace poolshare {

namespace {

std::vector<std::optional<Num>> unbounded(std::size_t n) {
  return std::vector<std::optional<Num>>(n);
}

std::vector<std::optional<Num>> bounded(const std::vector<Num>& v) {
  std::vector<std::optional<Num>> l(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) l[i] = v[i];
  return l;
}

void check_reports(const MechanismState& state, const std::vector<Num>& reports) {
  if (reports.size() != state.endowments.size()) {
    throw std::invalid_argument("step: report count does not match agent count");
  }
  for (const Num& d : reports) {
    if (d.is_negative()) throw std::invalid_argument("step: negative report");
  }
}

// Shared no-shortage rule: everyone gets at least their report, the surplus
// spreads proportionally to endowments.
RoundResult no_shortage_round(const MechanismState& state, const std::vector<Num>& reports) {
  const Num E = vec::sum(state.endowments);
  PswcSolution sol = solve({E, state.endowments, reports, unbounded(reports.size())});
  return {sol.alloc, vec::sub(state.endowments, sol.alloc), std::nullopt, Branch::NoShortage};
}

// Shared shortage rule for the cumulative mechanisms: water-fill the running
// totals `base` between base + floor_add and base + reports, spending the
// whole pool E on top of what is already booked.
RoundResult cumulative_shortage_round(const MechanismState& state,
                                      const std::vector<Num>& reports,
                                      const std::vector<Num>& base,
                                      const std::vector<Num>& floor_add) {
  const Num E = vec::sum(state.endowments);
  PswcProblem prob{vec::sum(base) + E, state.endowments, vec::add(base, floor_add),
                   bounded(vec::add(base, reports))};
  PswcSolution sol = solve(prob);
  std::vector<Num> alloc = vec::sub(sol.alloc, base);
  return {alloc, vec::sub(state.endowments, alloc), std::nullopt, Branch::ShortageCapped};
}

}  // namespace

const char* mechanism_name(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::LendRecoup: return "lendrecoup";
    case MechanismKind::Smmf: return "smmf";
    case MechanismKind::Dmmf: return "dmmf";
    case MechanismKind::Karma: return "karma";
    case MechanismKind::Static: return "static";
  }
  throw std::logic_error("unknown mechanism kind");
}

std::optional<MechanismKind> mechanism_from_name(const std::string& name) {
  if (name == "lendrecoup") return MechanismKind::LendRecoup;
  if (name == "smmf") return MechanismKind::Smmf;
  if (name == "dmmf") return MechanismKind::Dmmf;
  if (name == "karma") return MechanismKind::Karma;
  if (name == "static") return MechanismKind::Static;
  return std::nullopt;
}

MechanismState MechanismState::init(MechanismKind kind, std::vector<Num> endowments,
                                    Num alpha) {
  MechanismState s;
  s.kind = kind;
  s.alpha = std::move(alpha);
  s.round = 1;
  s.past_alloc = vec::zeros(endowments.size());
  s.past_util = vec::zeros(endowments.size());
  s.credits = vec::zeros(endowments.size());
  s.endowments = std::move(endowments);
  return s;
}

RoundResult lendrecoup_step(const MechanismState& state, const std::vector<Num>& reports) {
  check_reports(state, reports);
  const std::size_t n = reports.size();
  const Num E = vec::sum(state.endowments);
  if (vec::sum(reports) <= E) {
    return no_shortage_round(state, reports);
  }
  // Cap each report at the credit-adjusted endowment max(0, e_i + c_i).
  std::vector<Num> capped(n);
  for (std::size_t i = 0; i < n; ++i) {
    capped[i] = min(reports[i], max(Num(0), state.endowments[i] + state.credits[i]));
  }
  if (E <= vec::sum(capped)) {
    PswcSolution sol = solve({E, state.endowments, vec::zeros(n), bounded(capped)});
    return {sol.alloc, vec::sub(state.endowments, sol.alloc), capped, Branch::ShortageCapped};
  }
  // Caps leave slack: top up cumulative allocations toward round * E, between
  // cumulative caps and cumulative reports.
  PswcProblem prob{Num(static_cast<long>(state.round)) * E, state.endowments,
                   vec::add(state.past_alloc, capped),
                   bounded(vec::add(state.past_alloc, reports))};
  PswcSolution sol = solve(prob);
  std::vector<Num> alloc = vec::sub(sol.alloc, state.past_alloc);
  return {alloc, vec::sub(state.endowments, alloc), capped, Branch::ShortageSurplus};
}

RoundResult smmf_step(const MechanismState& state, const std::vector<Num>& reports) {
  check_reports(state, reports);
  const Num E = vec::sum(state.endowments);
  if (vec::sum(reports) <= E) {
    return no_shortage_round(state, reports);
  }
  PswcSolution sol = solve({E, state.endowments, vec::zeros(reports.size()), bounded(reports)});
  return {sol.alloc, vec::sub(state.endowments, sol.alloc), std::nullopt,
          Branch::ShortageCapped};
}

RoundResult dmmf_step(const MechanismState& state, const std::vector<Num>& reports) {
  check_reports(state, reports);
  const Num E = vec::sum(state.endowments);
  if (vec::sum(reports) <= E) {
    return no_shortage_round(state, reports);
  }
  return cumulative_shortage_round(state, reports, state.past_util,
                                   vec::zeros(reports.size()));
}

RoundResult karma_step(const MechanismState& state, const std::vector<Num>& reports,
                       const Num& alpha) {
  check_reports(state, reports);
  if (alpha.is_negative() || alpha > Num(1)) {
    throw std::domain_error("karma: alpha must lie in [0, 1]");
  }
  const Num E = vec::sum(state.endowments);
  if (vec::sum(reports) <= E) {
    return no_shortage_round(state, reports);
  }
  // Stage 1 guarantees min(d'_i, alpha * e_i); stage 2 water-fills the
  // cumulative demand-capped totals, so alpha = 0 coincides with dmmf.
  std::vector<Num> guarantee(reports.size());
  for (std::size_t i = 0; i < reports.size(); ++i) {
    guarantee[i] = min(reports[i], alpha * state.endowments[i]);
  }
  return cumulative_shortage_round(state, reports, state.past_util, guarantee);
}

RoundResult static_step(const MechanismState& state, const std::vector<Num>& reports) {
  check_reports(state, reports);
  return {state.endowments, vec::zeros(reports.size()), std::nullopt, Branch::NoShortage};
}

RoundResult step(const MechanismState& state, const std::vector<Num>& reports) {
  switch (state.kind) {
    case MechanismKind::LendRecoup: return lendrecoup_step(state, reports);
    case MechanismKind::Smmf: return smmf_step(state, reports);
    case MechanismKind::Dmmf: return dmmf_step(state, reports);
    case MechanismKind::Karma: return karma_step(state, reports, state.alpha);
    case MechanismKind::Static: return static_step(state, reports);
  }
  throw std::logic_error("unknown mechanism kind");
}

void apply_round(MechanismState& state, const std::vector<Num>& reports,
                 const RoundResult& result) {
  for (std::size_t i = 0; i < state.endowments.size(); ++i) {
    state.past_alloc[i] += result.alloc[i];
    state.past_util[i] += min(result.alloc[i], reports[i]);
    state.credits[i] += result.credit_delta[i];
  }
  state.round += 1;
}

AllocationTrace run(MechanismKind kind, const Instance& instance, const Num& alpha) {
  instance.validate();
  const std::size_t n = instance.agents();
  MechanismState state = MechanismState::init(kind, instance.endowments, alpha);
  AllocationTrace trace;
  trace.credits.push_back(vec::zeros(n));
  for (std::size_t t = 0; t < instance.rounds(); ++t) {
    const std::vector<Num>& reports = instance.demands[t];
    RoundResult rr = step(state, reports);
    apply_round(state, reports, rr);
    trace.alloc.push_back(rr.alloc);
    trace.util.push_back(vec::min(rr.alloc, reports));
    trace.cum_util.push_back(state.past_util);
    trace.credits.push_back(state.credits);
  }
  return trace;
}

}  // namespace poolshare
