#include "poolshare/credit_audit.hpp"

#include <sstream>
#include <stdexcept>

#include "poolshare/detail/vec.hpp"

namespace poolshare {

namespace {

std::string fmt(std::initializer_list<std::pair<const char*, Num>> kv) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : kv) {
    if (!first) os << ", ";
    os << k << "=" << v.to_string();
    first = false;
  }
  return os.str();
}

}  // namespace

const char* condition_name(Condition c) {
  switch (c) {
    case Condition::CF1: return "CF1";
    case Condition::CF2: return "CF2";
    case Condition::CF3: return "CF3";
    case Condition::CF4: return "CF4";
    case Condition::CF5: return "CF5";
  }
  throw std::logic_error("unknown condition");
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::NotApplicable: return "NOT-APPLICABLE";
  }
  throw std::logic_error("unknown verdict");
}

const AuditEntry* AuditReport::first_failure() const {
  for (const AuditEntry& e : entries) {
    if (e.verdict == Verdict::Fail) return &e;
  }
  return nullptr;
}

AuditReport audit_explicit(const Instance& instance, const AllocationTrace& trace) {
  validate_trace(instance, trace);
  const std::size_t T = instance.rounds();
  const std::size_t n = instance.agents();
  const Num E = instance.total_endowment();
  const std::vector<Num>& e = instance.endowments;

  AuditReport report;
  auto add = [&](AuditEntry entry) {
    if (entry.verdict == Verdict::Fail) report.pass = false;
    report.entries.push_back(std::move(entry));
  };

  for (std::size_t t = 0; t < T; ++t) {
    const std::vector<Num>& a = trace.alloc[t];
    const std::vector<Num>& u = trace.util[t];
    const std::vector<Num>& d = instance.demands[t];
    const std::vector<Num>& c = trace.credits[t];
    const std::vector<Num> dc = vec::sub(trace.credits[t + 1], c);
    const Num u_total = vec::sum(u);

    for (std::size_t i = 0; i < n; ++i) {
      // CF1: the ledger moves only within the lend/recoup corridor.
      Num gap = e[i] - u[i];
      Num lo = min(Num(0), gap);
      Num hi = max(Num(0), gap);
      add({t + 1, Condition::CF1, i + 1,
           (lo <= dc[i] && dc[i] <= hi) ? Verdict::Pass : Verdict::Fail, std::nullopt,
           fmt({{"delta", dc[i]}, {"lo", lo}, {"hi", hi}})});

      // CF2: if the others together used more than the pool minus i's
      // endowment, i must be credited at least the overshoot.
      Num others = u_total - u[i];
      Num slack = others - (E - e[i]);
      if (slack.is_positive()) {
        add({t + 1, Condition::CF2, i + 1, dc[i] >= slack ? Verdict::Pass : Verdict::Fail,
             std::nullopt, fmt({{"delta", dc[i]}, {"required", slack}})});
      } else {
        add({t + 1, Condition::CF2, i + 1, Verdict::NotApplicable, std::nullopt, ""});
      }
    }

    // CF3: credits are never minted round-over-round.
    Num dc_total = vec::sum(dc);
    add({t + 1, Condition::CF3, std::nullopt,
         dc_total <= Num(0) ? Verdict::Pass : Verdict::Fail, std::nullopt,
         fmt({{"delta_total", dc_total}})});

    // CF4: everyone is served up to the smaller of report and
    // credit-adjusted endowment.
    for (std::size_t i = 0; i < n; ++i) {
      Num floor = min(d[i], e[i] + min(Num(0), c[i]));
      add({t + 1, Condition::CF4, i + 1, a[i] >= floor ? Verdict::Pass : Verdict::Fail,
           std::nullopt, fmt({{"alloc", a[i]}, {"floor", floor}})});
    }

    // CF5: once anyone is served beyond their credit-adjusted cap, everyone
    // else must be saturated (full report) or at their cap.
    std::optional<std::size_t> trigger;
    for (std::size_t j = 0; j < n; ++j) {
      if (a[j] > max(Num(0), e[j] + c[j])) {
        trigger = j;
        break;
      }
    }
    if (!trigger) {
      add({t + 1, Condition::CF5, std::nullopt, Verdict::NotApplicable, std::nullopt, ""});
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        bool ok = a[i] >= d[i] || a[i] >= e[i] + c[i];
        add({t + 1, Condition::CF5, i + 1, ok ? Verdict::Pass : Verdict::Fail, *trigger + 1,
             fmt({{"alloc", a[i]}, {"report", d[i]}, {"cap", e[i] + c[i]}})});
      }
    }
  }
  return report;
}

RefuteResult refute_credit_existence(const Instance& instance, const AllocationTrace& trace) {
  PeCheck pe = is_pareto_efficient(instance, trace);
  if (!pe.pass) {
    throw std::invalid_argument(
        "refute_credit_existence: trace is not efficient (round " + std::to_string(pe.round) +
        "); the propagation is only sound on efficient traces");
  }
  const std::size_t T = instance.rounds();
  const std::size_t n = instance.agents();
  const Num E = instance.total_endowment();
  const std::vector<Num>& e = instance.endowments;

  RefuteResult result;
  std::vector<Num> L = vec::zeros(n);
  std::vector<Num> U = vec::zeros(n);
  result.bounds.push_back({L, U});

  for (std::size_t t = 0; t < T; ++t) {
    const std::vector<Num>& a = trace.alloc[t];
    const std::vector<Num>& d = instance.demands[t];
    const std::vector<Num>& u = trace.util[t];
    const Num u_total = vec::sum(u);

    // CF4 at the weakest requirement any feasible balance allows (c_i at its
    // lower bound): failing there means failing for every feasible ledger.
    for (std::size_t i = 0; i < n; ++i) {
      Num floor = min(d[i], e[i] + min(Num(0), L[i]));
      if (a[i] < floor) {
        result.refuted = true;
        result.witness = {t + 1, Condition::CF4, i + 1, std::nullopt,
                          fmt({{"alloc", a[i]}, {"floor_at_lower_bound", floor}})};
        return result;
      }
    }

    // CF5: the premise must hold at j's upper bound (so it holds for every
    // feasible balance) and the consequent must fail at i's lower bound (so
    // it fails for every feasible balance).
    std::optional<std::size_t> trigger;
    for (std::size_t j = 0; j < n; ++j) {
      if (a[j] > max(Num(0), e[j] + U[j])) {
        trigger = j;
        break;
      }
    }
    if (trigger) {
      for (std::size_t i = 0; i < n; ++i) {
        if (a[i] < d[i] && a[i] < e[i] + L[i]) {
          result.refuted = true;
          result.witness = {t + 1, Condition::CF5, i + 1, *trigger + 1,
                            fmt({{"alloc", a[i]},
                                 {"report", d[i]},
                                 {"cap_at_lower_bound", e[i] + L[i]},
                                 {"trigger_cap_at_upper_bound", e[*trigger] + U[*trigger]}})};
          return result;
        }
      }
    }

    // Per-round movement bounds.
    std::vector<Num> lo(n), hi(n);
    if (vec::sum(d) > E) {
      // Efficient strict-shortage rounds pin the movement exactly: the pool
      // is fully used at reported demands, so u' = a and CF1/CF2/CF3 leave
      // the single point e - a.
      for (std::size_t i = 0; i < n; ++i) {
        lo[i] = e[i] - a[i];
        hi[i] = lo[i];
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        Num gap = e[i] - u[i];
        lo[i] = min(Num(0), gap);
        hi[i] = max(Num(0), gap);
        Num slack = (u_total - u[i]) - (E - e[i]);
        if (slack.is_positive() && slack > lo[i]) lo[i] = slack;
        if (lo[i] > hi[i]) {
          result.refuted = true;
          result.witness = {t + 1, Condition::CF2, i + 1, std::nullopt,
                            fmt({{"lo", lo[i]}, {"hi", hi[i]}})};
          return result;
        }
      }
    }

    // CF3 couples the movements: their sum cannot be positive.
    Num lo_total = vec::sum(lo);
    if (lo_total.is_positive()) {
      result.refuted = true;
      result.witness = {t + 1, Condition::CF3, std::nullopt, std::nullopt,
                        fmt({{"lower_bound_total", lo_total}})};
      return result;
    }
    for (std::size_t i = 0; i < n; ++i) {
      hi[i] = min(hi[i], lo[i] - lo_total);  // -sum_{j != i} lo_j
    }

    L = vec::add(L, lo);
    U = vec::add(U, hi);
    result.bounds.push_back({L, U});
  }
  return result;
}

std::vector<Num> default_osp_grid(const Instance& instance) {
  Num maxd(0);
  for (const auto& row : instance.truth()) {
    for (const Num& x : row) maxd = max(maxd, x);
  }
  std::vector<Num> grid;
  for (Num g(0); g <= maxd; g += Num(1, 2)) grid.push_back(g);
  if (grid.empty() || grid.back() < maxd) grid.push_back(maxd);
  return grid;
}

OspResult check_osp(MechanismKind kind, const Instance& instance, const std::vector<Num>& grid,
                    const Num& alpha) {
  instance.validate();
  const Matrix& truth = instance.truth();
  const std::size_t T = instance.rounds();
  const std::size_t n = instance.agents();

  // One truthful pass, keeping the state entering each round.
  std::vector<MechanismState> entry_states;
  entry_states.reserve(T);
  MechanismState state = MechanismState::init(kind, instance.endowments, alpha);
  std::vector<std::vector<Num>> truthful_alloc(T);
  for (std::size_t t = 0; t < T; ++t) {
    entry_states.push_back(state);
    RoundResult rr = step(state, truth[t]);
    truthful_alloc[t] = rr.alloc;
    apply_round(state, truth[t], rr);
  }

  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      Num honest = min(truthful_alloc[t][i], truth[t][i]);
      for (const Num& g : grid) {
        if (g == truth[t][i]) continue;
        std::vector<Num> reports = truth[t];
        reports[i] = g;
        RoundResult rr = step(entry_states[t], reports);
        Num deviated = min(rr.alloc[i], truth[t][i]);
        if (deviated > honest) {
          return {false, OspWitness{i + 1, t + 1, g, honest, deviated}};
        }
      }
    }
  }
  return {};
}

SpProbeResult sp_probe(MechanismKind kind, const Instance& instance, std::size_t agent,
                       const std::vector<Num>& schedule, const Num& alpha) {
  instance.validate();
  if (agent == 0 || agent > instance.agents()) {
    throw std::invalid_argument("sp_probe: agent index out of range");
  }
  if (schedule.size() != instance.rounds()) {
    throw std::invalid_argument("sp_probe: schedule length does not match rounds");
  }
  const Matrix& truth = instance.truth();
  const std::size_t idx = agent - 1;

  Instance truthful{instance.endowments, truth, std::nullopt};
  Matrix misreports = truth;
  for (std::size_t t = 0; t < instance.rounds(); ++t) misreports[t][idx] = schedule[t];
  Instance deviated{instance.endowments, misreports, truth};

  AllocationTrace honest = run(kind, truthful, alpha);
  AllocationTrace shifted = run(kind, deviated, alpha);

  SpProbeResult out{Num(0), Num(0)};
  for (std::size_t t = 0; t < instance.rounds(); ++t) {
    out.truthful_utility += min(honest.alloc[t][idx], truth[t][idx]);
    out.misreport_utility += min(shifted.alloc[t][idx], truth[t][idx]);
  }
  return out;
}

}  // namespace poolshare
