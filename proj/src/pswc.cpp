#include "poolshare/pswc.hpp"

#include <algorithm>
#include <cassert>
#include <cstddef>

#include "poolshare/detail/vec.hpp"

namespace poolshare {

namespace {

void validate(const PswcProblem& p) {
  const std::size_t n = p.weights.size();
  if (n == 0) throw std::invalid_argument("pswc: no agents");
  if (p.minima.size() != n || p.limits.size() != n) {
    throw std::invalid_argument("pswc: weights, minima, limits must have equal length");
  }
  if (p.capacity.is_negative()) throw std::invalid_argument("pswc: negative capacity");
  for (std::size_t i = 0; i < n; ++i) {
    if (!p.weights[i].is_positive()) {
      throw std::invalid_argument("pswc: weights must be strictly positive");
    }
    if (p.minima[i].is_negative()) throw std::invalid_argument("pswc: negative minimum");
    if (p.limits[i] && *p.limits[i] < p.minima[i]) {
      throw std::invalid_argument("pswc: limit below minimum");
    }
  }
}

// Throws on infeasible capacity; returns sum of minima.
Num check_feasible(const PswcProblem& p) {
  Num sum_m = vec::sum(p.minima);
  if (p.capacity < sum_m) throw InfeasibleLow();
  bool all_finite = true;
  Num sum_l;
  for (const auto& l : p.limits) {
    if (!l) {
      all_finite = false;
      break;
    }
    sum_l += *l;
  }
  if (all_finite && p.capacity > sum_l) throw InfeasibleHigh();
  return sum_m;
}

Num clamp(const Num& v, const Num& lo, const std::optional<Num>& hi) {
  if (v < lo) return lo;
  if (hi && v > *hi) return *hi;
  return v;
}

std::vector<Num> clamp_all(const PswcProblem& p, const Num& x) {
  std::vector<Num> a(p.weights.size());
  for (std::size_t i = 0; i < p.weights.size(); ++i) {
    a[i] = clamp(x * p.weights[i], p.minima[i], p.limits[i]);
  }
  return a;
}

Num smallest_breakpoint(const PswcProblem& p) {
  Num x = p.minima[0] / p.weights[0];
  for (std::size_t i = 1; i < p.weights.size(); ++i) {
    x = min(x, p.minima[i] / p.weights[i]);
  }
  return x;
}

Num phi(const PswcProblem& p, const Num& x) { return vec::sum(clamp_all(p, x)); }

}  // namespace

PswcSolution solve(const PswcProblem& p) {
  validate(p);
  const Num sum_m = check_feasible(p);
  if (p.capacity == sum_m) {
    return {p.minima, smallest_breakpoint(p)};
  }

  struct Event {
    Num at;          // candidate level bound/weight
    bool is_limit;   // false: agent leaves its floor; true: agent hits its cap
    std::size_t agent;
  };
  std::vector<Event> events;
  events.reserve(2 * p.weights.size());
  for (std::size_t i = 0; i < p.weights.size(); ++i) {
    events.push_back({p.minima[i] / p.weights[i], false, i});
    if (p.limits[i]) events.push_back({*p.limits[i] / p.weights[i], true, i});
  }
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.at < b.at; });

  // Sweep state over the current segment: phi(x) = fixed + slope * x, where
  // fixed collects floored/capped agents and slope the proportional ones.
  Num fixed = sum_m;
  Num slope;
  std::size_t k = 0;
  while (k < events.size()) {
    const Num v = events[k].at;
    // Segment ends at v; phi is linear on it and continuous at v.
    Num phi_v = fixed + slope * v;
    if (phi_v >= p.capacity) {
      // First segment whose right end reaches A. Earlier levels keep
      // phi < A, so the x solved here is the smallest valid level.
      assert(slope.is_positive());
      Num x = (p.capacity - fixed) / slope;
      PswcSolution sol{clamp_all(p, x), x};
      assert(vec::sum(sol.alloc) == p.capacity);
      return sol;
    }
    while (k < events.size() && events[k].at == v) {
      const Event& ev = events[k];
      if (!ev.is_limit) {
        fixed -= p.minima[ev.agent];
        slope += p.weights[ev.agent];
      } else {
        slope -= p.weights[ev.agent];
        fixed += *p.limits[ev.agent];
      }
      ++k;
    }
  }
  // Past the last breakpoint only uncapped agents still grow.
  if (!slope.is_positive()) throw InfeasibleHigh();
  Num x = (p.capacity - fixed) / slope;
  PswcSolution sol{clamp_all(p, x), x};
  assert(vec::sum(sol.alloc) == p.capacity);
  return sol;
}

PswcSolution oracle_solve(const PswcProblem& p, const Num& tol) {
  validate(p);
  if (!tol.is_positive()) throw std::invalid_argument("pswc: oracle tolerance must be > 0");
  const Num sum_m = check_feasible(p);
  if (p.capacity == sum_m) {
    return {p.minima, smallest_breakpoint(p)};
  }

  Num lo(0);
  Num hi(1);
  while (phi(p, hi) < p.capacity) hi *= Num(2);
  // Invariant: phi(lo) <= A <= phi(hi). phi is monotone and Lipschitz, so the
  // midpoint value converges to A and the loop terminates.
  for (;;) {
    Num mid = (lo + hi) / Num(2);
    Num f = phi(p, mid);
    if ((f - p.capacity).abs() <= tol) {
      return {clamp_all(p, mid), mid};
    }
    if (f < p.capacity) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
}

}  // namespace poolshare
