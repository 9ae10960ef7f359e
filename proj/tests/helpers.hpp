#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "poolshare/core.hpp"
#include "poolshare/num.hpp"
#include "poolshare/pswc.hpp"
#include "poolshare/rng.hpp"

namespace testutil {

inline poolshare::Num N(const char* text) { return poolshare::Num::parse(text); }
inline poolshare::Num N(long v) { return poolshare::Num(v); }

inline std::vector<poolshare::Num> row(std::initializer_list<const char*> xs) {
  std::vector<poolshare::Num> out;
  for (const char* x : xs) out.push_back(poolshare::Num::parse(x));
  return out;
}

inline poolshare::Matrix mat(std::initializer_list<std::initializer_list<const char*>> rows) {
  poolshare::Matrix out;
  for (const auto& r : rows) out.push_back(row(r));
  return out;
}

inline poolshare::Instance make_instance(
    std::initializer_list<const char*> endowments,
    std::initializer_list<std::initializer_list<const char*>> demands) {
  poolshare::Instance inst{row(endowments), mat(demands), std::nullopt};
  inst.validate();
  return inst;
}

// Random instances in the shape the randomized suites use: integer
// endowments in [1, max_endowment], integer demands in [min_demand,
// max_demand].
struct RandomSpec {
  std::size_t max_agents = 5;
  std::size_t max_rounds = 8;
  std::uint64_t min_demand = 0;
  std::uint64_t max_demand = 6;
  std::uint64_t max_endowment = 3;
};

inline poolshare::Instance random_instance(poolshare::SplitMix64& rng,
                                           const RandomSpec& spec = {}) {
  const std::size_t n = 1 + rng.next_below(spec.max_agents);
  const std::size_t T = 1 + rng.next_below(spec.max_rounds);
  std::vector<poolshare::Num> e(n);
  for (auto& x : e) x = poolshare::Num(static_cast<long>(1 + rng.next_below(spec.max_endowment)));
  poolshare::Matrix d(T, std::vector<poolshare::Num>(n));
  for (auto& r : d) {
    for (auto& x : r) {
      x = poolshare::Num(
          static_cast<long>(spec.min_demand + rng.next_below(spec.max_demand - spec.min_demand + 1)));
    }
  }
  poolshare::Instance inst{std::move(e), std::move(d), std::nullopt};
  inst.validate();
  return inst;
}

// Random feasible water-filling problems: rational weights/minima/limits,
// about a quarter of the limits unbounded, capacity drawn on a 16-step grid
// across the feasible band (hitting both ends).
inline poolshare::PswcProblem random_pswc(poolshare::SplitMix64& rng,
                                          std::size_t max_agents = 16) {
  using poolshare::Num;
  const std::size_t n = 1 + rng.next_below(max_agents);
  poolshare::PswcProblem p;
  p.weights.resize(n);
  p.minima.resize(n);
  p.limits.resize(n);
  Num lo(0);
  bool all_finite = true;
  Num finite_sum(0);
  for (std::size_t i = 0; i < n; ++i) {
    p.weights[i] = Num(static_cast<long>(1 + rng.next_below(8)),
                       static_cast<long>(1 + rng.next_below(4)));
    p.minima[i] = Num(static_cast<long>(rng.next_below(7)),
                      static_cast<long>(1 + rng.next_below(3)));
    lo += p.minima[i];
    if (rng.next_below(4) == 0) {
      p.limits[i] = std::nullopt;
      all_finite = false;
    } else {
      Num slack(static_cast<long>(rng.next_below(9)), static_cast<long>(1 + rng.next_below(3)));
      p.limits[i] = p.minima[i] + slack;
      finite_sum += *p.limits[i];
    }
  }
  const Num hi = all_finite ? finite_sum : lo + Num(10);
  p.capacity = lo + (hi - lo) * Num(static_cast<long>(rng.next_below(17)), 16);
  return p;
}

}  // namespace testutil
