#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <optional>
#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "poolshare/pswc.hpp"

using namespace poolshare;
using testutil::N;
using testutil::random_pswc;
using testutil::row;

namespace {

PswcProblem problem(const char* capacity, std::initializer_list<const char*> w,
                    std::initializer_list<const char*> m,
                    std::initializer_list<const char*> l) {
  PswcProblem p;
  p.capacity = N(capacity);
  p.weights = row(w);
  p.minima = row(m);
  for (const char* x : l) {
    if (std::string(x) == "inf")
      p.limits.emplace_back(std::nullopt);
    else
      p.limits.emplace_back(N(x));
  }
  return p;
}

Num clamp(const Num& v, const Num& lo, const std::optional<Num>& hi) {
  Num out = poolshare::max(v, lo);
  if (hi) out = poolshare::min(out, *hi);
  return out;
}

void check_clamp_form(const PswcProblem& p, const PswcSolution& s) {
  Num total(0);
  for (std::size_t i = 0; i < p.weights.size(); ++i) {
    CHECK(s.alloc[i] == clamp(s.level * p.weights[i], p.minima[i], p.limits[i]));
    CHECK(s.alloc[i] >= p.minima[i]);
    if (p.limits[i]) CHECK(s.alloc[i] <= *p.limits[i]);
    total += s.alloc[i];
  }
  CHECK(total == p.capacity);
}

}  // namespace

TEST_CASE("capped fill hits the caps one by one") {
  auto p = problem("3", {"1", "1", "1"}, {"1", "1", "0"}, {"1", "3", "0"});
  auto s = solve(p);
  CHECK(s.alloc == row({"1", "2", "0"}));
  CHECK(s.level == N("2"));
  check_clamp_form(p, s);
}

TEST_CASE("looser first cap shifts the split to equal shares") {
  auto p = problem("3", {"1", "1", "1"}, {"1", "1", "0"}, {"2", "3", "0"});
  auto s = solve(p);
  CHECK(s.alloc == row({"3/2", "3/2", "0"}));
  CHECK(s.level == N("3/2"));
  check_clamp_form(p, s);
}

TEST_CASE("capacity equal to the floor sum returns the floors") {
  auto p = problem("4", {"1", "1", "1"}, {"2", "2", "0"}, {"7/2", "7/2", "0"});
  auto s = solve(p);
  CHECK(s.alloc == row({"2", "2", "0"}));
  check_clamp_form(p, s);
}

TEST_CASE("capacity above the floor sum lifts unsaturated entries") {
  auto p = problem("6", {"1", "1", "1"}, {"2", "2", "0"}, {"7/2", "7/2", "0"});
  auto s = solve(p);
  CHECK(s.alloc == row({"3", "3", "0"}));
  CHECK(s.level == N("3"));
  check_clamp_form(p, s);
}

TEST_CASE("weights scale the fill rates") {
  auto p = problem("3", {"1", "2"}, {"0", "0"}, {"inf", "inf"});
  auto s = solve(p);
  CHECK(s.alloc == row({"1", "2"}));
  CHECK(s.level == N("1"));
  check_clamp_form(p, s);
}

TEST_CASE("capacity equal to the cap sum saturates everything") {
  auto p = problem("3", {"1", "1", "1"}, {"0", "0", "0"}, {"1", "0", "2"});
  auto s = solve(p);
  CHECK(s.alloc == row({"1", "0", "2"}));
  CHECK(s.level == N("2"));
  check_clamp_form(p, s);
}

TEST_CASE("infeasible capacities and malformed inputs throw") {
  CHECK_THROWS_AS(solve(problem("1", {"1", "1"}, {"1", "1"}, {"inf", "inf"})), InfeasibleLow);
  CHECK_THROWS_AS(solve(problem("5", {"1", "1"}, {"0", "0"}, {"1", "1"})), InfeasibleHigh);
  CHECK_THROWS_AS(solve(problem("1", {"1", "0"}, {"0", "0"}, {"inf", "inf"})),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve(problem("1", {"1", "-1"}, {"0", "0"}, {"inf", "inf"})),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve(problem("1", {"1", "1"}, {"-1", "0"}, {"inf", "inf"})),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve(problem("1", {"1", "1"}, {"2", "0"}, {"1", "inf"})),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve(problem("-1", {"1"}, {"0"}, {"inf"})), std::invalid_argument);
  PswcProblem empty;
  CHECK_THROWS_AS(solve(empty), std::invalid_argument);
  PswcProblem ragged;
  ragged.capacity = N("1");
  ragged.weights = row({"1", "1"});
  ragged.minima = row({"0"});
  ragged.limits = {std::nullopt, std::nullopt};
  CHECK_THROWS_AS(solve(ragged), std::invalid_argument);
}

TEST_CASE("oracle lands within tolerance of the worked examples") {
  const Num tol(1, 1000000000);
  auto near = [&](const PswcSolution& s, std::initializer_list<const char*> want) {
    auto w = row(want);
    REQUIRE(s.alloc.size() == w.size());
    for (std::size_t i = 0; i < w.size(); ++i) CHECK((s.alloc[i] - w[i]).abs() <= tol);
  };
  auto p = problem("3", {"1", "1", "1"}, {"1", "1", "0"}, {"1", "3", "0"});
  near(oracle_solve(p, tol), {"1", "2", "0"});
  auto q = problem("3", {"1", "1", "1"}, {"1", "1", "0"}, {"2", "3", "0"});
  near(oracle_solve(q, tol), {"3/2", "3/2", "0"});
}

TEST_CASE("random problems: exact sum, clamp form, oracle agreement") {
  SplitMix64 rng(0xC0FFEE);
  const Num tol(1, 1000000000);
  for (int k = 0; k < 400; ++k) {
    auto p = random_pswc(rng, 8);
    auto s = solve(p);
    check_clamp_form(p, s);
    auto o = oracle_solve(p, tol);
    for (std::size_t i = 0; i < p.weights.size(); ++i) {
      CHECK((s.alloc[i] - o.alloc[i]).abs() <= tol);
      CHECK(o.alloc[i] == clamp(o.level * p.weights[i], p.minima[i], p.limits[i]));
    }
  }
}

TEST_CASE("allocations grow with capacity") {
  SplitMix64 rng(0xBEEF);
  for (int k = 0; k < 200; ++k) {
    auto p = random_pswc(rng, 6);
    Num span(static_cast<long>(1 + rng.next_below(5)), static_cast<long>(1 + rng.next_below(3)));
    PswcProblem p2 = p;
    bool all_finite = true;
    Num cap_sum(0);
    for (const auto& l : p.limits) {
      if (!l) {
        all_finite = false;
        break;
      }
      cap_sum += *l;
    }
    p2.capacity = p.capacity + span;
    if (all_finite) p2.capacity = poolshare::min(p2.capacity, cap_sum);
    auto a1 = solve(p).alloc;
    auto a2 = solve(p2).alloc;
    for (std::size_t i = 0; i < a1.size(); ++i) CHECK(a1[i] <= a2[i]);
  }
}

TEST_CASE("changing inactive bounds of an interior entry is inert") {
  SplitMix64 rng(0xACE);
  int done = 0;
  while (done < 150) {
    auto p = random_pswc(rng, 6);
    auto s = solve(p);
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < s.alloc.size(); ++i) {
      bool above = s.alloc[i] > p.minima[i];
      bool below = !p.limits[i] || s.alloc[i] < *p.limits[i];
      if (above && below) {
        pick = i;
        break;
      }
    }
    if (!pick) continue;
    PswcProblem q = p;
    std::size_t i = *pick;
    q.minima[i] = s.alloc[i] * Num(static_cast<long>(rng.next_below(4)), 4);
    q.limits[i] = rng.next_below(3) == 0
                      ? std::optional<Num>(std::nullopt)
                      : std::optional<Num>(s.alloc[i] + Num(static_cast<long>(1 + rng.next_below(6)),
                                                            static_cast<long>(1 + rng.next_below(3))));
    auto s2 = solve(q);
    CHECK(s2.alloc == s.alloc);
    ++done;
  }
}
