#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "poolshare/num.hpp"

namespace poolshare {

// Weighted water-filling with per-agent floors and caps: find x >= 0 with
//   a_i = clamp(x * w_i, m_i, l_i)  and  sum_i a_i = A.
// A limit of nullopt means the agent has no cap.
struct PswcProblem {
  Num capacity;                           // A >= 0
  std::vector<Num> weights;               // w_i > 0
  std::vector<Num> minima;                // m_i >= 0
  std::vector<std::optional<Num>> limits; // l_i >= m_i, or unbounded
};

// The allocation is unique; x need not be, so `level` reports the smallest
// valid x (for the degenerate A == sum(m) case: the smallest breakpoint).
struct PswcSolution {
  std::vector<Num> alloc;
  Num level;
};

struct InfeasibleLow : std::runtime_error {
  InfeasibleLow() : std::runtime_error("pswc: capacity below the sum of minima") {}
};
struct InfeasibleHigh : std::runtime_error {
  InfeasibleHigh() : std::runtime_error("pswc: capacity above the sum of limits") {}
};

// Exact breakpoint-scan solver, O(n log n): sort the candidate levels
// {m_i/w_i} and {l_i/w_i}, sweep segments of the piecewise-linear supply
// curve phi(x) = sum_i clamp(x*w_i, m_i, l_i), and solve the one linear
// segment that crosses A.
// Throws std::invalid_argument on malformed input (empty, shape mismatch,
// nonpositive weight, negative minimum, l < m, negative capacity);
// InfeasibleLow / InfeasibleHigh per the capacity bounds.
PswcSolution solve(const PswcProblem& problem);

// Independent reference: bisect phi(x) = A to within |phi - A| <= tol, then
// evaluate the clamps exactly at the bisected level. Components of the result
// differ from solve() by at most tol. Same errors as solve().
PswcSolution oracle_solve(const PswcProblem& problem, const Num& tol);

}  // namespace poolshare
