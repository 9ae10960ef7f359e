#pragma once

#include <cstddef>
#include <vector>

#include "poolshare/num.hpp"

namespace poolshare::vec {

// Small componentwise helpers shared by the solver and mechanism code.
// All functions assume equal lengths; callers validate shapes at the API edge.

inline Num sum(const std::vector<Num>& v) {
  Num s;
  for (const Num& x : v) s += x;
  return s;
}

inline std::vector<Num> add(const std::vector<Num>& a, const std::vector<Num>& b) {
  std::vector<Num> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline std::vector<Num> sub(const std::vector<Num>& a, const std::vector<Num>& b) {
  std::vector<Num> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline std::vector<Num> min(const std::vector<Num>& a, const std::vector<Num>& b) {
  std::vector<Num> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = poolshare::min(a[i], b[i]);
  return r;
}

inline std::vector<Num> zeros(std::size_t n) { return std::vector<Num>(n, Num(0)); }

}  // namespace poolshare::vec
