#include "poolshare/core.hpp"

#include <stdexcept>
#include <string>

#include "poolshare/detail/vec.hpp"

namespace poolshare {

namespace {

void check_matrix_shape(const Matrix& m, std::size_t rounds, std::size_t agents,
                        const char* what) {
  if (m.size() != rounds) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(rounds) +
                                " rows, got " + std::to_string(m.size()));
  }
  for (const auto& row : m) {
    if (row.size() != agents) {
      throw std::invalid_argument(std::string(what) + ": ragged row, expected " +
                                  std::to_string(agents) + " entries");
    }
  }
}

}  // namespace

Num Instance::total_endowment() const { return vec::sum(endowments); }

void Instance::validate() const {
  if (endowments.empty()) throw std::invalid_argument("instance: no agents");
  for (const Num& e : endowments) {
    if (!e.is_positive()) throw std::invalid_argument("instance: endowments must be > 0");
  }
  check_matrix_shape(demands, demands.size(), agents(), "instance demands");
  for (const auto& row : demands) {
    for (const Num& d : row) {
      if (d.is_negative()) throw std::invalid_argument("instance: negative demand");
    }
  }
  if (true_demands) {
    check_matrix_shape(*true_demands, rounds(), agents(), "instance true demands");
    for (const auto& row : *true_demands) {
      for (const Num& d : row) {
        if (d.is_negative()) throw std::invalid_argument("instance: negative true demand");
      }
    }
  }
}

void validate_trace(const Instance& instance, const AllocationTrace& trace) {
  instance.validate();
  const std::size_t T = instance.rounds();
  const std::size_t n = instance.agents();
  check_matrix_shape(trace.alloc, T, n, "trace allocations");
  check_matrix_shape(trace.credits, T + 1, n, "trace credits");
  check_matrix_shape(trace.util, T, n, "trace utilities");
  check_matrix_shape(trace.cum_util, T, n, "trace cumulative utilities");

  const Num E = instance.total_endowment();
  for (std::size_t i = 0; i < n; ++i) {
    if (!trace.credits[0][i].is_zero()) {
      throw std::invalid_argument("trace: opening credits must be zero");
    }
  }
  std::vector<Num> running(n, Num(0));
  for (std::size_t t = 0; t < T; ++t) {
    Num row_sum;
    for (std::size_t i = 0; i < n; ++i) {
      const Num& a = trace.alloc[t][i];
      if (a.is_negative()) throw std::invalid_argument("trace: negative allocation");
      row_sum += a;
      if (trace.util[t][i] != min(a, instance.demands[t][i])) {
        throw std::invalid_argument("trace: utility row is not min(alloc, demand)");
      }
      running[i] += trace.util[t][i];
      if (trace.cum_util[t][i] != running[i]) {
        throw std::invalid_argument("trace: cumulative utilities are not prefix sums");
      }
    }
    if (row_sum > E) throw std::invalid_argument("trace: round allocation exceeds the pool");
  }
}

Num utility(const Num& alloc, const Num& demand) {
  if (alloc.is_negative()) throw std::invalid_argument("utility: negative allocation");
  if (demand.is_negative()) throw std::invalid_argument("utility: negative demand");
  return min(alloc, demand);
}

PeCheck is_pareto_efficient(const Instance& instance, const AllocationTrace& trace) {
  validate_trace(instance, trace);
  const Num E = instance.total_endowment();
  for (std::size_t t = 0; t < instance.rounds(); ++t) {
    std::size_t under_served = 0;
    bool any_under = false;
    Num used;
    for (std::size_t i = 0; i < instance.agents(); ++i) {
      used += trace.util[t][i];
      if (!any_under && trace.alloc[t][i] < instance.demands[t][i]) {
        any_under = true;
        under_served = i;
      }
    }
    if (any_under && used != E) {
      return {false, t + 1, under_served + 1};
    }
  }
  return {};
}

std::vector<Num> static_utility(const Instance& instance) {
  instance.validate();
  std::vector<Num> total(instance.agents(), Num(0));
  const Matrix& d = instance.truth();
  for (std::size_t t = 0; t < instance.rounds(); ++t) {
    for (std::size_t i = 0; i < instance.agents(); ++i) {
      total[i] += min(d[t][i], instance.endowments[i]);
    }
  }
  return total;
}

Matrix static_utility_prefix(const Instance& instance) {
  instance.validate();
  Matrix out(instance.rounds(), std::vector<Num>(instance.agents()));
  std::vector<Num> running(instance.agents(), Num(0));
  const Matrix& d = instance.truth();
  for (std::size_t t = 0; t < instance.rounds(); ++t) {
    for (std::size_t i = 0; i < instance.agents(); ++i) {
      running[i] += min(d[t][i], instance.endowments[i]);
      out[t][i] = running[i];
    }
  }
  return out;
}

SiReport check_sharing_incentives(const Instance& instance, const AllocationTrace& trace) {
  validate_trace(instance, trace);
  const Matrix& d = instance.truth();
  SiReport report;
  report.first_violation.assign(instance.agents(), std::nullopt);
  std::vector<Num> realized(instance.agents(), Num(0));
  std::vector<Num> baseline(instance.agents(), Num(0));
  for (std::size_t t = 0; t < instance.rounds(); ++t) {
    for (std::size_t i = 0; i < instance.agents(); ++i) {
      realized[i] += min(trace.alloc[t][i], d[t][i]);
      baseline[i] += min(d[t][i], instance.endowments[i]);
      if (!report.first_violation[i] && realized[i] < baseline[i]) {
        report.first_violation[i] = t + 1;
        report.pass = false;
      }
    }
  }
  return report;
}

}  // namespace poolshare
