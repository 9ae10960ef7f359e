#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "poolshare/core.hpp"
#include "poolshare/num.hpp"

namespace poolshare {

// Outcome metrics over final cumulative utilities U against the stay-alone
// baseline U_static. Everything except Nash welfare is computed in exact
// rationals; doubles appear only in the emitted row.

// Componentwise U_i / U_static_i. Agents with a zero baseline cannot be
// scored and land in `excluded` (1-based); min/pct range over the rest.
// pct_violations is the percentage of retained agents with ratio < 1.
struct SharingIndexResult {
  std::vector<std::optional<Num>> ratio;   // per agent; nullopt = excluded
  std::vector<std::size_t> excluded;
  std::optional<Num> min_ratio;            // absent if every agent is excluded
  Num pct_violations = Num(0);
};
SharingIndexResult sharing_index(const std::vector<Num>& U, const std::vector<Num>& U_static);

// Endowment-weighted log welfare sum_i w_i log U_i with w_i = e_i / sum e_j.
// Agents with nonpositive utility are excluded (reported via *excluded when
// given) and the weights renormalize over the rest, so equal utilities k give
// exactly log k. Returns NaN if no agent survives.
double nash_welfare(const std::vector<Num>& U, const std::vector<Num>& endowments,
                    std::vector<std::size_t>* excluded = nullptr);

// NW(U) / NW(U_static), excluding (from both sides) agents nonpositive on
// either side. NaN when the baseline welfare is zero.
double nash_welfare_normalized(const std::vector<Num>& U, const std::vector<Num>& U_static,
                               const std::vector<Num>& endowments,
                               std::vector<std::size_t>* excluded = nullptr);

// weighted: min_i(U_i/w_i) / max_i(U_i/w_i); normalized: min SIx / max SIx.
// Absent when the denominator is zero or no agent qualifies.
struct RatioPair {
  std::optional<Num> weighted;
  std::optional<Num> normalized;
};
RatioPair min_max_ratios(const std::vector<Num>& U, const std::vector<Num>& U_static,
                         const std::vector<Num>& endowments);

// Same numerators over the median (lower median for even counts).
RatioPair equity_ratios(const std::vector<Num>& U, const std::vector<Num>& U_static,
                        const std::vector<Num>& endowments);

// One emitted row per mechanism run. Column order mirrors the summary table.
struct MetricsRow {
  std::string mechanism;
  double nw = 0;                 // normalized Nash welfare
  double min_six = 0;
  double pct_si_violations = 0;  // in [0, 100]
  double wmm = 0;
  double nmm = 0;
  double weq = 0;
  double neq = 0;
};

// Exact counterparts used by tests and verdicts before any rounding.
struct ExactMetrics {
  std::optional<Num> min_six;
  Num pct_si_violations = Num(0);
  std::optional<Num> wmm, nmm, weq, neq;
  double nw = 0;
  std::vector<std::size_t> excluded;
};

ExactMetrics compute_exact_metrics(const Instance& instance, const AllocationTrace& trace);
MetricsRow compute_metrics_row(const std::string& mechanism, const Instance& instance,
                               const AllocationTrace& trace);

std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsRow& row);

// Mean/std aggregation across repetitions (population std: a single
// repetition reports 0). Row order of `rows` is preserved per mechanism.
struct SummaryRow {
  std::string mechanism;
  double nw_mean = 0, nw_std = 0;
  double min_six_mean = 0, min_six_std = 0;
  double pct_mean = 0, pct_std = 0;
  double wmm_mean = 0, wmm_std = 0;
  double nmm_mean = 0, nmm_std = 0;
  double weq_mean = 0, weq_std = 0;
  double neq_mean = 0, neq_std = 0;
};
SummaryRow summarize(const std::string& mechanism, const std::vector<MetricsRow>& rows);
std::string summary_csv_header();
std::string summary_csv_row(const SummaryRow& row);

}  // namespace poolshare
