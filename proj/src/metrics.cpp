#include "poolshare/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "poolshare/detail/vec.hpp"

namespace poolshare {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void check_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": size mismatch");
}

// min over values, max-or-median denominator helpers on exact rationals.
std::optional<Num> ratio_of(const std::vector<Num>& values, bool over_median) {
  if (values.empty()) return std::nullopt;
  std::vector<Num> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const Num& lo = sorted.front();
  const Num& den = over_median ? sorted[(sorted.size() - 1) / 2] : sorted.back();
  if (den.is_zero()) return std::nullopt;
  return lo / den;
}

std::string csv_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

SharingIndexResult sharing_index(const std::vector<Num>& U, const std::vector<Num>& U_static) {
  check_same_size(U.size(), U_static.size(), "sharing_index");
  SharingIndexResult r;
  r.ratio.resize(U.size());
  std::size_t retained = 0;
  std::size_t violating = 0;
  for (std::size_t i = 0; i < U.size(); ++i) {
    if (!U_static[i].is_positive()) {
      r.excluded.push_back(i + 1);
      continue;
    }
    Num ratio = U[i] / U_static[i];
    r.ratio[i] = ratio;
    if (!r.min_ratio || ratio < *r.min_ratio) r.min_ratio = ratio;
    ++retained;
    if (ratio < Num(1)) ++violating;
  }
  if (retained > 0) {
    r.pct_violations = Num(100) * Num(static_cast<long>(violating)) /
                       Num(static_cast<long>(retained));
  }
  return r;
}

double nash_welfare(const std::vector<Num>& U, const std::vector<Num>& endowments,
                    std::vector<std::size_t>* excluded) {
  check_same_size(U.size(), endowments.size(), "nash_welfare");
  Num weight_total(0);
  for (std::size_t i = 0; i < U.size(); ++i) {
    if (U[i].is_positive()) {
      weight_total += endowments[i];
    } else if (excluded) {
      excluded->push_back(i + 1);
    }
  }
  if (!weight_total.is_positive()) return kNan;
  double nw = 0;
  for (std::size_t i = 0; i < U.size(); ++i) {
    if (!U[i].is_positive()) continue;
    double w = (endowments[i] / weight_total).to_double();
    nw += w * std::log(U[i].to_double());
  }
  return nw;
}

double nash_welfare_normalized(const std::vector<Num>& U, const std::vector<Num>& U_static,
                               const std::vector<Num>& endowments,
                               std::vector<std::size_t>* excluded) {
  check_same_size(U.size(), U_static.size(), "nash_welfare_normalized");
  check_same_size(U.size(), endowments.size(), "nash_welfare_normalized");
  // Drop agents nonpositive on either side so both welfare sums cover the
  // same population.
  std::vector<Num> u, us, e;
  for (std::size_t i = 0; i < U.size(); ++i) {
    if (U[i].is_positive() && U_static[i].is_positive()) {
      u.push_back(U[i]);
      us.push_back(U_static[i]);
      e.push_back(endowments[i]);
    } else if (excluded) {
      excluded->push_back(i + 1);
    }
  }
  if (u.empty()) return kNan;
  double base = nash_welfare(us, e);
  double realized = nash_welfare(u, e);
  if (base == 0.0) return kNan;
  return realized / base;
}

RatioPair min_max_ratios(const std::vector<Num>& U, const std::vector<Num>& U_static,
                         const std::vector<Num>& endowments) {
  check_same_size(U.size(), U_static.size(), "min_max_ratios");
  check_same_size(U.size(), endowments.size(), "min_max_ratios");
  RatioPair out;
  // U_i / w_i with w_i = e_i / sum(e): the common factor sum(e) cancels in
  // min/max and min/median, so U_i / e_i is used directly.
  std::vector<Num> weighted;
  for (std::size_t i = 0; i < U.size(); ++i) weighted.push_back(U[i] / endowments[i]);
  out.weighted = ratio_of(weighted, false);

  std::vector<Num> six;
  for (std::size_t i = 0; i < U.size(); ++i) {
    if (U_static[i].is_positive()) six.push_back(U[i] / U_static[i]);
  }
  out.normalized = ratio_of(six, false);
  return out;
}

RatioPair equity_ratios(const std::vector<Num>& U, const std::vector<Num>& U_static,
                        const std::vector<Num>& endowments) {
  check_same_size(U.size(), U_static.size(), "equity_ratios");
  check_same_size(U.size(), endowments.size(), "equity_ratios");
  RatioPair out;
  std::vector<Num> weighted;
  for (std::size_t i = 0; i < U.size(); ++i) weighted.push_back(U[i] / endowments[i]);
  out.weighted = ratio_of(weighted, true);

  std::vector<Num> six;
  for (std::size_t i = 0; i < U.size(); ++i) {
    if (U_static[i].is_positive()) six.push_back(U[i] / U_static[i]);
  }
  out.normalized = ratio_of(six, true);
  return out;
}

ExactMetrics compute_exact_metrics(const Instance& instance, const AllocationTrace& trace) {
  validate_trace(instance, trace);
  if (instance.rounds() == 0) throw std::invalid_argument("metrics: empty trace");
  const std::vector<Num>& U = trace.cum_util.back();
  const std::vector<Num> U_static = static_utility(instance);

  ExactMetrics m;
  SharingIndexResult six = sharing_index(U, U_static);
  m.min_six = six.min_ratio;
  m.pct_si_violations = six.pct_violations;
  m.excluded = six.excluded;
  RatioPair mm = min_max_ratios(U, U_static, instance.endowments);
  RatioPair eq = equity_ratios(U, U_static, instance.endowments);
  m.wmm = mm.weighted;
  m.nmm = mm.normalized;
  m.weq = eq.weighted;
  m.neq = eq.normalized;
  m.nw = nash_welfare_normalized(U, U_static, instance.endowments);
  return m;
}

MetricsRow compute_metrics_row(const std::string& mechanism, const Instance& instance,
                               const AllocationTrace& trace) {
  ExactMetrics m = compute_exact_metrics(instance, trace);
  auto d = [](const std::optional<Num>& v) { return v ? v->to_double() : kNan; };
  MetricsRow row;
  row.mechanism = mechanism;
  row.nw = m.nw;
  row.min_six = d(m.min_six);
  row.pct_si_violations = m.pct_si_violations.to_double();
  row.wmm = d(m.wmm);
  row.nmm = d(m.nmm);
  row.weq = d(m.weq);
  row.neq = d(m.neq);
  return row;
}

std::string metrics_csv_header() {
  return "mechanism,nw,min_six,pct_si_violations,wmm,nmm,weq,neq";
}

std::string metrics_csv_row(const MetricsRow& r) {
  std::ostringstream os;
  os << r.mechanism << ',' << csv_num(r.nw) << ',' << csv_num(r.min_six) << ','
     << csv_num(r.pct_si_violations) << ',' << csv_num(r.wmm) << ',' << csv_num(r.nmm) << ','
     << csv_num(r.weq) << ',' << csv_num(r.neq);
  return os.str();
}

SummaryRow summarize(const std::string& mechanism, const std::vector<MetricsRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("summarize: no rows");
  auto stat = [&](auto field, double& mean, double& sd) {
    double sum = 0;
    for (const MetricsRow& r : rows) sum += field(r);
    mean = sum / static_cast<double>(rows.size());
    double var = 0;
    for (const MetricsRow& r : rows) {
      double dlt = field(r) - mean;
      var += dlt * dlt;
    }
    sd = std::sqrt(var / static_cast<double>(rows.size()));
  };
  SummaryRow s;
  s.mechanism = mechanism;
  stat([](const MetricsRow& r) { return r.nw; }, s.nw_mean, s.nw_std);
  stat([](const MetricsRow& r) { return r.min_six; }, s.min_six_mean, s.min_six_std);
  stat([](const MetricsRow& r) { return r.pct_si_violations; }, s.pct_mean, s.pct_std);
  stat([](const MetricsRow& r) { return r.wmm; }, s.wmm_mean, s.wmm_std);
  stat([](const MetricsRow& r) { return r.nmm; }, s.nmm_mean, s.nmm_std);
  stat([](const MetricsRow& r) { return r.weq; }, s.weq_mean, s.weq_std);
  stat([](const MetricsRow& r) { return r.neq; }, s.neq_mean, s.neq_std);
  return s;
}

std::string summary_csv_header() {
  return "mechanism,nw,nw_std,min_six,min_six_std,pct_si_violations,pct_si_violations_std,"
         "wmm,wmm_std,nmm,nmm_std,weq,weq_std,neq,neq_std";
}

std::string summary_csv_row(const SummaryRow& s) {
  std::ostringstream os;
  os << s.mechanism << ',' << csv_num(s.nw_mean) << ',' << csv_num(s.nw_std) << ','
     << csv_num(s.min_six_mean) << ',' << csv_num(s.min_six_std) << ',' << csv_num(s.pct_mean)
     << ',' << csv_num(s.pct_std) << ',' << csv_num(s.wmm_mean) << ',' << csv_num(s.wmm_std)
     << ',' << csv_num(s.nmm_mean) << ',' << csv_num(s.nmm_std) << ',' << csv_num(s.weq_mean)
     << ',' << csv_num(s.weq_std) << ',' << csv_num(s.neq_mean) << ',' << csv_num(s.neq_std);
  return os.str();
}

}  // namespace poolshare
