#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "helpers.hpp"
#include "poolshare/mechanisms.hpp"
#include "poolshare/metrics.hpp"
#include "poolshare/workloads.hpp"

using namespace poolshare;
using testutil::N;
using testutil::make_instance;
using testutil::random_instance;
using testutil::row;

TEST_CASE("sharing index on the three-round example") {
  auto res = sharing_index(row({"4", "4", "1"}), row({"3", "3", "1"}));
  REQUIRE(res.ratio.size() == 3);
  CHECK(*res.ratio[0] == N("4/3"));
  CHECK(*res.ratio[2] == N("1"));
  CHECK(res.excluded.empty());
  CHECK(*res.min_ratio == N("1"));
  CHECK(res.pct_violations == N("0"));
}

TEST_CASE("sharing index flags shortfalls and excludes zero baselines") {
  auto res = sharing_index(row({"29/10", "3", "1"}), row({"3", "3", "1"}));
  CHECK(*res.min_ratio == N("29/30"));
  CHECK(res.pct_violations == N("100/3"));

  auto ex = sharing_index(row({"1", "1"}), row({"0", "2"}));
  REQUIRE(ex.excluded == std::vector<std::size_t>{1});
  CHECK_FALSE(ex.ratio[0].has_value());
  CHECK(*ex.ratio[1] == N("1/2"));
  CHECK(*ex.min_ratio == N("1/2"));
  CHECK(ex.pct_violations == N("100"));

  auto none = sharing_index(row({"1"}), row({"0"}));
  CHECK_FALSE(none.min_ratio.has_value());
  CHECK(none.pct_violations == N("0"));

  CHECK_THROWS_AS(sharing_index(row({"1"}), row({"1", "2"})), std::invalid_argument);
}

TEST_CASE("log welfare with endowment weights") {
  CHECK(nash_welfare(row({"7", "7", "7"}), row({"1", "2", "3"})) ==
        doctest::Approx(std::log(7)));
  CHECK(nash_welfare(row({"4", "4", "1"}), row({"1", "1", "1"})) ==
        doctest::Approx(2.0 * std::log(4) / 3.0));
  std::vector<std::size_t> excluded;
  CHECK(nash_welfare(row({"0", "4"}), row({"1", "1"}), &excluded) ==
        doctest::Approx(std::log(4)));
  CHECK(excluded == std::vector<std::size_t>{1});
  CHECK(std::isnan(nash_welfare(row({"0", "0"}), row({"1", "1"}))));
}

TEST_CASE("normalized log welfare") {
  CHECK(nash_welfare_normalized(row({"3", "3", "1"}), row({"3", "3", "1"}),
                                row({"1", "1", "1"})) == doctest::Approx(1.0));
  CHECK(nash_welfare_normalized(row({"4", "4", "1"}), row({"3", "3", "1"}),
                                row({"1", "1", "1"})) ==
        doctest::Approx(std::log(4) / std::log(3)));
  // Baseline welfare of all ones is zero: ratio undefined.
  CHECK(std::isnan(
      nash_welfare_normalized(row({"2", "2"}), row({"1", "1"}), row({"1", "1"}))));
}

TEST_CASE("spread ratios on the three-round example") {
  auto mm = min_max_ratios(row({"4", "4", "1"}), row({"3", "3", "1"}), row({"1", "1", "1"}));
  CHECK(*mm.weighted == N("1/4"));
  CHECK(*mm.normalized == N("3/4"));
  auto eq = equity_ratios(row({"4", "4", "1"}), row({"3", "3", "1"}), row({"1", "1", "1"}));
  CHECK(*eq.weighted == N("1/4"));
  CHECK(*eq.normalized == N("3/4"));
}

TEST_CASE("spread ratios: degenerate shapes") {
  auto solo = min_max_ratios(row({"5"}), row({"5"}), row({"2"}));
  CHECK(*solo.weighted == N("1"));
  CHECK(*solo.normalized == N("1"));
  auto zeros = min_max_ratios(row({"0", "0"}), row({"1", "1"}), row({"1", "1"}));
  CHECK_FALSE(zeros.weighted.has_value());
  CHECK_FALSE(zeros.normalized.has_value());  // max ratio is zero

  // Even count: the lower median is the first of the middle pair.
  auto eq = equity_ratios(row({"1", "3"}), row({"1", "3"}), row({"1", "1"}));
  CHECK(*eq.weighted == N("1"));
  CHECK(*eq.normalized == N("1"));
  auto eq2 = equity_ratios(row({"1", "2", "3", "4"}), row({"1", "1", "1", "1"}),
                           row({"1", "1", "1", "1"}));
  // U/w sorted: 4,8,12,16; lower median 8; min 4.
  CHECK(*eq2.weighted == N("1/2"));
}

TEST_CASE("scaling all utilities leaves normalized ratios fixed") {
  SplitMix64 rng(0xC0FFEE);
  for (int k = 0; k < 40; ++k) {
    std::size_t n = 1 + rng.next_below(6);
    std::vector<Num> U(n), S(n), e(n);
    for (std::size_t i = 0; i < n; ++i) {
      U[i] = Num(static_cast<long>(1 + rng.next_below(9)));
      S[i] = Num(static_cast<long>(1 + rng.next_below(9)));
      e[i] = Num(static_cast<long>(1 + rng.next_below(3)));
    }
    Num scale(static_cast<long>(1 + rng.next_below(7)), static_cast<long>(1 + rng.next_below(4)));
    std::vector<Num> U2(n), S2(n);
    for (std::size_t i = 0; i < n; ++i) {
      U2[i] = U[i] * scale;
      S2[i] = S[i] * scale;
    }
    auto a = min_max_ratios(U, S, e);
    auto b = min_max_ratios(U2, S2, e);
    CHECK(*a.normalized == *b.normalized);
    auto c = min_max_ratios(U2, S, e);  // only U scaled: weighted spread fixed
    CHECK(*a.weighted == *c.weighted);
    auto ea = equity_ratios(U, S, e);
    auto eb = equity_ratios(U2, S2, e);
    CHECK(*ea.normalized == *eb.normalized);
  }
}

TEST_CASE("stand-alone play scores as the fixed point of every ratio") {
  SplitMix64 rng(0xFADE);
  for (int k = 0; k < 30; ++k) {
    Instance inst = random_instance(rng, {.min_demand = 1});
    auto m = compute_exact_metrics(inst, run(MechanismKind::Static, inst));
    REQUIRE(m.min_six.has_value());
    CHECK(*m.min_six == N("1"));
    CHECK(m.pct_si_violations == N("0"));
    CHECK(*m.nmm == N("1"));
    CHECK(*m.neq == N("1"));
    // Normalized log welfare is 1 unless the baseline welfare is itself zero.
    double base = nash_welfare(static_utility(inst), inst.endowments);
    if (std::abs(base) > 1e-12) CHECK(m.nw == doctest::Approx(1.0));
    CHECK(m.excluded.empty());
  }
}

TEST_CASE("exact metrics for the three-round example") {
  Instance inst = bundled_instance("motivating_example");
  auto m = compute_exact_metrics(inst, run(MechanismKind::Smmf, inst));
  CHECK(*m.min_six == N("1"));
  CHECK(m.pct_si_violations == N("0"));
  CHECK(*m.wmm == N("1/4"));
  CHECK(*m.nmm == N("3/4"));
  CHECK(*m.weq == N("1/4"));
  CHECK(*m.neq == N("3/4"));
  CHECK(m.nw == doctest::Approx(std::log(4) / std::log(3)));
}

TEST_CASE("csv row shape") {
  CHECK(metrics_csv_header() == "mechanism,nw,min_six,pct_si_violations,wmm,nmm,weq,neq");
  Instance inst = bundled_instance("motivating_example");
  MetricsRow r = compute_metrics_row("smmf", inst, run(MechanismKind::Smmf, inst));
  CHECK(r.mechanism == "smmf");
  std::string line = metrics_csv_row(r);
  CHECK(line.substr(0, 5) == "smmf,");
  // 7 numeric fields after the name.
  std::size_t commas = 0;
  for (char ch : line) commas += ch == ',';
  CHECK(commas == 7);
  CHECK(line.find("0.75") != std::string::npos);  // nmm/neq emitted at %.12g
}

TEST_CASE("summary aggregation") {
  CHECK(summary_csv_header() ==
        "mechanism,nw,nw_std,min_six,min_six_std,pct_si_violations,pct_si_violations_std,"
        "wmm,wmm_std,nmm,nmm_std,weq,weq_std,neq,neq_std");
  MetricsRow a{"m", 1.0, 0.5, 10.0, 0.2, 0.4, 0.3, 0.6};
  MetricsRow b{"m", 3.0, 0.7, 30.0, 0.4, 0.8, 0.5, 0.8};
  SummaryRow s = summarize("m", {a, b});
  CHECK(s.nw_mean == doctest::Approx(2.0));
  CHECK(s.nw_std == doctest::Approx(1.0));
  CHECK(s.min_six_mean == doctest::Approx(0.6));
  CHECK(s.min_six_std == doctest::Approx(0.1));
  CHECK(s.pct_mean == doctest::Approx(20.0));
  CHECK(s.pct_std == doctest::Approx(10.0));

  SummaryRow single = summarize("m", {a});
  CHECK(single.nw_std == 0.0);
  CHECK(single.min_six_std == 0.0);
  CHECK(single.pct_std == 0.0);
  CHECK(single.nw_mean == doctest::Approx(1.0));

  std::string line = summary_csv_row(single);
  CHECK(line.substr(0, 2) == "m,");
  std::size_t commas = 0;
  for (char ch : line) commas += ch == ',';
  CHECK(commas == 14);

  CHECK_THROWS_AS(summarize("m", {}), std::invalid_argument);
}
