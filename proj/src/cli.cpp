#include "poolshare/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "poolshare/credit_audit.hpp"
#include "poolshare/mechanisms.hpp"
#include "poolshare/metrics.hpp"
#include "poolshare/trace_io.hpp"
#include "poolshare/workloads.hpp"

namespace poolshare {

namespace fs = std::filesystem;
using nlohmann::json;

void ExperimentConfig::validate() const {
  if (instance.empty()) throw UsageError("instance must be named");
  if (mechanisms.empty()) throw UsageError("at least one mechanism is required");
  for (const std::string& m : mechanisms) {
    if (!mechanism_from_name(m)) {
      throw UsageError("unknown mechanism \"" + m +
                       "\" (expected lendrecoup, smmf, dmmf, karma, or static)");
    }
  }
  if (alpha < Num(0) || alpha > Num(1)) throw UsageError("alpha must lie in [0, 1]");
  if (rounds == 0 || agents == 0) throw UsageError("rounds and agents must be positive");
  if (seeds.empty()) throw UsageError("at least one seed is required");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string::size_type start = 0;
  while (true) {
    std::string::size_type comma = text.find(',', start);
    std::string item = text.substr(start, comma - start);
    if (item.empty()) throw UsageError("empty item in list \"" + text + "\"");
    items.push_back(std::move(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const std::string& item : split_list(text)) {
    try {
      std::size_t pos = 0;
      unsigned long long v = std::stoull(item, &pos);
      if (pos != item.size()) throw std::invalid_argument("trailing junk");
      seeds.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("bad seed \"" + item + "\"");
    }
  }
  return seeds;
}

void apply_format(ExperimentConfig& config, const std::string& formats) {
  config.write_csv = false;
  config.write_json = false;
  for (const std::string& item : split_list(formats)) {
    if (item == "csv") {
      config.write_csv = true;
    } else if (item == "json") {
      config.write_json = true;
    } else {
      throw UsageError("unknown format \"" + item + "\" (expected csv, json)");
    }
  }
}

std::optional<AuditMode> audit_mode_from_name(const std::string& name) {
  if (name == "explicit") return AuditMode::Explicit;
  if (name == "refute") return AuditMode::Refute;
  if (name == "osp") return AuditMode::Osp;
  if (name == "sp") return AuditMode::Sp;
  return std::nullopt;
}

namespace {

Instance instance_for(const ExperimentConfig& config, std::uint64_t seed, bool& synthetic) {
  synthetic = false;
  if (config.instance == "synth") {
    WorkloadConfig wc;
    wc.agents = config.agents;
    wc.rounds = config.rounds;
    wc.seed = seed;
    synthetic = true;
    try {
      return synth_bursty(wc);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  const auto& catalog = bundled_instances();
  if (auto it = catalog.find(config.instance); it != catalog.end()) return it->second;
  std::ifstream in(config.instance);
  if (!in) {
    throw UsageError("instance \"" + config.instance +
                     "\" is neither bundled nor a readable file");
  }
  try {
    std::vector<TaskEvent> events = read_task_events_csv(in);
    WorkloadConfig wc;
    wc.max_agents = config.agents;
    wc.max_rounds = config.rounds;
    wc.seed = seed;
    return bucket_trace(std::move(events), wc);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write \"" + path.string() + "\"");
  return out;
}

std::string fmt_vec(const std::vector<Num>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].to_string();
  }
  return s + ")";
}

std::string fmt_rows(const Matrix& m) {
  std::string s;
  for (std::size_t t = 0; t < m.size(); ++t) {
    if (t) s += " ";
    s += fmt_vec(m[t]);
  }
  return s;
}

}  // namespace

int cmd_run(const ExperimentConfig& config, std::ostream& log) {
  config.validate();
  fs::path out(config.out_dir);
  fs::create_directories(out / "traces");

  std::ofstream runs_csv = open_out(out / "runs.csv");
  std::string runs_header = metrics_csv_header();
  runs_header.insert(std::string("mechanism").size(), ",seed");
  runs_csv << runs_header << "\n";

  std::ofstream summary_csv = open_out(out / "summary.csv");
  summary_csv << summary_csv_header() << "\n";

  for (const std::string& mech : config.mechanisms) {
    MechanismKind kind = *mechanism_from_name(mech);
    std::vector<MetricsRow> rows;
    for (std::uint64_t seed : config.seeds) {
      bool synthetic = false;
      Instance inst = instance_for(config, seed, synthetic);
      AllocationTrace trace = run(kind, inst, config.alpha);
      MetricsRow row = compute_metrics_row(mech, inst, trace);

      std::string line = metrics_csv_row(row);
      line.insert(line.find(','), "," + std::to_string(seed));
      runs_csv << line << "\n";

      const std::string stem = mech + "_seed" + std::to_string(seed);
      if (config.write_json) {
        TraceFile tf;
        tf.mechanism = mech;
        if (kind == MechanismKind::Karma) tf.alpha = config.alpha;
        tf.instance = inst;
        tf.trace = trace;
        if (synthetic) tf.rng = "splitmix64";
        tf.seed = seed;
        open_out(out / "traces" / (stem + ".json")) << trace_file_to_json(tf) << "\n";
      }
      if (config.write_csv) {
        std::ofstream csv = open_out(out / "traces" / (stem + ".csv"));
        write_trace_csv(csv, inst, trace);
      }
      log << "run " << mech << " seed " << seed << ": agents " << inst.agents() << ", rounds "
          << inst.rounds() << ", min SIx " << row.min_six << ", SI violations "
          << row.pct_si_violations << "%\n";
      rows.push_back(std::move(row));
    }
    summary_csv << summary_csv_row(summarize(mech, rows)) << "\n";
  }
  log << "wrote " << (out / "runs.csv").string() << ", " << (out / "summary.csv").string()
      << ", traces under " << (out / "traces").string() << "\n";
  return 0;
}

namespace {

struct ReproReport {
  std::ostream& log;
  std::size_t passed = 0;
  std::size_t total = 0;
  void check(const std::string& target, const std::string& what, bool ok,
             const std::string& expected, const std::string& actual) {
    ++total;
    if (ok) {
      ++passed;
      log << "[" << target << "] " << what << ": ok, " << actual << "\n";
    } else {
      log << "[" << target << "] " << what << ": FAIL, expected " << expected << ", got " << actual
          << "\n";
    }
  }
};

std::string describe(const RefuteWitness& w) {
  std::string s = "round " + std::to_string(w.round) + ", " + condition_name(w.condition);
  if (w.agent) s += ", agent " + std::to_string(*w.agent);
  if (w.trigger_agent) s += ", over-cap agent " + std::to_string(*w.trigger_agent);
  return s;
}

std::string describe(const AuditEntry& e) {
  std::string s = std::string(condition_name(e.condition)) + " at round " + std::to_string(e.round);
  if (e.agent) s += ", agent " + std::to_string(*e.agent);
  if (e.trigger_agent) s += ", over-cap agent " + std::to_string(*e.trigger_agent);
  if (!e.detail.empty()) s += " (" + e.detail + ")";
  return s;
}

void repro_motivating(ReproReport& r) {
  const Instance inst = bundled_instance("motivating_example");

  AllocationTrace smmf = run(MechanismKind::Smmf, inst);
  const std::vector<Num> want_smmf{Num(4), Num(4), Num(1)};
  r.check("motivating", "smmf final utilities", smmf.cum_util.back() == want_smmf,
          fmt_vec(want_smmf), fmt_vec(smmf.cum_util.back()));

  AllocationTrace lr = run(MechanismKind::LendRecoup, inst);
  const std::vector<Num> want_lr{Num(3), Num(3), Num(3)};
  r.check("motivating", "lendrecoup final utilities", lr.cum_util.back() == want_lr,
          fmt_vec(want_lr), fmt_vec(lr.cum_util.back()));

  AuditReport audit = audit_explicit(inst, lr);
  r.check("motivating", "lendrecoup credit audit", audit.pass, "PASS",
          audit.pass ? "PASS" : describe(*audit.first_failure()));

  PeCheck pe = is_pareto_efficient(inst, lr);
  r.check("motivating", "lendrecoup efficiency", pe.pass, "PASS",
          pe.pass ? "PASS"
                  : "idle supply at round " + std::to_string(pe.round) + " with agent " +
                        std::to_string(pe.agent) + " under-served");
}

void repro_prop43(ReproReport& r) {
  const Instance inst = bundled_instance("prop43");

  AllocationTrace tr = run(MechanismKind::Smmf, inst);
  const Matrix want{{Num(0), Num(2)}, {Num(1), Num(1)}};
  r.check("prop43", "smmf allocations", tr.alloc == want, fmt_rows(want), fmt_rows(tr.alloc));

  RefuteResult rr = refute_credit_existence(inst, tr);
  const bool ok = rr.refuted && rr.witness && rr.witness->round == 2 &&
                  rr.witness->condition == Condition::CF5 && rr.witness->trigger_agent &&
                  *rr.witness->trigger_agent == 2;
  std::string actual = rr.refuted ? "REFUTED (" + describe(*rr.witness) + ")" : "CONSISTENT";
  r.check("prop43", "credit ledger refutation", ok, "REFUTED (round 2, CF5, over-cap agent 2)",
          actual);
}

void repro_thm44(ReproReport& r) {
  const Instance inst = bundled_instance("thm44");

  AllocationTrace tr = run(MechanismKind::LendRecoup, inst);
  const Matrix want_util{{Num(1), Num(2), Num(0)},
                         {Num(1), Num(0), Num(2)},
                         {Num(0), Num(1), Num(2)},
                         {Num(0), Num(1), Num(2)},
                         {Num(2), Num(1), Num(0)}};
  r.check("thm44", "lendrecoup round utilities", tr.util == want_util, fmt_rows(want_util),
          fmt_rows(tr.util));

  const Matrix want_credits{{Num(0), Num(0), Num(0)},
                            {Num(0), Num(-1), Num(1)},
                            {Num(0), Num(0), Num(0)},
                            {Num(1), Num(0), Num(-1)},
                            {Num(2), Num(0), Num(-2)}};
  const Matrix got_credits(tr.credits.begin(), tr.credits.begin() + 5);
  r.check("thm44", "lendrecoup credit ledger", got_credits == want_credits,
          fmt_rows(want_credits), fmt_rows(got_credits));

  // Agent 1 stays quiet in round 1 and recoups the lent unit later.
  const std::vector<Num> schedule{Num(0), Num(2), Num(0), Num(0), Num(3)};
  SpProbeResult probe = sp_probe(MechanismKind::LendRecoup, inst, 1, schedule);
  const bool ok = probe.truthful_utility == Num(4) && probe.misreport_utility == Num(9, 2);
  const std::string actual = "truthful " + probe.truthful_utility.to_string() + ", deviated " +
                             probe.misreport_utility.to_string();
  r.check("thm44", "round-1 underreport gain", ok, "truthful 4, deviated 9/2", actual);
}

void repro_static_cf(ReproReport& r) {
  for (const auto& [name, inst] : bundled_instances()) {
    AllocationTrace tr = run(MechanismKind::Static, inst);
    bool zero_credits = true;
    for (const auto& row : tr.credits) {
      for (const Num& c : row) {
        if (!c.is_zero()) zero_credits = false;
      }
    }
    AuditReport audit = audit_explicit(inst, tr);
    std::string actual = !zero_credits ? "nonzero credit ledger"
                         : audit.pass  ? "PASS"
                                       : describe(*audit.first_failure());
    r.check("static_cf", name + " zero-credit audit", zero_credits && audit.pass, "PASS", actual);
  }
}

}  // namespace

int cmd_repro(const std::string& target, std::ostream& log) {
  const bool all = target == "all";
  if (!all && target != "motivating" && target != "prop43" && target != "thm44" &&
      target != "static_cf") {
    throw UsageError("unknown repro target \"" + target +
                     "\" (all, motivating, prop43, thm44, static_cf)");
  }
  ReproReport r{log};
  if (all || target == "motivating") repro_motivating(r);
  if (all || target == "prop43") repro_prop43(r);
  if (all || target == "thm44") repro_thm44(r);
  if (all || target == "static_cf") repro_static_cf(r);
  log << "repro: " << r.passed << "/" << r.total << " checks passed\n";
  return r.passed == r.total ? 0 : 1;
}

namespace {

json entry_json(const AuditEntry& e) {
  json j{{"round", e.round},
         {"condition", condition_name(e.condition)},
         {"verdict", verdict_name(e.verdict)}};
  if (e.agent) j["agent"] = *e.agent;
  if (e.trigger_agent) j["trigger_agent"] = *e.trigger_agent;
  if (!e.detail.empty()) j["detail"] = e.detail;
  return j;
}

json nums_json(const std::vector<Num>& v) {
  json arr = json::array();
  for (const Num& x : v) arr.push_back(x.to_string());
  return arr;
}

std::string default_audit_path(const std::string& trace_path) {
  const std::string suffix = ".json";
  if (trace_path.size() > suffix.size() && trace_path.ends_with(suffix)) {
    return trace_path.substr(0, trace_path.size() - suffix.size()) + ".audit.json";
  }
  return trace_path + ".audit.json";
}

}  // namespace

int cmd_audit(const std::string& trace_path, AuditMode mode, const std::string& out_path,
              std::ostream& log) {
  std::ifstream in(trace_path);
  if (!in) throw UsageError("cannot open trace file \"" + trace_path + "\"");
  std::stringstream buf;
  buf << in.rdbuf();
  TraceFile tf;
  try {
    tf = trace_file_from_json(buf.str());
  } catch (const std::exception& e) {
    throw UsageError("trace parse: " + std::string(e.what()));
  }

  json report;
  report["schema_id"] = "poolshare-audit-v1";
  report["trace"] = trace_path;
  report["mechanism"] = tf.mechanism;
  int exit_code = 0;

  switch (mode) {
    case AuditMode::Explicit: {
      report["mode"] = "explicit";
      AuditReport rep = audit_explicit(tf.instance, tf.trace);
      report["pass"] = rep.pass;
      report["checked"] = rep.entries.size();
      json failures = json::array();
      for (const AuditEntry& e : rep.entries) {
        if (e.verdict == Verdict::Fail) failures.push_back(entry_json(e));
      }
      report["failures"] = failures;
      exit_code = rep.pass ? 0 : 1;
      log << "audit explicit: " << (rep.pass ? "PASS" : "FAIL") << "\n";
      if (!rep.pass) log << "first failure: " << describe(*rep.first_failure()) << "\n";
      break;
    }
    case AuditMode::Refute: {
      report["mode"] = "refute";
      RefuteResult rr;
      try {
        rr = refute_credit_existence(tf.instance, tf.trace);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      report["refuted"] = rr.refuted;
      if (rr.witness) {
        json w{{"round", rr.witness->round}, {"condition", condition_name(rr.witness->condition)}};
        if (rr.witness->agent) w["agent"] = *rr.witness->agent;
        if (rr.witness->trigger_agent) w["trigger_agent"] = *rr.witness->trigger_agent;
        if (!rr.witness->detail.empty()) w["detail"] = rr.witness->detail;
        report["witness"] = w;
      }
      json bounds = json::array();
      for (const CreditBoundsState& b : rr.bounds) {
        bounds.push_back(json{{"lower", nums_json(b.lower)}, {"upper", nums_json(b.upper)}});
      }
      report["bounds"] = bounds;
      exit_code = rr.refuted ? 1 : 0;
      log << "audit refute: "
          << (rr.refuted ? "REFUTED (" + describe(*rr.witness) + ")"
                         : std::string("CONSISTENT (existence not disproved)"))
          << "\n";
      break;
    }
    case AuditMode::Osp: {
      report["mode"] = "osp";
      auto kind = mechanism_from_name(tf.mechanism);
      if (!kind) throw UsageError("trace mechanism \"" + tf.mechanism + "\" is not recognized");
      const Num alpha = tf.alpha.value_or(Num(1, 2));
      const std::vector<Num> grid = default_osp_grid(tf.instance);
      OspResult res = check_osp(*kind, tf.instance, grid, alpha);
      report["pass"] = res.pass;
      report["grid"] = nums_json(grid);
      if (res.witness) {
        report["witness"] = json{{"agent", res.witness->agent},
                                 {"round", res.witness->round},
                                 {"deviation", res.witness->deviation.to_string()},
                                 {"truthful_utility", res.witness->truthful_utility.to_string()},
                                 {"deviated_utility", res.witness->deviated_utility.to_string()}};
      }
      exit_code = res.pass ? 0 : 1;
      log << "audit osp: " << (res.pass ? "PASS" : "FAIL") << "\n";
      if (res.witness) {
        log << "profitable deviation: agent " << res.witness->agent << " round "
            << res.witness->round << " reports " << res.witness->deviation.to_string() << " ("
            << res.witness->truthful_utility.to_string() << " -> "
            << res.witness->deviated_utility.to_string() << ")\n";
      }
      break;
    }
    case AuditMode::Sp: {
      report["mode"] = "sp";
      auto kind = mechanism_from_name(tf.mechanism);
      if (!kind) throw UsageError("trace mechanism \"" + tf.mechanism + "\" is not recognized");
      const Num alpha = tf.alpha.value_or(Num(1, 2));
      const std::size_t n = tf.instance.agents();
      const std::size_t T = tf.instance.rounds();
      if (n > 3 || T > 4) {
        throw UsageError("sp mode enumerates every report schedule; limited to 3 agents, 4 rounds");
      }
      const std::vector<Num> grid = default_osp_grid(tf.instance);
      std::size_t per_agent = 1;
      for (std::size_t t = 0; t < T; ++t) {
        per_agent *= grid.size();
        if (per_agent > 200000) {
          throw UsageError("sp mode schedule grid is too large for exhaustive search");
        }
      }
      bool pass = true;
      std::size_t checked = 0;
      json witness;
      for (std::size_t agent = 1; agent <= n && pass; ++agent) {
        std::vector<std::size_t> idx(T, 0);
        while (true) {
          std::vector<Num> schedule(T);
          for (std::size_t t = 0; t < T; ++t) schedule[t] = grid[idx[t]];
          SpProbeResult probe = sp_probe(*kind, tf.instance, agent, schedule, alpha);
          ++checked;
          if (probe.truthful_utility < probe.misreport_utility) {
            pass = false;
            witness = json{{"agent", agent},
                           {"schedule", nums_json(schedule)},
                           {"truthful_utility", probe.truthful_utility.to_string()},
                           {"misreport_utility", probe.misreport_utility.to_string()}};
            break;
          }
          std::size_t t = 0;
          while (t < T && ++idx[t] == grid.size()) idx[t++] = 0;
          if (t == T) break;
        }
      }
      report["pass"] = pass;
      report["schedules_checked"] = checked;
      if (!pass) report["witness"] = witness;
      exit_code = pass ? 0 : 1;
      log << "audit sp: " << (pass ? "PASS" : "FAIL") << " (" << checked << " schedules)\n";
      break;
    }
  }

  const std::string path = out_path.empty() ? default_audit_path(trace_path) : out_path;
  open_out(path) << report.dump(2) << "\n";
  log << "wrote " << path << "\n";
  return exit_code;
}

}  // namespace poolshare
