#include <cctype>
#include <exception>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "poolshare/cli.hpp"
#include "poolshare/num.hpp"

int main(int argc, char** argv) {
  using namespace poolshare;

  CLI::App app{"poolshare: run resource-pool sharing mechanisms, audit their credit ledgers,\n"
               "and reproduce the bundled worked examples"};
  app.require_subcommand(1);

  // run
  ExperimentConfig defaults;
  std::string instance = defaults.instance;
  std::string mechanisms = "lendrecoup,smmf,dmmf,karma";
  std::string alpha = "0.5";
  std::size_t rounds = defaults.rounds;
  std::size_t agents = defaults.agents;
  std::string seeds = "1";
  std::string out_dir = defaults.out_dir;
  std::string format = "csv,json";

  CLI::App* run_cmd = app.add_subcommand(
      "run", "simulate mechanisms on an instance and write traces, runs.csv, summary.csv");
  run_cmd->add_option("--instance", instance,
                      "\"synth\", a bundled instance name, or a task-event CSV path");
  run_cmd->add_option("--mechanisms", mechanisms,
                      "comma-separated: lendrecoup, smmf, dmmf, karma, static");
  run_cmd->add_option("--alpha", alpha, "karma's guaranteed fraction in [0,1], e.g. 0.5 or 1/2");
  run_cmd->add_option("--rounds", rounds, "synthetic rounds; round cap for CSV traces");
  run_cmd->add_option("--agents", agents, "synthetic agents; agent cap for CSV traces");
  run_cmd->add_option("--seeds", seeds, "comma-separated seeds, one run per (mechanism, seed)");
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_option("--format", format, "trace formats to write: csv, json");
  std::string config_path;
  run_cmd->add_option("--config", config_path, "flat key=value file; flags override it");

  // repro
  std::string target = "all";
  CLI::App* repro_cmd =
      app.add_subcommand("repro", "re-derive the bundled worked examples and report each check");
  repro_cmd->add_option("target", target, "all, motivating, prop43, thm44, or static_cf");

  // audit
  std::string trace_path;
  std::string mode = "explicit";
  std::string audit_out;
  CLI::App* audit_cmd =
      app.add_subcommand("audit", "check a stored trace: explicit, refute, osp, or sp");
  audit_cmd->add_option("trace", trace_path, "trace JSON file produced by run")->required();
  audit_cmd->add_option("--mode", mode, "explicit, refute, osp, or sp");
  audit_cmd->add_option("--out", audit_out, "report path (default: <trace>.audit.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      if (!config_path.empty()) {
        // Flat key=value defaults; any flag given on the command line keeps its value.
        std::ifstream in(config_path);
        if (!in) throw UsageError("cannot open config file \"" + config_path + "\"");
        auto trim = [](std::string s) {
          auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
          while (!s.empty() && ws(s.front())) s.erase(s.begin());
          while (!s.empty() && ws(s.back())) s.pop_back();
          return s;
        };
        auto as_count = [&](const std::string& key, const std::string& value) {
          std::size_t pos = 0;
          unsigned long long parsed = 0;
          try {
            parsed = std::stoull(value, &pos);
          } catch (const std::exception&) {
            pos = 0;
          }
          if (pos != value.size() || value.empty() || value.front() == '-') {
            throw UsageError("config: bad value \"" + value + "\" for " + key);
          }
          return static_cast<std::size_t>(parsed);
        };
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
          ++lineno;
          std::string text = trim(line);
          if (text.empty() || text.front() == '#') continue;
          auto eq = text.find('=');
          if (eq == std::string::npos) {
            throw UsageError("config: line " + std::to_string(lineno) + " is not key=value");
          }
          std::string key = trim(text.substr(0, eq));
          std::string value = trim(text.substr(eq + 1));
          static const std::set<std::string> known = {"instance", "mechanisms", "alpha", "rounds",
                                                      "agents",   "seeds",      "out",   "format"};
          if (!known.count(key)) throw UsageError("config: unknown key \"" + key + "\"");
          bool flag_given = run_cmd->count("--" + key) > 0;
          if (key == "instance") {
            if (!flag_given) instance = value;
          } else if (key == "mechanisms") {
            if (!flag_given) mechanisms = value;
          } else if (key == "alpha") {
            if (!flag_given) alpha = value;
          } else if (key == "rounds") {
            if (!flag_given) rounds = as_count(key, value);
          } else if (key == "agents") {
            if (!flag_given) agents = as_count(key, value);
          } else if (key == "seeds") {
            if (!flag_given) seeds = value;
          } else if (key == "out") {
            if (!flag_given) out_dir = value;
          } else if (key == "format") {
            if (!flag_given) format = value;
          }
        }
      }
      ExperimentConfig config;
      config.instance = instance;
      config.mechanisms = split_list(mechanisms);
      try {
        config.alpha = Num::parse(alpha);
      } catch (const std::exception&) {
        throw UsageError("bad alpha \"" + alpha + "\"");
      }
      config.rounds = rounds;
      config.agents = agents;
      config.seeds = parse_seed_list(seeds);
      config.out_dir = out_dir;
      apply_format(config, format);
      return cmd_run(config, std::cout);
    }
    if (repro_cmd->parsed()) return cmd_repro(target, std::cout);
    if (audit_cmd->parsed()) {
      auto parsed_mode = audit_mode_from_name(mode);
      if (!parsed_mode) {
        throw UsageError("unknown audit mode \"" + mode + "\" (explicit, refute, osp, sp)");
      }
      return cmd_audit(trace_path, *parsed_mode, audit_out, std::cout);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
