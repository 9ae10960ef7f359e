#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "poolshare/num.hpp"

namespace poolshare {

// Anything the caller can fix on the command line: bad flags, malformed
// config values, unreadable inputs, traces handed to the wrong audit mode.
// The tool maps this to exit code 2; verdict failures map to 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  // "synth", a bundled instance name, or a path to a task-event CSV.
  std::string instance = "synth";
  std::vector<std::string> mechanisms{"lendrecoup", "smmf", "dmmf", "karma"};
  Num alpha = Num(1, 2);     // karma's guaranteed fraction
  std::size_t rounds = 500;  // synthetic size; round cap for CSV traces
  std::size_t agents = 50;   // synthetic size; agent cap for CSV traces
  std::vector<std::uint64_t> seeds{1};
  std::string out_dir = "out";
  bool write_csv = true;  // tabular trace views next to the JSON traces
  bool write_json = true;
  void validate() const;  // throws UsageError
};

// Comma-separated flag values. Empty items and unknown tokens are
// UsageErrors, not silently dropped.
std::vector<std::string> split_list(const std::string& text);
std::vector<std::uint64_t> parse_seed_list(const std::string& text);
void apply_format(ExperimentConfig& config, const std::string& formats);

enum class AuditMode { Explicit, Refute, Osp, Sp };
std::optional<AuditMode> audit_mode_from_name(const std::string& name);

// Each command returns its exit code: 0 all good, 1 some verdict failed.
// Usage problems throw UsageError instead of returning.
int cmd_run(const ExperimentConfig& config, std::ostream& log);
int cmd_repro(const std::string& target, std::ostream& log);
int cmd_audit(const std::string& trace_path, AuditMode mode, const std::string& out_path,
              std::ostream& log);

}  // namespace poolshare
