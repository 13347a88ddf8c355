#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oscint/io.hpp"

namespace oscint::workbench {

using io::json;

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kInputError = 1, kGenericity = 2, kConvergence = 3, kReplayMismatch = 4 };

/// Outcome of one command. `output` is what a record stores and what replay compares.
struct CommandResult {
  int exit_code = kOk;
  json output;
  std::vector<std::uint64_t> seeds;
  std::string message;
};

/// Commands are pure functions of their input document:
///   resolve     {"snarl": <snarl>, "seed": N}
///   degeneracy  {"poly": <poly>, "maps": <maps>}
///   sweep       {"runspec": <runspec>, "adversarial": bool, "allow_unconverged": bool}
/// Library errors map onto exit codes; nothing escapes except std::bad_alloc.
CommandResult run_command(const std::string& command, const json& input);

CommandResult run_resolve(const json& input);
CommandResult run_degeneracy(const json& input);
CommandResult run_sweep(const json& input);

struct RunRecord {
  std::string run_id;
  std::string command;
  json input;
  json output;
  std::vector<std::uint64_t> seeds;
  std::string tool_version;
  std::string timestamp;
  int exit_code = kOk;

  json to_json() const;
  static RunRecord from_json(const json& j);
};

/// Hex SHA-256 over the command, the canonical input dump and the seeds.
std::string content_hash(const std::string& command, const json& input, const std::vector<std::uint64_t>& seeds);

RunRecord make_record(const std::string& command, const json& input, const CommandResult& result);

struct DiffEntry {
  std::string path;
  json recorded;
  json replayed;
};

struct ReplayOutcome {
  int exit_code = kOk;
  std::vector<DiffEntry> diff;
  std::vector<std::string> warnings;
};

/// Reruns the recorded command. Exact commands must reproduce the output
/// byte for byte; sweeps compare numbers to the run spec's refine_tol.
ReplayOutcome replay(const RunRecord& record);

json diff_to_json(const std::vector<DiffEntry>& diff);

}  // namespace oscint::workbench
