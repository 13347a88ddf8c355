#include "oscint/workbench.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

namespace oscint::workbench {

namespace {

CommandResult failure(int code, const std::string& message) {
  CommandResult r;
  r.exit_code = code;
  r.message = message;
  r.output = {{"error", message}, {"exit_code", code}};
  return r;
}

bool flag(const json& input, const char* key) {
  if (!input.contains(key)) return false;
  if (!input[key].is_boolean()) throw InputError(key, "expected a boolean");
  return input[key].get<bool>();
}

const json& required(const json& input, const char* key) {
  if (!input.is_object()) throw InputError("input", "expected an object");
  if (!input.contains(key)) throw InputError(key, "missing field");
  return input[key];
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool is_exact_command(const std::string& command) { return command == "resolve" || command == "degeneracy"; }

void numeric_diff(const json& a, const json& b, const std::string& path, double tol, std::vector<DiffEntry>& out) {
  if (a.is_number() && b.is_number() && !a.is_boolean() && !b.is_boolean()) {
    const double x = a.get<double>(), y = b.get<double>();
    const double scale = std::max({std::abs(x), std::abs(y), 1e-300});
    if (std::abs(x - y) > tol * scale && std::abs(x - y) > 1e-14) out.push_back({path, a, b});
    return;
  }
  if (a.type() != b.type()) {
    out.push_back({path, a, b});
    return;
  }
  if (a.is_object()) {
    for (const auto& [k, v] : a.items()) {
      const std::string p = path + "/" + k;
      if (!b.contains(k))
        out.push_back({p, v, nullptr});
      else
        numeric_diff(v, b[k], p, tol, out);
    }
    for (const auto& [k, v] : b.items())
      if (!a.contains(k)) out.push_back({path + "/" + k, nullptr, v});
    return;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) {
      out.push_back({path, a, b});
      return;
    }
    for (std::size_t i = 0; i < a.size(); ++i) numeric_diff(a[i], b[i], path + "/" + std::to_string(i), tol, out);
    return;
  }
  if (a != b) out.push_back({path, a, b});
}

std::vector<DiffEntry> exact_diff(const json& recorded, const json& replayed) {
  std::vector<DiffEntry> out;
  if (recorded.dump() == replayed.dump()) return out;
  for (const auto& op : json::diff(recorded, replayed)) {
    const std::string path = op["path"].get<std::string>();
    const json::json_pointer ptr(path);
    out.push_back({path, recorded.contains(ptr) ? recorded.at(ptr) : json(nullptr),
                   replayed.contains(ptr) ? replayed.at(ptr) : json(nullptr)});
  }
  if (out.empty()) out.push_back({"", recorded, replayed});
  return out;
}

}  // namespace

CommandResult run_resolve(const json& input) {
  const Snarl snarl = io::snarl_from_json(required(input, "snarl"));
  const json& seed_json = required(input, "seed");
  if (!seed_json.is_number_integer() || seed_json.get<long long>() < 0)
    throw InputError("seed", "expected a non-negative integer");
  const std::uint64_t seed = seed_json.get<std::uint64_t>();

  CommandResult r;
  r.seeds = {seed};
  if (!check_weak_hypothesis(snarl)) {
    std::ostringstream msg;
    msg << "weak hypothesis fails: max codim + sum of codims = " << codim_max(snarl) << " + " << codim_sum(snarl)
        << " = " << codim_max(snarl) + codim_sum(snarl) << " > 2m = " << 2 * snarl.ambient_dim();
    return failure(kGenericity, msg.str());
  }
  try {
    const Resolution res = resolve(snarl, seed);
    const ResolutionReport report = verify_resolution(res);
    r.output = {{"resolution", io::resolution_to_json(res)},
                {"report", io::report_to_json(report)},
                {"seed", seed},
                {"steps", res.steps.size()},
                {"terminal_general_position", res.terminal_general_position}};
    for (const auto& step : res.steps) r.seeds.insert(r.seeds.end(), step.seeds_used.begin(), step.seeds_used.end());
    r.message = "resolved in " + std::to_string(res.steps.size()) + " steps";
    if (!report.passed()) {
      r.exit_code = kGenericity;
      r.message = "resolution failed verification";
    }
  } catch (const GenericityFailure& e) {
    CommandResult f = failure(kGenericity, std::string(e.what()) + " (step " + std::to_string(e.step) + ")");
    f.output["step"] = e.step;
    f.seeds = r.seeds;
    return f;
  } catch (const HypothesisViolated& e) {
    return failure(kGenericity, e.what());
  } catch (const CannotPartition& e) {
    return failure(kGenericity, e.what());
  }
  return r;
}

CommandResult run_degeneracy(const json& input) {
  const MultiPoly p = io::poly_from_json(required(input, "poly"), "poly");
  const auto maps = io::maps_from_json(required(input, "maps"), "maps");
  for (const auto& m : maps)
    if (static_cast<std::size_t>(m.matrix.cols()) != p.num_vars())
      throw InputError("maps", "map '" + m.label + "' has " + std::to_string(m.matrix.cols()) +
                                   " columns but the polynomial has " + std::to_string(p.num_vars()) + " variables");
  CommandResult r;
  try {
    const DegeneracyReport report = is_degenerate(p, maps);
    r.output = io::degeneracy_to_json(report);
    r.output["nd_norm"] = report.quotient_norm;
    r.message = report.is_degenerate ? "degenerate" : "nondegenerate";
  } catch (const NonSurjective& e) {
    throw InputError("maps", e.what());
  }
  return r;
}

CommandResult run_sweep(const json& input) {
  const io::RunSpec spec = io::runspec_from_json(required(input, "runspec"));
  const bool adversarial = flag(input, "adversarial") || spec.adversarial;
  const bool allow_unconverged = flag(input, "allow_unconverged");

  CommandResult r;
  r.seeds = {spec.seed};
  DecaySweep s;
  if (adversarial) {
    const DegeneracyReport report = is_degenerate(spec.phase, spec.maps);
    if (!report.is_degenerate)
      throw InputError("runspec.phase", "adversarial bumps need a degenerate phase; nd_norm = " +
                                            std::to_string(report.quotient_norm));
    s = sweep_adversarial(spec.phase, spec.maps, *report.certificate, spec.boxes, spec.lambdas, spec.quadrature);
  } else {
    std::vector<BumpSpec> fs;
    for (const auto& b : spec.boxes) fs.push_back(BumpSpec::smooth(b));
    s = sweep(spec.phase, spec.maps, fs, spec.lambdas, spec.quadrature);
  }
  try {
    s.fit = fit_decay(s, spec.tail_from);
  } catch (const InsufficientTail&) {
    s.fit.reset();
  }
  r.output = io::sweep_to_json(s);
  r.output["adversarial"] = adversarial;
  r.output["relative_spread"] = relative_spread(s);
  r.output["refine_tol"] = spec.quadrature.refine_tol;
  r.output["csv"] = io::sweep_to_csv(s);

  const auto failed = std::count_if(s.rows.begin(), s.rows.end(), [](const SweepRow& row) { return row.failed; });
  r.message = std::to_string(s.rows.size()) + " rows, " + std::to_string(failed) + " unconverged";
  if (failed > 0 && !allow_unconverged) r.exit_code = kConvergence;
  return r;
}

CommandResult run_command(const std::string& command, const json& input) {
  try {
    if (command == "resolve") return run_resolve(input);
    if (command == "degeneracy") return run_degeneracy(input);
    if (command == "sweep") return run_sweep(input);
    return failure(kInputError, "unknown command '" + command + "'");
  } catch (const InputError& e) {
    return failure(kInputError, e.what());
  } catch (const DimensionMismatch& e) {
    return failure(kInputError, e.what());
  } catch (const PreconditionError& e) {
    return failure(kInputError, e.what());
  } catch (const GenericityFailure& e) {
    return failure(kGenericity, e.what());
  } catch (const NodeCapExceeded& e) {
    return failure(kConvergence, e.what());
  } catch (const nlohmann::json::exception& e) {
    return failure(kInputError, e.what());
  } catch (const Error& e) {
    return failure(kInputError, e.what());
  }
}

std::string content_hash(const std::string& command, const json& input, const std::vector<std::uint64_t>& seeds) {
  std::string payload = command + "\n" + input.dump() + "\n";
  for (auto s : seeds) payload += std::to_string(s) + ",";
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(payload.data(), payload.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

json RunRecord::to_json() const {
  return {{"run_id", run_id}, {"command", command},           {"input", input},         {"output", output},
          {"seeds", seeds},   {"tool_version", tool_version}, {"timestamp", timestamp}, {"exit_code", exit_code}};
}

RunRecord RunRecord::from_json(const json& j) {
  RunRecord r;
  try {
    r.command = j.at("command").get<std::string>();
    r.input = j.at("input");
    r.output = j.at("output");
    r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    r.run_id = j.value("run_id", "");
    r.tool_version = j.value("tool_version", "");
    r.timestamp = j.value("timestamp", "");
    r.exit_code = j.value("exit_code", 0);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("record", e.what());
  }
  return r;
}

RunRecord make_record(const std::string& command, const json& input, const CommandResult& result) {
  RunRecord r;
  r.command = command;
  r.input = input;
  r.output = result.output;
  r.seeds = result.seeds;
  r.tool_version = kToolVersion;
  r.timestamp = utc_now();
  r.exit_code = result.exit_code;
  r.run_id = content_hash(command, input, result.seeds);
  return r;
}

ReplayOutcome replay(const RunRecord& record) {
  ReplayOutcome out;
  if (record.tool_version != kToolVersion)
    out.warnings.push_back("record was written by version '" + record.tool_version + "', replaying with " +
                           kToolVersion + " on a best-effort basis");
  if (!record.run_id.empty() && content_hash(record.command, record.input, record.seeds) != record.run_id)
    out.warnings.push_back("run_id does not match the recorded command, input and seeds");

  const CommandResult fresh = run_command(record.command, record.input);
  if (fresh.seeds != record.seeds) out.diff.push_back({"/seeds", record.seeds, fresh.seeds});
  if (fresh.exit_code != record.exit_code) out.diff.push_back({"/exit_code", record.exit_code, fresh.exit_code});

  if (is_exact_command(record.command) || fresh.exit_code == kInputError) {
    auto d = exact_diff(record.output, fresh.output);
    out.diff.insert(out.diff.end(), d.begin(), d.end());
  } else {
    double tol = 1e-4;
    try {
      tol = io::runspec_from_json(record.input.at("runspec")).quadrature.refine_tol;
    } catch (const std::exception&) {
    }
    json recorded = record.output, replayed = fresh.output;
    // The CSV repeats the rows at full precision; the rows are compared numerically instead.
    recorded.erase("csv");
    replayed.erase("csv");
    numeric_diff(recorded, replayed, "", tol, out.diff);
  }
  out.exit_code = out.diff.empty() ? kOk : kReplayMismatch;
  return out;
}

json diff_to_json(const std::vector<DiffEntry>& diff) {
  json out = json::array();
  for (const auto& d : diff) out.push_back({{"path", d.path}, {"recorded", d.recorded}, {"replayed", d.replayed}});
  return out;
}

}  // namespace oscint::workbench
