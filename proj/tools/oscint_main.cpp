// oscint: resolutions, degeneracy reports and decay sweeps from JSON inputs.
// Exit codes: 0 ok, 1 input error, 2 genericity/hypothesis, 3 convergence, 4 replay mismatch.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "oscint/workbench.hpp"

namespace fs = std::filesystem;
using oscint::workbench::json;
namespace wb = oscint::workbench;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw oscint::InputError(path.string(), "cannot open for writing");
  out << text;
}

int finish(const std::string& command, const json& input, const wb::CommandResult& result,
           const std::string& record_path) {
  if (!record_path.empty()) write_text(record_path, wb::make_record(command, input, result).to_json().dump(2) + "\n");
  if (result.exit_code != wb::kOk) std::cerr << "oscint " << command << ": " << result.message << "\n";
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact snarl resolutions, polynomial degeneracy and oscillatory decay sweeps"};
  app.require_subcommand(1);

  std::string snarl_path, poly_path, maps_path, runspec_path, record_in;
  std::string out_path, json_path, record_path;
  std::uint64_t seed = 0;
  bool adversarial = false, allow_unconverged = false;

  auto* resolve = app.add_subcommand("resolve", "Resolve a snarl into a one-dimensional snarl");
  resolve->add_option("snarl", snarl_path, "Snarl JSON")->required();
  resolve->add_option("--seed", seed, "Seed for the random transversals");
  resolve->add_option("--out", out_path, "Directory for resolution.json and report.json");
  resolve->add_option("--record", record_path, "Write a replayable run record");

  auto* degeneracy = app.add_subcommand("degeneracy", "Decide degeneracy of a polynomial against maps");
  degeneracy->add_option("poly", poly_path, "Polynomial JSON")->required();
  degeneracy->add_option("maps", maps_path, "Maps JSON")->required();
  degeneracy->add_option("--out", out_path, "Report JSON path");
  degeneracy->add_option("--record", record_path, "Write a replayable run record");

  auto* sweep = app.add_subcommand("sweep", "Sweep |I(lambda)| and fit a decay exponent");
  sweep->add_option("runspec", runspec_path, "Run spec JSON")->required();
  sweep->add_option("--out", out_path, "CSV path");
  sweep->add_option("--json", json_path, "Rows and fit as JSON");
  sweep->add_flag("--adversarial", adversarial, "Use certificate-modulated bumps");
  sweep->add_flag("--allow-unconverged", allow_unconverged, "Keep going past the node cap");
  sweep->add_option("--record", record_path, "Write a replayable run record");

  auto* replay = app.add_subcommand("replay", "Rerun a record and diff against it");
  replay->add_option("record", record_in, "Run record JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : wb::kInputError;
  }

  try {
    if (*resolve) {
      const json input = {{"snarl", oscint::io::read_json_file(snarl_path)}, {"seed", seed}};
      const auto result = wb::run_command("resolve", input);
      if (result.exit_code == wb::kOk || result.output.contains("resolution")) {
        if (out_path.empty()) {
          std::cout << result.output.dump(2) << "\n";
        } else {
          write_text(fs::path(out_path) / "resolution.json", result.output["resolution"].dump(2) + "\n");
          write_text(fs::path(out_path) / "report.json", result.output["report"].dump(2) + "\n");
        }
        std::cerr << "steps: " << result.output["steps"]
                  << ", terminal_general_position: " << result.output["terminal_general_position"] << "\n";
      }
      return finish("resolve", input, result, record_path);
    }
    if (*degeneracy) {
      const json input = {{"poly", oscint::io::read_json_file(poly_path)},
                          {"maps", oscint::io::read_json_file(maps_path)}};
      const auto result = wb::run_command("degeneracy", input);
      if (result.exit_code == wb::kOk) {
        if (out_path.empty())
          std::cout << result.output.dump(2) << "\n";
        else
          write_text(out_path, result.output.dump(2) + "\n");
      }
      return finish("degeneracy", input, result, record_path);
    }
    if (*sweep) {
      const json input = {{"runspec", oscint::io::read_json_file(runspec_path)},
                          {"adversarial", adversarial},
                          {"allow_unconverged", allow_unconverged}};
      const auto result = wb::run_command("sweep", input);
      if (result.output.contains("rows")) {
        if (out_path.empty())
          std::cout << result.output["csv"].get<std::string>();
        else
          write_text(out_path, result.output["csv"].get<std::string>());
        json summary = result.output;
        summary.erase("csv");
        if (!json_path.empty()) write_text(json_path, summary.dump(2) + "\n");
        std::cerr << "fit: " << summary["fit"].dump() << "\n";
      }
      return finish("sweep", input, result, record_path);
    }
    if (*replay) {
      const auto record = wb::RunRecord::from_json(oscint::io::read_json_file(record_in));
      const auto outcome = wb::replay(record);
      for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
      if (outcome.exit_code != wb::kOk) {
        std::cout << json{{"run_id", record.run_id}, {"diff", wb::diff_to_json(outcome.diff)}}.dump(2) << "\n";
        std::cerr << "replay mismatch: " << outcome.diff.size() << " differing paths\n";
      } else {
        std::cerr << "replay ok: " << record.run_id << "\n";
      }
      return outcome.exit_code;
    }
  } catch (const oscint::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return wb::kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return wb::kInputError;
  }
  return wb::kOk;
}
