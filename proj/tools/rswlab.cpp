// Command-line front end: `rswlab run <config>` and `rswlab study <config>`.
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "rsw/cli/config.hpp"
#include "rsw/cli/scenario.hpp"
#include "rsw/cli/study_runner.hpp"
#include "rsw/error.hpp"

namespace {

enum Exit { kOk = 0, kFailed = 1, kValidation = 2, kNumerical = 3 };

int run_command(const std::string& path, const std::string& out) {
  const auto cfg = rsw::cli::Config::load(path);
  rsw::cli::Scenario sc = rsw::cli::build_scenario(cfg);
  if (!out.empty()) {
    sc.out_dir = out;
    sc.resolved["output.dir"] = out;
  }
  const auto result = rsw::cli::run_scenario(sc);
  for (const auto& flag : result.drift_flags) std::fprintf(stderr, "warning: %s\n", flag.c_str());
  std::printf("wrote %s\n", result.out_dir.string().c_str());
  return kOk;
}

int study_command(const std::string& path, const std::string& out) {
  const auto cfg = rsw::cli::Config::load(path);
  const auto outcome = rsw::cli::run_study(cfg, out);
  std::printf("%s: slope %.4f status %s -> %s (wrote %s)\n", path.c_str(), outcome.fitted_slope,
              outcome.status.c_str(), outcome.pass ? "PASS" : "FAIL", outcome.out_dir.string().c_str());
  return outcome.pass ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotating shallow-water model laboratory"};
  app.require_subcommand(1);
  std::string config_path, out_dir;

  auto* run = app.add_subcommand("run", "integrate a scenario and write run.json, series.csv, snapshots/");
  run->add_option("config", config_path, "scenario file")->required();
  run->add_option("--out", out_dir, "output directory (overrides output.dir)");

  auto* study = app.add_subcommand("study", "run a convergence study and write study.json, study.csv");
  study->add_option("config", config_path, "study file")->required();
  study->add_option("--out", out_dir, "output directory (overrides output.dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    return run->parsed() ? run_command(config_path, out_dir) : study_command(config_path, out_dir);
  } catch (const rsw::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kValidation;
  } catch (const rsw::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailed;
  }
}
