#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rsw/cli/config.hpp"
#include "rsw/core.hpp"
#include "rsw/invariants.hpp"
#include "rsw/timeint.hpp"

namespace rsw::cli {

enum class ModelKind { Boussinesq, WeakRotation, GN, GNMedium, Ostrovsky, KdV, PoincareLinear };

std::string_view to_string(ModelKind kind);
std::optional<ModelKind> parse_model(std::string_view text);
/// Names of the state fields, in storage order.
std::vector<std::string> field_names(ModelKind kind);
RegimeTag default_regime(ModelKind kind);

/// A fully resolved and validated simulation setup.
struct Scenario {
  ModelKind model = ModelKind::KdV;
  Regime regime;
  DimensionlessParams params;
  std::size_t n = 0;
  double length = 0.0;
  double h_min = 0.1;
  std::map<std::string, Field> initial;  ///< one entry per field_names(model)
  Field bathymetry;
  StepperConfig stepper;
  double every = 0.0;
  std::vector<double> snapshots;
  std::vector<Extra> extras;
  std::filesystem::path out_dir;
  nlohmann::json resolved;  ///< every setting after defaults
};

/// Reads and validates a scenario. Throws ConfigError (naming the key),
/// RegimeViolation or other ValidationErrors.
Scenario build_scenario(const Config& config);

struct RunResult {
  std::filesystem::path out_dir;
  std::vector<std::string> drift_flags;
};

/// Integrates the scenario and writes run.json, series.csv and snapshots/.
RunResult run_scenario(const Scenario& scenario);

}  // namespace rsw::cli
