#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "rsw/cli/config.hpp"

namespace rsw::cli {

struct StudyOutcome {
  bool pass = false;
  double fitted_slope = 0.0;
  std::string status;
  std::filesystem::path out_dir;
};

/// Runs the study described by `config` (study.kind = approximation,
/// reduction or decay) and writes study.json plus study.csv / decay.csv.
/// `out_override`, when non-empty, replaces output.dir.
StudyOutcome run_study(const Config& config, const std::filesystem::path& out_override = {});

}  // namespace rsw::cli
