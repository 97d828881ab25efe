#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rsw/core.hpp"
#include "rsw/studies.hpp"

namespace rsw::cli {

/// Scientific notation with 17 significant digits ("nan"/"inf" for non-finite).
std::string format_number(double value);

/// Writes a CSV file with a mandatory header row.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  /// First column text (e.g. a name), remaining columns numeric.
  void row(const std::string& label, const std::vector<double>& values);
  void close();
  ~CsvWriter();

 private:
  std::filesystem::path path_;
  std::string buffer_;
  std::size_t columns_;
  bool closed_ = false;
};

/// Snapshot file: columns x followed by one column per named field.
void write_snapshot(const std::filesystem::path& path, const Grid1D& grid, const std::vector<std::string>& names,
                    const std::vector<const Field*>& fields);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

nlohmann::json to_json(const StudyReport& report);
nlohmann::json to_json(const DecayReport& report);

/// study.csv (mu, error, error_refined_n, error_refined_dt, included) and
/// study_series.csv (mu, t, error).
void write_study_csv(const std::filesystem::path& dir, const StudyReport& report);

}  // namespace rsw::cli
