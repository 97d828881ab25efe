#include "rsw/cli/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "rsw/error.hpp"

namespace rsw::cli {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

}  // namespace

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) buffer_ += (i ? "," : "") + header[i];
  buffer_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw Error("CSV row width does not match the header of " + path_.string());
  for (std::size_t i = 0; i < values.size(); ++i) buffer_ += (i ? "," : "") + format_number(values[i]);
  buffer_ += '\n';
}

void CsvWriter::row(const std::string& label, const std::vector<double>& values) {
  if (values.size() + 1 != columns_) throw Error("CSV row width does not match the header of " + path_.string());
  buffer_ += label;
  for (double v : values) buffer_ += "," + format_number(v);
  buffer_ += '\n';
}

void CsvWriter::close() {
  if (closed_) return;
  closed_ = true;
  write_file(path_, buffer_);
}

CsvWriter::~CsvWriter() {
  if (!closed_) {
    try {
      close();
    } catch (...) {
    }
  }
}

void write_snapshot(const std::filesystem::path& path, const Grid1D& grid, const std::vector<std::string>& names,
                    const std::vector<const Field*>& fields) {
  std::vector<std::string> header{"x"};
  header.insert(header.end(), names.begin(), names.end());
  CsvWriter csv(path, header);
  std::vector<double> row(fields.size() + 1);
  for (std::size_t j = 0; j < grid.n(); ++j) {
    row[0] = grid.x(j);
    for (std::size_t f = 0; f < fields.size(); ++f) row[f + 1] = (*fields[f])[j];
    csv.row(row);
  }
  csv.close();
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_file(path, j.dump(2) + "\n"); }

namespace {

// JSON has no NaN or infinity.
nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

nlohmann::json to_json(const StudyReport& r) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : r.points) {
    points.push_back({{"mu", p.mu},
                      {"error", number(p.error)},
                      {"error_refined_n", number(p.error_refined_n)},
                      {"error_refined_dt", number(p.error_refined_dt)},
                      {"included", p.included},
                      {"note", p.note}});
  }
  nlohmann::json errors = nlohmann::json::array();
  for (double e : r.errors) errors.push_back(number(e));
  return {{"name", r.name},
          {"mu_values", r.mu_values},
          {"errors", errors},
          {"fitted_slope", number(r.fitted_slope)},
          {"expected_slope", r.band.target},
          {"band", {{"lower", number(r.band.lower)},
                    {"upper", number(r.band.upper)},
                    {"strictly_above", number(r.band.strictly_above)}}},
          {"pass", r.pass},
          {"status", std::string(to_string(r.status))},
          {"runtime_seconds", r.runtime_seconds},
          {"points", points},
          {"note", r.note}};
}

nlohmann::json to_json(const DecayReport& r) {
  return {{"exponent", number(r.exponent)}, {"status", std::string(to_string(r.status))}, {"samples", r.times.size()}};
}

void write_study_csv(const std::filesystem::path& dir, const StudyReport& report) {
  CsvWriter study(dir / "study.csv", {"mu", "error", "error_refined_n", "error_refined_dt", "included"});
  for (const auto& p : report.points)
    study.row({p.mu, p.error, p.error_refined_n, p.error_refined_dt, p.included ? 1.0 : 0.0});
  study.close();
  CsvWriter series(dir / "study_series.csv", {"mu", "t", "error"});
  for (const auto& p : report.points)
    for (const auto& [t, e] : p.series) series.row({p.mu, t, e});
  series.close();
}

}  // namespace rsw::cli
