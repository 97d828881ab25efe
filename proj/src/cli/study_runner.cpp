#include "rsw/cli/study_runner.hpp"

#include <chrono>
#include <cmath>

#include "rsw/cli/output.hpp"
#include "rsw/error.hpp"
#include "rsw/studies.hpp"

namespace rsw::cli {

namespace {

void check_mu_list(const std::vector<double>& mu) {
  if (mu.size() < 3) throw ValidationError("study.mu_list: need ≥ 3 mu values for a slope fit");
  for (double m : mu)
    if (!(m > 0.0)) throw ValidationError("study.mu_list: constraint 0 < mu violated (mu = " + std::to_string(m) + ")");
}

SlopeBand read_band(const Config& cfg, SlopeBand band) {
  band.lower = cfg.get_double("study.band_lower", band.lower);
  band.upper = cfg.get_double("study.band_upper", band.upper);
  if (!(band.lower <= band.upper)) throw ConfigError("key 'study.band_lower' exceeds 'study.band_upper'");
  return band;
}

std::size_t read_size(const Config& cfg, const std::string& key, std::size_t fallback) {
  const long long v = cfg.get_int(key, static_cast<long long>(fallback));
  if (v < 2) throw ConfigError("key '" + key + "' must be >= 2");
  return static_cast<std::size_t>(v);
}

StudyOutcome finish(const StudyReport& report, const std::filesystem::path& dir, nlohmann::json resolved) {
  nlohmann::json j = to_json(report);
  j["resolved_config"] = std::move(resolved);
  write_json(dir / "study.json", j);
  write_study_csv(dir, report);
  return {report.pass, report.fitted_slope, std::string(to_string(report.status)), dir};
}

}  // namespace

StudyOutcome run_study(const Config& cfg, const std::filesystem::path& out_override) {
  const std::string kind = cfg.require("study.kind");
  std::filesystem::path dir = cfg.get_string("output.dir", "out");
  if (!out_override.empty()) dir = out_override;
  const int threads = static_cast<int>(cfg.get_int("threads", 1));
  if (threads < 1) throw ConfigError("key 'threads' must be >= 1");
  nlohmann::json resolved{{"study.kind", kind}, {"threads", threads}, {"output.dir", dir.string()}};

  if (kind == "approximation") {
    ApproximationStudyConfig c;
    const std::string regime = cfg.require("study.regime");
    const auto tag = parse_regime_tag(regime);
    if (!tag || (*tag != RegimeTag::Poin && *tag != RegimeTag::Ost && *tag != RegimeTag::KdV))
      throw ConfigError("key 'study.regime': expected poin, ost or kdv, got '" + regime + "'");
    c.regime = *tag;
    if (cfg.has("study.mu_list")) c.mu_values = cfg.get_double_list("study.mu_list");
    c.T = cfg.get_double("study.T", c.T);
    c.n = read_size(cfg, "study.n", c.n);
    c.length = cfg.get_double("study.length", c.length);
    c.cfl = cfg.get_double("study.cfl", c.cfl);
    c.sigma = cfg.get_double("study.sigma", c.sigma);
    c.amplitude = cfg.get_double("study.amplitude", c.amplitude);
    c.observations = static_cast<int>(cfg.get_int("study.observations", c.observations));
    c.refinement_checks = cfg.get_bool("study.refinement", c.refinement_checks);
    c.threads = threads;
    const SlopeBand band = read_band(cfg, default_band(c.regime));
    cfg.reject_unknown();
    check_mu_list(c.mu_values);
    if (!(c.T > 0.0) || !(c.length > 0.0) || !(c.cfl > 0.0) || !(c.sigma > 0.0) || c.observations < 1)
      throw ConfigError("study: T, length, cfl, sigma and observations must be positive");
    resolved.update({{"study.regime", regime}, {"study.mu_list", c.mu_values}, {"study.T", c.T}, {"study.n", c.n},
                     {"study.length", c.length}, {"study.cfl", c.cfl}, {"study.sigma", c.sigma},
                     {"study.amplitude", c.amplitude}, {"study.observations", c.observations},
                     {"study.refinement", c.refinement_checks}, {"study.band_lower", band.lower},
                     {"study.band_upper", band.upper}});
    return finish(approximation_study(c, band), dir, resolved);
  }

  if (kind == "reduction") {
    ReductionStudyConfig c;
    const std::string pair = cfg.require("study.pair");
    const auto p = parse_reduction_pair(pair);
    if (!p) throw ConfigError("key 'study.pair': expected gn_bouss, bouss_weak or gn_medium_weak, got '" + pair + "'");
    c.pair = *p;
    if (cfg.has("study.mu_list")) c.mu_values = cfg.get_double_list("study.mu_list");
    c.n = read_size(cfg, "study.n", c.n);
    c.length = cfg.get_double("study.length", c.length);
    c.amplitude = cfg.get_double("study.amplitude", c.amplitude);
    c.refinement_checks = cfg.get_bool("study.refinement", c.refinement_checks);
    const SlopeBand band = read_band(cfg, default_band(c.pair));
    cfg.reject_unknown();
    check_mu_list(c.mu_values);
    if (!(c.length > 0.0)) throw ConfigError("key 'study.length' must be positive");
    resolved.update({{"study.pair", pair}, {"study.mu_list", c.mu_values}, {"study.n", c.n},
                     {"study.length", c.length}, {"study.amplitude", c.amplitude},
                     {"study.refinement", c.refinement_checks}, {"study.band_lower", band.lower},
                     {"study.band_upper", band.upper}});
    return finish(reduction_residual_study(c, band), dir, resolved);
  }

  if (kind == "decay") {
    const std::size_t n = read_size(cfg, "study.n", 2048);
    const double length = cfg.get_double("study.length", 800.0);
    const double t0 = cfg.get_double("study.t_min", 5.0);
    const double t1 = cfg.get_double("study.t_max", 100.0);
    const std::size_t samples = read_size(cfg, "study.samples", 64);
    const double sigma = cfg.get_double("study.sigma", 1.0);
    const double amplitude = cfg.get_double("study.amplitude", 1.0);
    const double lower = cfg.get_double("study.band_lower", 0.4);
    const double upper = cfg.get_double("study.band_upper", 0.6);
    cfg.reject_unknown();
    if (!(sigma > 0.0)) throw ConfigError("key 'study.sigma' must be positive");

    const auto start = std::chrono::steady_clock::now();
    const SpectralPlan plan(Grid1D(n, length));
    const LinearState s0{Field(n), gaussian(plan.grid(), amplitude, sigma), Field(n)};
    const DecayReport d = decay_study(s0, log_spaced(t0, t1, samples), plan);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = d.status == StudyStatus::Ok && d.exponent >= lower && d.exponent <= upper;

    resolved.update({{"study.n", n}, {"study.length", length}, {"study.t_min", t0}, {"study.t_max", t1},
                     {"study.samples", samples}, {"study.sigma", sigma}, {"study.amplitude", amplitude},
                     {"study.band_lower", lower}, {"study.band_upper", upper}});
    nlohmann::json j = to_json(d);
    j["name"] = "decay";
    j["fitted_slope"] = j["exponent"];
    j["band"] = {{"lower", lower}, {"upper", upper}};
    j["pass"] = pass;
    j["runtime_seconds"] = seconds;
    j["resolved_config"] = resolved;
    write_json(dir / "study.json", j);
    CsvWriter csv(dir / "decay.csv", {"t", "linf"});
    for (std::size_t i = 0; i < d.times.size(); ++i) csv.row({d.times[i], d.linf[i]});
    csv.close();
    return {pass, d.exponent, std::string(to_string(d.status)), dir};
  }

  throw ConfigError("key 'study.kind': expected approximation, reduction or decay, got '" + kind + "'");
}

}  // namespace rsw::cli
