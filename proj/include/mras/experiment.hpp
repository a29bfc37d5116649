#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mras/adaptive.hpp"
#include "mras/analysis.hpp"
#include "mras/noise.hpp"
#include "mras/problem.hpp"
#include "mras/report.hpp"

namespace mras {

struct AdaptiveParams {
  std::string q0 = "const 1";
  std::string q_lin;  ///< empty: same as q0
  double M = 1.0;
  std::optional<double> C_coe;  ///< default: c_lower
  LipschitzMode lipschitz_mode = LipschitzMode::Formula;
  double lipschitz_value = 0.0;
  SigmaMode sigma = SigmaMode::Auto;
  StabilizerMode stabilizer = StabilizerMode::Guaranteed;
  std::optional<QUpdate> q_update;  ///< default: explicit (c), linear_implicit (a)
};

struct AnalysisParams {
  std::size_t samples = 100;
  double sample_radius = 0.5;
  bool dual_diagnostics = true;
  double rate_window_start = 0.0;  ///< fraction of T
  double rate_window_end = 1.0;
};

struct NoiseParams {
  NoiseConfig config;
  bool check_halving = false;  ///< also run at delta / 2 and check the plateau ratio
};

struct ExperimentConfig {
  ProblemParams problem;
  double T = 5.0;
  double dt = 1e-3;
  AdaptiveParams adaptive;
  std::optional<NoiseParams> noise;
  AnalysisParams analysis;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 1;
  std::size_t snapshot_stride = 10;  ///< every k-th time row in snapshot CSVs
};

/// Parses a JSON document. Unknown keys are rejected by name; type errors
/// carry the key path. Then validate_config runs.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::filesystem::path& path);

/// Throws ConfigError listing every violated constraint.
void validate_config(const ExperimentConfig& cfg);

/// Canonical JSON with every default filled in (the experiment's identity).
std::string config_to_json(const ExperimentConfig& cfg, bool include_output_dir = true);

/// Overrides the sampling seed and the noise seed.
void set_seed(ExperimentConfig& cfg, std::uint64_t seed);

struct ExperimentResult {
  ProblemSpec spec;
  AdaptiveConfig adaptive;
  Trajectory data;  ///< clean observations
  MrasRun run;
  std::optional<SmoothedData> smoothed;
  VerificationReport report;
  RateEstimate rate;
  double omega_pred = 0.0;
  double C_VH = 0.0;
  double plateau = 0.0;
  std::optional<double> plateau_ratio;
  std::size_t latency = 0;
  double wall_time = 0.0;
};

/// forward solve -> optional noise and smoothing -> MRAS -> verification.
/// With write_outputs, artifacts go to cfg.output_dir. On blow-up the
/// data and partial meta are written before BlowUpError propagates.
ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_outputs = true);

/// Data conditions and the maximum principle of the configured problem
/// (forward solve included, no MRAS run).
VerificationReport validate_experiment(const ExperimentConfig& cfg);

enum class ScanAxis { Delta, SpWidth, TiWindow, N, Dt };

ScanAxis parse_scan_axis(const std::string& name);
std::string to_string(ScanAxis axis);

struct ScanRow {
  double value = 0.0;
  std::string status;  ///< "ok", "blowup", "config", "error"
  double plateau = 0.0;
  double omega_hat = 0.0;
  double C_coe_empirical = 0.0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::optional<double> plateau_ratio;  ///< plateau(value_i) / plateau(value_{i+1})
};

/// One experiment per value (in parallel), each in output_dir/<axis>_<i>;
/// the summary goes to output_dir/scan.csv. Failed runs become rows.
std::vector<ScanRow> scan(const ExperimentConfig& base, ScanAxis axis,
                          const std::vector<double>& values, unsigned threads = 0);

std::string scan_csv(ScanAxis axis, const std::vector<ScanRow>& rows);

}  // namespace mras
