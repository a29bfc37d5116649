#include "mras/noise.hpp"

#include <cmath>
#include <random>

#include "mras/error.hpp"

namespace mras {

void validate_noise_config(const NoiseConfig& cfg) {
  std::vector<std::string> errs;
  if (!(cfg.delta >= 0.0)) errs.push_back("noise delta must be nonnegative");
  if (!(cfg.p >= 2.0)) errs.push_back("noise exponent p must be at least 2");
  if (!(cfg.sp_width >= 0.0)) errs.push_back("sp_width must be nonnegative");
  if (cfg.ti_window == 0 || cfg.ti_window % 2 == 0) errs.push_back("ti_window must be odd and positive");
  if (!errs.empty()) {
    std::string msg = "invalid noise configuration:";
    for (const auto& e : errs) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
}

double discrete_lp_norm(const std::vector<double>& values, double dt, double p) {
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v), p);
  return std::pow(dt * s, 1.0 / p);
}

double discrete_lp_h_norm(const std::vector<ScalarField>& samples, double dt, double p) {
  std::vector<double> n;
  n.reserve(samples.size());
  for (const auto& s : samples) n.push_back(norm(s, NormKind::H));
  return discrete_lp_norm(n, dt, p);
}

Trajectory add_noise(const Trajectory& clean, const NoiseConfig& cfg) {
  validate_noise_config(cfg);
  if (clean.empty()) throw DomainError("cannot add noise to an empty trajectory");
  if (cfg.delta == 0.0) return clean;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<ScalarField> pert;
  pert.reserve(clean.size());
  for (const auto& s : clean.snapshots) {
    ScalarField p(s.grid());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = normal(rng);
    pert.push_back(std::move(p));
  }
  const double dt = clean.size() > 1 ? clean.dt() : 1.0;
  const double scale = cfg.delta / discrete_lp_h_norm(pert, dt, cfg.p);
  Trajectory out;
  out.times = clean.times;
  out.snapshots.reserve(clean.size());
  for (std::size_t k = 0; k < clean.size(); ++k) out.snapshots.push_back(clean.snapshots[k] + scale * pert[k]);
  return out;
}

ScalarField smooth_spatial(const ScalarField& sample, const NoiseConfig& cfg) {
  if (!(cfg.sp_width >= 0.0)) throw ConfigError("sp_width must be nonnegative");
  if (cfg.sp_width == 0.0) return sample;
  const double s = cfg.sp_width;
  const auto R = static_cast<std::ptrdiff_t>(std::ceil(4.0 * s));
  std::vector<double> w(static_cast<std::size_t>(2 * R + 1));
  double sum = 0.0;
  for (std::ptrdiff_t j = -R; j <= R; ++j) {
    double v = std::exp(-0.5 * static_cast<double>(j * j) / (s * s));
    w[static_cast<std::size_t>(j + R)] = v;
    sum += v;
  }
  for (double& v : w) v /= sum;
  const auto n = static_cast<std::ptrdiff_t>(sample.size());
  ScalarField out(sample.grid());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::ptrdiff_t j = -R; j <= R; ++j) {
      std::ptrdiff_t m = i + j;
      if (m >= 0 && m < n) acc += w[static_cast<std::size_t>(j + R)] * sample[static_cast<std::size_t>(m)];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

std::size_t temporal_lookahead(const NoiseConfig& cfg) { return (cfg.ti_window - 1) / 2; }

SmoothedData smooth_temporal(const Trajectory& noisy, const NoiseConfig& cfg, const Trajectory* clean,
                             const Trajectory* clean_dz) {
  validate_noise_config(cfg);
  const std::size_t N = noisy.size();
  if (N < 2) throw DomainError("temporal smoothing needs at least two samples");
  if (cfg.ti_window > N)
    throw DomainError("ti_window " + std::to_string(cfg.ti_window) + " exceeds trajectory length " +
                      std::to_string(N));
  const std::size_t H = temporal_lookahead(cfg);
  const auto K = static_cast<std::ptrdiff_t>(N - 1);
  auto reflect = [K](std::ptrdiff_t j) {
    if (j < 0) return -j;
    if (j > K) return 2 * K - j;
    return j;
  };
  const Grid& grid = noisy.grid();
  const double dt = noisy.dt();
  const double W = static_cast<double>(cfg.ti_window);

  std::vector<ScalarField> avg;
  avg.reserve(N);
  for (std::ptrdiff_t k = 0; k <= K; ++k) {
    ScalarField a(grid);
    for (auto m = -static_cast<std::ptrdiff_t>(H); m <= static_cast<std::ptrdiff_t>(H); ++m)
      a += noisy.snapshots[static_cast<std::size_t>(reflect(k + m))];
    a *= 1.0 / W;
    avg.push_back(std::move(a));
  }

  SmoothedData out;
  out.lookahead = H;
  out.z_reg.times = noisy.times;
  out.dz_reg.times = noisy.times;
  out.dz_reg.snapshots.resize(N);
  for (std::size_t k = 0; k < N; ++k) out.z_reg.snapshots.push_back(smooth_spatial(noisy.snapshots[k], cfg));
  for (std::size_t k = 1; k < N; ++k) out.dz_reg.snapshots[k] = (1.0 / dt) * (avg[k] - avg[k - 1]);
  out.dz_reg.snapshots[0] = out.dz_reg.snapshots[1];

  if (clean != nullptr) {
    if (clean->size() != N) throw DomainError("clean reference length differs");
    out.validated = true;
    out.delta_sp.reserve(N);
    for (std::size_t k = 0; k < N; ++k)
      out.delta_sp.push_back(norm(out.z_reg.snapshots[k] - clean->snapshots[k], NormKind::VSemi));
    if (clean_dz != nullptr) {
      if (clean_dz->size() != N) throw DomainError("clean derivative length differs");
      std::vector<ScalarField> diff;
      diff.reserve(N);
      for (std::size_t k = 0; k < N; ++k) diff.push_back(out.dz_reg.snapshots[k] - clean_dz->snapshots[k]);
      out.delta_ti = discrete_lp_h_norm(diff, dt, cfg.p);
    }
  }
  return out;
}

}  // namespace mras
