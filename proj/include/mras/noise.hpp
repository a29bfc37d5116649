#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mras/grid.hpp"
#include "mras/trajectory.hpp"

namespace mras {

struct NoiseConfig {
  double delta = 0.0;   ///< target discrete L^p([0,T]; L2) norm of the perturbation
  double p = 2.0;
  std::uint64_t seed = 0;
  double sp_width = 0.0;      ///< Gaussian standard deviation in grid cells
  std::size_t ti_window = 1;  ///< odd moving-average width in samples
};

/// Throws ConfigError on delta < 0, p < 2, sp_width < 0, even ti_window.
void validate_noise_config(const NoiseConfig& cfg);

/// (dt sum_k ||f_k||_H^p)^{1/p} over every stored sample.
double discrete_lp_h_norm(const std::vector<ScalarField>& samples, double dt, double p);
double discrete_lp_norm(const std::vector<double>& values, double dt, double p);

/// i.i.d. standard normal draws per node and time, rescaled so the discrete
/// L^p([0,T]; L2) norm of the perturbation equals delta exactly.
Trajectory add_noise(const Trajectory& clean, const NoiseConfig& cfg);

/// Discrete Gaussian convolution (zero padding, truncated at 4σ and
/// normalized). sp_width = 0 is the identity.
ScalarField smooth_spatial(const ScalarField& sample, const NoiseConfig& cfg);

/// Sample lookahead of the temporal smoother, (ti_window - 1) / 2.
std::size_t temporal_lookahead(const NoiseConfig& cfg);

struct SmoothedData {
  Trajectory z_reg;   ///< R^sp applied pointwise in time
  Trajectory dz_reg;  ///< D_t of the moving average
  std::vector<double> delta_sp;  ///< ||z_reg(t) - z(t)||_{VSemi}; empty without reference
  double delta_ti = 0.0;         ///< ||dz_reg - D_t z||_{L^p(H)}; 0 without reference
  bool validated = false;
  std::size_t lookahead = 0;
};

/// Moving average of width ti_window (indices reflected at both ends), then
/// dz_reg[k] = (A_k - A_{k-1}) / dt, the centered quotient at the midpoint of
/// [t_{k-1}, t_k] (dz_reg[0] repeats dz_reg[1]). With clean references
/// (z and its derivative in the same convention) the discrepancies are
/// measured directly. Throws DomainError when the window exceeds the
/// trajectory length.
SmoothedData smooth_temporal(const Trajectory& noisy, const NoiseConfig& cfg,
                             const Trajectory* clean = nullptr,
                             const Trajectory* clean_dz = nullptr);

}  // namespace mras
