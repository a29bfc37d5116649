#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mras/adaptive.hpp"
#include "mras/noise.hpp"
#include "mras/problem.hpp"
#include "mras/report.hpp"
#include "mras/trajectory.hpp"

namespace mras {

/// E(t_k) = err_r_H^2 + err_q_H^2. Throws DomainError on missing columns.
std::vector<double> energy(const DiagnosticTable& diagnostics);

/// One entry per step: E[k+1] <= E[k] + tol.
VerificationReport verify_monotone(std::span<const double> E, double tol,
                                   std::span<const double> times = {});

struct RateEstimate {
  double omega_hat = 0.0;
  double r_squared = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;
};

/// Least-squares fit of log E against t on [t_start, t_end]. omega_hat is
/// minus the slope; r_squared is 1 for a perfect (or constant) fit. Throws
/// DomainError if E <= 0 inside the window or fewer than two samples fall
/// in it.
RateEstimate fit_decay_rate(std::span<const double> E, std::span<const double> times,
                            double t_start, double t_end);

struct ProofConstants {
  double C_coe = 1.0;
  double M = 1.0;
  double C_VH = 1.0;
  double indulgence = 0.1;  ///< relative slack allowed on discretized inequalities
};

/// min{C_coe, 2 M C_VH}.
double predicted_rate(const ProofConstants& c);

/// Inputs of the time-derivative bounds: sup over time of
/// ||f'_q(q⁰, z(t))||_{H -> V*}.
struct DualBoundInputs {
  double dfdq_norm = 0.0;
};

/// sup over (a stride of) data snapshots of ||B(t)||_{H -> V*}.
double max_dfdq_norm(const ProblemSpec& spec, const ScalarField& q_lin, const Trajectory& data,
                     std::size_t stride = 1);

/// Integral bound, exponential bound at every step and, when dual inputs are
/// given and the run recorded extended diagnostics, the H^{-1} analogues of
/// the time-derivative bounds. Sums are left-endpoint Riemann sums; energies
/// below 1e-14 (1 + E(0)) count as zero.
VerificationReport verify_bounds(const MrasRun& run, const ProofConstants& c,
                                       const DualBoundInputs* dual = nullptr);

struct SamplingOptions {
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  double radius = 1.0;  ///< ||q - q*||_H of the sampled parameters is at most this
  unsigned threads = 0;  ///< 0: hardware concurrency
};

/// Random parameter q* + e: eight random sine modes (zero closure), scaled
/// so ||e||_H is uniform in (0, radius].
ScalarField sample_parameter(const ProblemSpec& spec, std::uint64_t seed, std::size_t index,
                             double radius);

/// Worst sampled quotient <f(q,z) - f(q*,z), q - q*> / ||q - q*||^2 (H norm for
/// the c-problem, VSemi for the a-problem) against C_coe. The entry's
/// measured value is the empirical coercivity constant.
VerificationReport verify_coercivity(const ProblemSpec& spec, const Trajectory& z, double C_coe,
                                      const SamplingOptions& opts = {});

/// Samples the linearization residual ||f(q,z) - f(q*,z) - B(q - q*)||_{V*}
/// divided by ||q - q*|| (H for the c-problem, VSemi for the a-problem)
/// against lipschitz_L(||q||_H). With psi linear the residual itself is
/// checked against 1e-12.
VerificationReport verify_lipschitz(const ProblemSpec& spec, const AdaptiveConfig& cfg,
                                    const Trajectory& z, const SamplingOptions& opts = {});

struct NoiseConstants {
  double L0 = 0.0;  ///< ||f'_q(q⁰,v) - f'_q(q⁰,w)||_{H->V*} / ||v - w||_V
  double L1 = 0.0;  ///< ||f(q,v) - f(q,w)||_{V*} / ||v - w||_V
  double L2 = 0.0;  ///< ||f(q,v) - f(q,w)||_H / ||v - w||_V
};

/// Sampled maxima of the three quotients with v, w near the data and q in
/// the sampling ball.
NoiseConstants estimate_noise_constants(const ProblemSpec& spec, const ScalarField& q_lin,
                                        const Trajectory& z, const SamplingOptions& opts = {});

/// Mean of E over the final `fraction` of the horizon.
double plateau_energy(std::span<const double> E, double fraction = 0.2);

/// Records the plateau, fits C_fit = max_t (E(t) - e^{-ωt} E(0)) / (||δ̃^sp||^2_{L^p(0,t)} + δ̃^ti^2)
/// and checks the bound with that constant. Skipped (informational entry)
/// when omega exceeds the predicted rate.
VerificationReport verify_noisy_bound(const MrasRun& run, const SmoothedData& smoothed,
                                      const ProofConstants& c, double omega, double p = 2.0);

/// Halving the noise must shrink the plateau by a factor in [2, 8].
VerificationReport verify_plateau_ratio(double plateau_high, double plateau_low);

}  // namespace mras
