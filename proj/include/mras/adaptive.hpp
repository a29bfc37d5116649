#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mras/forward.hpp"
#include "mras/grid.hpp"
#include "mras/problem.hpp"
#include "mras/trajectory.hpp"

namespace mras {

enum class LipschitzMode { Formula, Constant };
enum class SigmaMode { Auto, Force0, Force1 };
enum class StabilizerMode { Guaranteed, Simple };

/// How the parameter equation is advanced. Explicit: every term at t_k.
/// LinearImplicit: the part of σ f(q, z) that is linear in q is taken at
/// t_{k+1}; required for the a-problem, whose parameter equation carries a
/// second-order operator in q.
enum class QUpdate { Explicit, LinearImplicit };

struct AdaptiveConfig {
  ScalarField q0;     ///< initial guess
  ScalarField q_lin;  ///< linearization point q⁰, fixed for the whole run
  double M = 1.0;
  double C_coe = 1.0;
  LipschitzMode lipschitz_mode = LipschitzMode::Formula;
  double lipschitz_value = 0.0;  ///< used in Constant mode
  SigmaMode sigma = SigmaMode::Auto;
  double dt = 1e-3;
  double T = 5.0;
  StabilizerMode stabilizer = StabilizerMode::Guaranteed;
  QUpdate q_update = QUpdate::Explicit;
};

/// Throws ConfigError listing every violated constraint.
void validate_adaptive_config(const AdaptiveConfig& cfg, const ProblemSpec& spec);

struct MrasState {
  double t = 0.0;
  ScalarField q;
  ScalarField u;
};

/// Everything lipschitz_L needs besides ||q||_H. Built once per run from the
/// data the solver consumes.
struct LipschitzContext {
  ProblemKind kind = ProblemKind::CProblem;
  bool residual_vanishes = false;  ///< psi'' == 0 on the sampled range
  double sup_embedding = 0.0;      ///< max|v| <= c ||v||_V
  double measure = 0.0;            ///< n h
  double M_phi = 0.0;              ///< max |phi(z + h_bar)| over the data
  double C_psi = 1.0;
  double beta = 1.0;
  double norm_q_star = 0.0;
  double norm_q_lin = 0.0;
};

LipschitzContext make_lipschitz_context(const ProblemSpec& spec, const AdaptiveConfig& cfg,
                                        const Trajectory& data);

/// L(||q||_H). Constant mode returns the configured value. Formula mode
/// returns a monotone bound of the linearization residual quotient:
///   c-problem (e in H):
///     c_inf M_phi C_psi [2 |Ω|^{1/2} + |Ω|^{(2-β)/2} (s^{β-1} + |q*|^{β-1} + |q⁰|^{β-1})]
///   a-problem (e in H1_0 seminorm):
///     c_inf^2 M_phi C_psi [2 |Ω| + |Ω|^{(3-β)/2} (s^{β-1} + |q*|^{β-1} + |q⁰|^{β-1})]
/// and 0 when psi is linear.
double lipschitz_L(const LipschitzContext& ctx, const AdaptiveConfig& cfg, double q_norm_H);

/// σ per the switching rule: Auto gives 0 iff psi'' vanishes on the sampled
/// parameter range.
int resolve_sigma(const ProblemSpec& spec, const AdaptiveConfig& cfg);

/// Guaranteed: (L + inflation)^2 / (2 C_coe) + M, so γ(-Δ_h) satisfies the
/// stabilizer lower bound in the H1_0 seminorm. Simple: L + inflation + 1.
double stabilizer_gamma(const AdaptiveConfig& cfg, double L_val, double inflation = 0.0);

/// Data consumed by one step t_k -> t_{k+1}.
struct StepData {
  const ScalarField& z_prev;  ///< z(t_k), explicit reaction argument
  const ScalarField& z_now;   ///< z(t_{k+1})
  const ScalarField& dz_now;  ///< D_t z over [t_k, t_{k+1}]
  const ScalarField& g_now;   ///< g(t_{k+1})
};

struct StepContext {
  LipschitzContext lipschitz;
  int sigma = 1;
  double inflation = 0.0;
};

struct StepInfo {
  double gamma = 0.0;
  double L = 0.0;
};

/// One IMEX step of the adaptive system:
///   (I + dt γ (-Δ_h)) u_{k+1} = u_k + dt (g - f_k(q_k)) + dt γ (-Δ_h) z
///   q_{k+1} = q_k - dt [σ (dz + f_k(q_k) - g) - B^T (u_{k+1} - z)]
/// with f_k(q) = split_f(q, z_now, z_prev), B = assemble_dfdq(q⁰, z_now, z_prev)
/// and γ from ||q_k||_H. Throws BlowUpError on non-finite output.
MrasState mras_step(const MrasState& state, const StepData& data, const ProblemSpec& spec,
                    const AdaptiveConfig& cfg, const StepContext& ctx, StepInfo* info = nullptr);

struct RunOptions {
  /// Reference state for the error diagnostics; defaults to the data itself.
  const Trajectory* clean = nullptr;
  /// Per data index, added to L inside the stabilizer (noisy runs); the step
  /// into t_{k+1} uses entry k+1.
  std::vector<double> inflation;
  /// Also record H^{-1} norms of D_t r and D_t e and H1_0 parameter errors.
  bool extended_diagnostics = false;
  std::optional<LipschitzContext> lipschitz;  ///< override the data-derived one
  /// false: a blow-up ends the run early and is reported in MrasRun::blowup_step.
  bool throw_on_blowup = true;
};

struct MrasRun {
  Trajectory q;
  Trajectory u;
  DiagnosticTable diagnostics;
  int sigma = 1;
  std::size_t max_data_index_read = 0;
  std::optional<std::size_t> blowup_step;
};

/// Diagnostic column names in output order.
const std::vector<std::string>& diagnostic_columns();
const std::vector<std::string>& extended_diagnostic_columns();

/// Iterates mras_step from (q0, u0) over the data's time grid. The data is
/// read strictly in time order: producing t_{k+1} reads indices <= k+1 only
/// (enforced). BlowUpError carries the failing step index.
MrasRun run_mras(const ProblemSpec& spec, const Trajectory& data, const Trajectory& dz,
                 const AdaptiveConfig& cfg, const RunOptions& options = {});

}  // namespace mras
