#include "mras/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mras/error.hpp"
#include "mras/operators.hpp"

namespace mras {

void validate_adaptive_config(const AdaptiveConfig& cfg, const ProblemSpec& spec) {
  std::vector<std::string> errs;
  if (!(cfg.dt > 0.0)) errs.push_back("dt must be positive");
  if (cfg.dt > cfg.T) errs.push_back("dt exceeds horizon");
  if (!(cfg.M > 0.0)) errs.push_back("M must be positive");
  if (!(cfg.C_coe > 0.0)) errs.push_back("C_coe must be positive");
  if (cfg.lipschitz_mode == LipschitzMode::Constant && !(cfg.lipschitz_value >= 0.0))
    errs.push_back("constant Lipschitz value must be nonnegative");
  if (cfg.q0.size() != spec.grid.n || !(cfg.q0.grid() == spec.grid))
    errs.push_back("q0 does not live on the problem grid");
  if (cfg.q_lin.size() != spec.grid.n || !(cfg.q_lin.grid() == spec.grid))
    errs.push_back("linearization point does not live on the problem grid");
  if (!errs.empty()) {
    std::string msg = "invalid adaptive configuration:";
    for (const auto& e : errs) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
}

namespace {

// psi'' sampled on the parameter range spanned by q*, q0 and q⁰, widened by 1.
bool psi_second_derivative_vanishes(const ProblemSpec& spec, const AdaptiveConfig& cfg) {
  const auto& nl = spec.nonlinearity;
  double lo = std::min({spec.q_star.min(), spec.q_left, spec.q_right});
  double hi = std::max({spec.q_star.max(), spec.q_left, spec.q_right});
  if (cfg.q0.size() > 0) lo = std::min(lo, cfg.q0.min()), hi = std::max(hi, cfg.q0.max());
  if (cfg.q_lin.size() > 0) lo = std::min(lo, cfg.q_lin.min()), hi = std::max(hi, cfg.q_lin.max());
  lo -= 1.0;
  hi += 1.0;
  constexpr int S = 401;
  for (int i = 0; i < S; ++i) {
    double t = lo + (hi - lo) * i / (S - 1.0);
    if (std::abs(nl.ddpsi(t)) > 1e-14) return false;
  }
  return true;
}

}  // namespace

LipschitzContext make_lipschitz_context(const ProblemSpec& spec, const AdaptiveConfig& cfg,
                                        const Trajectory& data) {
  LipschitzContext ctx;
  const auto& nl = spec.nonlinearity;
  ctx.kind = spec.kind;
  ctx.residual_vanishes = psi_second_derivative_vanishes(spec, cfg);
  ctx.sup_embedding = sup_embedding_constant(spec.grid);
  ctx.measure = static_cast<double>(spec.grid.n) * spec.grid.h;
  double m = 0.0;
  for (const auto& s : data.snapshots)
    for (std::size_t i = 0; i < s.size(); ++i) m = std::max(m, std::abs(nl.phi(s[i] + spec.h_bar[i])));
  ctx.M_phi = m;
  ctx.C_psi = nl.C_psi;
  ctx.beta = nl.beta;
  ctx.norm_q_star = norm(spec.q_star, NormKind::H);
  ctx.norm_q_lin = cfg.q_lin.size() > 0 ? norm(cfg.q_lin, NormKind::H) : 0.0;
  return ctx;
}

double lipschitz_L(const LipschitzContext& ctx, const AdaptiveConfig& cfg, double s) {
  if (cfg.lipschitz_mode == LipschitzMode::Constant) return cfg.lipschitz_value;
  if (ctx.residual_vanishes) return 0.0;
  const double b1 = ctx.beta - 1.0;
  const double powers = std::pow(s, b1) + std::pow(ctx.norm_q_star, b1) + std::pow(ctx.norm_q_lin, b1);
  const double m = ctx.measure;
  if (ctx.kind == ProblemKind::CProblem) {
    if (ctx.beta > 2.0) throw DomainError("Lipschitz formula for the c-problem needs beta <= 2");
    return ctx.sup_embedding * ctx.M_phi * ctx.C_psi *
           (2.0 * std::sqrt(m) + std::pow(m, (2.0 - ctx.beta) / 2.0) * powers);
  }
  if (ctx.beta > 3.0) throw DomainError("Lipschitz formula for the a-problem needs beta <= 3");
  const double c = ctx.sup_embedding;
  return c * c * ctx.M_phi * ctx.C_psi * (2.0 * m + std::pow(m, (3.0 - ctx.beta) / 2.0) * powers);
}

int resolve_sigma(const ProblemSpec& spec, const AdaptiveConfig& cfg) {
  switch (cfg.sigma) {
    case SigmaMode::Force0:
      return 0;
    case SigmaMode::Force1:
      return 1;
    case SigmaMode::Auto:
      break;
  }
  return psi_second_derivative_vanishes(spec, cfg) ? 0 : 1;
}

double stabilizer_gamma(const AdaptiveConfig& cfg, double L_val, double inflation) {
  const double l = L_val + inflation;
  if (cfg.stabilizer == StabilizerMode::Simple) return l + 1.0;
  return l * l / (2.0 * cfg.C_coe) + cfg.M;
}

MrasState mras_step(const MrasState& state, const StepData& data, const ProblemSpec& spec,
                    const AdaptiveConfig& cfg, const StepContext& ctx, StepInfo* info) {
  const double dt = cfg.dt;
  const Grid& grid = spec.grid;
  const double L = lipschitz_L(ctx.lipschitz, cfg, norm(state.q, NormKind::H));
  const double gamma = stabilizer_gamma(cfg, L, ctx.inflation);
  if (info != nullptr) *info = {gamma, L};

  const ScalarField f = split_f(spec, state.q, data.z_now, data.z_prev);
  const DiscreteOperator lap = assemble_laplacian(grid);

  // u-equation
  ScalarField lz = lap.apply(data.z_now);
  ScalarField rhs(grid);
  for (std::size_t i = 0; i < grid.n; ++i)
    rhs[i] = state.u[i] + dt * (data.g_now[i] - f[i]) + dt * gamma * lz[i];
  MrasState next;
  next.t = state.t + dt;
  next.u = lap.identity_plus(dt * gamma).solve(rhs);

  // q-equation
  const DiscreteOperator B = assemble_dfdq(spec, cfg.q_lin, data.z_now, data.z_prev);
  ScalarField btr = B.apply_adjoint(next.u - data.z_now);
  ScalarField incr(grid);
  for (std::size_t i = 0; i < grid.n; ++i)
    incr[i] = -dt * (ctx.sigma * (data.dz_now[i] + f[i] - data.g_now[i]) - btr[i]);
  if (cfg.q_update == QUpdate::LinearImplicit && ctx.sigma != 0) {
    DiscreteOperator P = assemble_parameter_operator(spec, data.z_now);
    incr = P.identity_plus(dt * ctx.sigma).solve(incr);
  }
  next.q = state.q + incr;

  if (!next.u.all_finite() || !next.q.all_finite())
    throw BlowUpError("adaptive system produced non-finite values",
                      static_cast<std::size_t>(std::llround(next.t / dt)));
  return next;
}

const std::vector<std::string>& diagnostic_columns() {
  static const std::vector<std::string> cols = {"t",       "E",     "err_q_H", "err_r_H",
                                                "err_r_V", "gamma", "L",       "sigma"};
  return cols;
}

const std::vector<std::string>& extended_diagnostic_columns() {
  static const std::vector<std::string> cols = {"err_q_V", "dt_r_dual", "dt_e_dual"};
  return cols;
}

namespace {

// Read-only view on the data that records the highest index touched and
// refuses anything beyond the allowed horizon.
class DataFeed {
 public:
  DataFeed(const Trajectory& z, const Trajectory& dz) : z_(z), dz_(dz) {}
  void advance_to(std::size_t allowed) { allowed_ = allowed; }
  const ScalarField& z(std::size_t j) { return get(z_, j); }
  const ScalarField& dz(std::size_t j) { return get(dz_, j); }
  std::size_t max_read() const { return max_read_; }

 private:
  const ScalarField& get(const Trajectory& t, std::size_t j) {
    if (j > allowed_)
      throw DomainError("causality violation: read data index " + std::to_string(j) +
                        " while allowed up to " + std::to_string(allowed_));
    max_read_ = std::max(max_read_, j);
    return t.snapshots[j];
  }
  const Trajectory& z_;
  const Trajectory& dz_;
  std::size_t allowed_ = 0;
  std::size_t max_read_ = 0;
};

}  // namespace

MrasRun run_mras(const ProblemSpec& spec, const Trajectory& data, const Trajectory& dz,
                 const AdaptiveConfig& cfg, const RunOptions& options) {
  validate_adaptive_config(cfg, spec);
  if (data.size() < 2) throw DomainError("data trajectory needs at least two samples");
  if (dz.size() != data.size()) throw DomainError("data derivative length differs from data");
  if (std::abs(data.dt() - cfg.dt) > 1e-12 * cfg.dt)
    throw DomainError("data time step differs from the solver step");
  const Trajectory& ref = options.clean != nullptr ? *options.clean : data;
  if (ref.size() != data.size()) throw DomainError("reference length differs from data");
  if (!options.inflation.empty() && options.inflation.size() != data.size())
    throw DomainError("inflation series length differs from data");

  StepContext ctx;
  ctx.lipschitz = options.lipschitz ? *options.lipschitz : make_lipschitz_context(spec, cfg, data);
  ctx.sigma = resolve_sigma(spec, cfg);

  std::vector<std::string> cols = diagnostic_columns();
  if (options.extended_diagnostics)
    cols.insert(cols.end(), extended_diagnostic_columns().begin(), extended_diagnostic_columns().end());

  MrasRun run;
  run.sigma = ctx.sigma;
  run.diagnostics = DiagnosticTable(cols);
  const std::size_t K = data.size() - 1;
  run.q.times.reserve(K + 1);
  run.u.times.reserve(K + 1);

  MrasState state{0.0, cfg.q0, spec.u0};
  DataFeed feed(data, dz);
  ScalarField r_prev, e_prev;

  auto record = [&](std::size_t k, const StepInfo& info) {
    ScalarField r = state.u - ref.snapshots[k];
    ScalarField e = state.q - spec.q_star;
    double eq = norm(e, NormKind::H), er = norm(r, NormKind::H);
    std::vector<double> row = {data.times[k], er * er + eq * eq, eq, er, norm(r, NormKind::VSemi),
                               info.gamma, info.L, static_cast<double>(ctx.sigma)};
    if (options.extended_diagnostics) {
      row.push_back(norm(e, NormKind::VSemi));
      if (k == 0) {
        row.push_back(0.0);
        row.push_back(0.0);
      } else {
        row.push_back(dual_norm((1.0 / cfg.dt) * (r - r_prev)));
        row.push_back(dual_norm((1.0 / cfg.dt) * (e - e_prev)));
      }
      r_prev = std::move(r);
      e_prev = std::move(e);
    }
    run.diagnostics.add_row(std::move(row));
    run.q.push_back(data.times[k], state.q);
    run.u.push_back(data.times[k], state.u);
  };

  auto step_info = [&](std::size_t k) {
    StepInfo info;
    info.L = lipschitz_L(ctx.lipschitz, cfg, norm(state.q, NormKind::H));
    const std::size_t j = std::min(k + 1, K);
    info.gamma = stabilizer_gamma(cfg, info.L, options.inflation.empty() ? 0.0 : options.inflation[j]);
    return info;
  };

  for (std::size_t k = 0; k < K; ++k) {
    record(k, step_info(k));
    feed.advance_to(k + 1);
    const ScalarField& z_prev = feed.z(k);
    const ScalarField& z_now = feed.z(k + 1);
    const ScalarField& dz_now = feed.dz(k + 1);
    const ScalarField g_now = spec.g_at(data.times[k + 1]);
    ctx.inflation = options.inflation.empty() ? 0.0 : options.inflation[k + 1];
    try {
      state = mras_step(state, StepData{z_prev, z_now, dz_now, g_now}, spec, cfg, ctx);
    } catch (const BlowUpError&) {
      run.max_data_index_read = feed.max_read();
      if (options.throw_on_blowup)
        throw BlowUpError("adaptive system produced non-finite values", k + 1);
      run.blowup_step = k + 1;
      return run;
    }
    state.t = data.times[k + 1];
  }
  record(K, step_info(K));
  run.max_data_index_read = feed.max_read();
  return run;
}

}  // namespace mras
