#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mras/adaptive.hpp"
#include "mras/analysis.hpp"
#include "mras/error.hpp"
#include "mras/forward.hpp"
#include "mras/operators.hpp"

using namespace mras;

namespace {

ProblemSpec preset(const char* name, std::size_t n, const char* nonlinearity = "") {
  ProblemParams p;
  p.preset = name;
  p.n = n;
  p.nonlinearity = nonlinearity;
  return homogenize(build_problem(p));
}

AdaptiveConfig config(const ProblemSpec& spec, double T, double dt, double q0 = 1.0) {
  AdaptiveConfig c;
  c.q0 = ScalarField(spec.grid, q0);
  c.q_lin = c.q0;
  c.C_coe = spec.c_lower;
  c.T = T;
  c.dt = dt;
  if (spec.kind == ProblemKind::AProblem) c.q_update = QUpdate::LinearImplicit;
  return c;
}

}  // namespace

TEST_CASE("stabilizer gamma") {
  AdaptiveConfig c;
  c.M = 1.0;
  CHECK(stabilizer_gamma(c, 0.0) == 1.0);
  c.C_coe = 1.0;
  c.M = 0.5;
  CHECK(stabilizer_gamma(c, 2.0) == 2.5);
  c.stabilizer = StabilizerMode::Simple;
  CHECK(stabilizer_gamma(c, 2.0) == 3.0);
  CHECK(stabilizer_gamma(c, 1.5, 0.5) == 3.0);
}

TEST_CASE("guaranteed stabilizer meets its lower bound exactly") {
  auto spec = preset("c_cubic", 19);
  AdaptiveConfig c = config(spec, 1, 1e-3);
  c.C_coe = 0.7;
  c.M = 0.3;
  const double L = 1.9;
  const double gamma = stabilizer_gamma(c, L);
  auto lap = assemble_laplacian(spec.grid);
  auto v = ScalarField::sample(spec.grid, [](double x) { return x * x * (1 - x) + std::sin(5 * x); });
  double lhs = gamma * inner_h(lap.apply(v), v);
  double vs = norm(v, NormKind::VSemi);
  CHECK(lhs >= (L * L / (2 * c.C_coe) + c.M) * vs * vs * (1 - 1e-12));
}

TEST_CASE("lipschitz modes and sigma rule") {
  auto lin = preset("c_cubic", 19, "c_linear");
  auto cl = config(lin, 1, 1e-3);
  auto z = solve_forward(lin, 0.05, 1e-3);
  auto ctx = make_lipschitz_context(lin, cl, z);
  CHECK(ctx.residual_vanishes);
  CHECK(lipschitz_L(ctx, cl, 3.0) == 0.0);
  CHECK(resolve_sigma(lin, cl) == 0);

  cl.lipschitz_mode = LipschitzMode::Constant;
  cl.lipschitz_value = 2.5;
  CHECK(lipschitz_L(ctx, cl, 0.0) == 2.5);
  CHECK(lipschitz_L(ctx, cl, 100.0) == 2.5);

  auto cub = preset("c_cubic", 19);
  auto cc = config(cub, 1, 1e-3);
  CHECK(resolve_sigma(cub, cc) == 1);
  cc.sigma = SigmaMode::Force0;
  CHECK(resolve_sigma(cub, cc) == 0);
  cc.sigma = SigmaMode::Force1;
  CHECK(resolve_sigma(lin, cc) == 1);

  // formula mode is monotone in |q|_H
  auto zc = solve_forward(cub, 0.05, 1e-3);
  auto cctx = make_lipschitz_context(cub, config(cub, 1, 1e-3), zc);
  double prev = lipschitz_L(cctx, cc, 0.0);
  CHECK(prev > 0.0);
  for (double s = 0.25; s < 5; s += 0.25) {
    double L = lipschitz_L(cctx, cc, s);
    CHECK(L >= prev);
    prev = L;
  }
}

TEST_CASE("zero dynamics stay at zero") {
  ProblemParams p;
  p.preset = "c_cubic";
  p.n = 9;
  p.q_star = "const 0";
  p.u0 = "const 0";
  p.g = "const 0";
  p.boundary = std::array<double, 2>{0.0, 0.0};
  auto spec = homogenize(build_problem(p));
  auto cfg = config(spec, 1, 1e-2, 0.0);
  ScalarField zero(spec.grid);
  StepContext ctx;
  MrasState s{0.0, zero, zero};
  for (int k = 0; k < 20; ++k) s = mras_step(s, {zero, zero, zero, zero}, spec, cfg, ctx);
  CHECK(s.q.max_abs() == 0.0);
  CHECK(s.u.max_abs() == 0.0);
}

TEST_CASE("fixed point of the error system") {
  for (const char* name : {"c_cubic", "a_cubic"}) {
    auto spec = preset(name, 49);
    auto z = solve_forward(spec, 0.5, 1e-3);
    auto dz = exact_data_derivative(spec, z);
    auto cfg = config(spec, 0.5, 1e-3);
    cfg.q0 = spec.q_star;
    auto run = run_mras(spec, z, dz, cfg);
    auto E = energy(run.diagnostics);
    double qs = norm(spec.q_star, NormKind::H);
    for (double e : E) CHECK(e <= 1e-8 * (1 + qs * qs));
  }
}

TEST_CASE("sigma is inert at the fixed point") {
  auto spec = preset("c_cubic", 29, "c_linear");
  auto z = solve_forward(spec, 0.2, 1e-3);
  auto dz = exact_data_derivative(spec, z);
  auto cfg = config(spec, 0.2, 1e-3);
  cfg.q0 = spec.q_star;
  cfg.sigma = SigmaMode::Force0;
  auto r0 = run_mras(spec, z, dz, cfg);
  cfg.sigma = SigmaMode::Force1;
  auto r1 = run_mras(spec, z, dz, cfg);
  CHECK(norm(r0.q.snapshots.back() - r1.q.snapshots.back(), NormKind::H) <= 1e-12);
  CHECK(norm(r0.u.snapshots.back() - r1.u.snapshots.back(), NormKind::H) <= 1e-12);
}

TEST_CASE("single step agrees with an explicit Euler step to second order") {
  auto spec = preset("c_cubic", 24);
  auto z = solve_forward(spec, 0.01, 1e-3);
  auto dz = exact_data_derivative(spec, z);
  auto cfg = config(spec, 1, 1e-6);
  cfg.lipschitz_mode = LipschitzMode::Constant;
  cfg.lipschitz_value = 1.5;
  StepContext ctx;
  ctx.sigma = 1;
  auto lap = assemble_laplacian(spec.grid);
  const auto& zp = z.snapshots[4];
  const auto& zn = z.snapshots[5];
  auto g = spec.g_at(0.005);
  MrasState s{0.0, ScalarField::sample(spec.grid, [](double x) { return 1 + 0.3 * std::sin(3 * x); }),
              ScalarField::sample(spec.grid, [](double x) { return 0.2 * std::sin(std::numbers::pi * x); })};

  auto diff = [&](double dt) {
    cfg.dt = dt;
    auto imex = mras_step(s, {zp, zn, dz.snapshots[5], g}, spec, cfg, ctx);
    double gamma = stabilizer_gamma(cfg, cfg.lipschitz_value);
    auto f = split_f(spec, s.q, zn, zp);
    auto u = s.u + dt * (g - f - gamma * lap.apply(s.u - zn));
    auto B = assemble_dfdq(spec, cfg.q_lin, zn, zp);
    auto q = s.q - dt * (dz.snapshots[5] + f - g - B.apply_adjoint(u - zn));
    return norm(imex.u - u, NormKind::H) + norm(imex.q - q, NormKind::H);
  };
  double d1 = diff(1e-6);
  double d2 = diff(5e-7);
  CHECK(d1 <= 1e-8);
  CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("exact-data runs decay monotonically on both problems") {
  for (const char* name : {"c_cubic", "a_cubic"}) {
    auto spec = preset(name, 39);
    auto z = solve_forward(spec, 1.0, 1e-3);
    auto dz = exact_data_derivative(spec, z);
    auto run = run_mras(spec, z, dz, config(spec, 1.0, 1e-3));
    auto E = energy(run.diagnostics);
    CHECK(verify_monotone(E, 1e-10 * (1 + E.front())).all_passed());
    CHECK(E.back() < 0.5 * E.front());
    CHECK(run.max_data_index_read == z.size() - 1);
  }
}

TEST_CASE("forcing sigma to zero on a nonlinear parameter still records finite diagnostics") {
  auto spec = preset("c_cubic", 29);
  auto z = solve_forward(spec, 0.5, 1e-3);
  auto dz = exact_data_derivative(spec, z);
  auto cfg = config(spec, 0.5, 1e-3);
  cfg.sigma = SigmaMode::Force0;
  auto run = run_mras(spec, z, dz, cfg);
  CHECK(run.sigma == 0);
  for (double e : energy(run.diagnostics)) CHECK(std::isfinite(e));
}

TEST_CASE("diagnostic columns") {
  std::vector<std::string> want{"t", "E", "err_q_H", "err_r_H", "err_r_V", "gamma", "L", "sigma"};
  CHECK(diagnostic_columns() == want);
}

TEST_CASE("invalid adaptive configuration lists every problem") {
  auto spec = preset("c_cubic", 9);
  auto cfg = config(spec, 1e-3, 1e-2);
  cfg.M = 0;
  try {
    validate_adaptive_config(cfg, spec);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find("dt exceeds horizon") != std::string::npos);
    CHECK(msg.find("M must be positive") != std::string::npos);
  }
}
