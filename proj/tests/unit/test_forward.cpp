#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mras/error.hpp"
#include "mras/forward.hpp"
#include "mras/operators.hpp"
#include "mras/problem.hpp"

using namespace mras;

namespace {

constexpr double pi = std::numbers::pi;

ProblemParams params(const char* preset, std::size_t n, const char* q, const char* u0, const char* g,
                     double left, double right) {
  ProblemParams p;
  p.preset = preset;
  p.n = n;
  p.q_star = q;
  p.u0 = u0;
  p.g = g;
  p.c_lower = 1.0;
  p.boundary = std::array<double, 2>{left, right};
  return p;
}

// z*(x,t) = 2 + e^{-t} sin(pi x) with q* = 1 and the c_cubic reaction:
// g = D_t z* - z*_xx + z* + z*^3
ProblemSpec manufactured(std::size_t n) {
  auto spec = build_problem(params("c_cubic", n, "const 1", "const 2 + sine 1 1", "const 0", 2, 2));
  spec.source = [](double x, double t) {
    double s = std::exp(-t) * std::sin(pi * x);
    double z = 2 + s;
    return -s + pi * pi * s + z + z * z * z;
  };
  return homogenize(spec);
}

double mms_error(std::size_t n, double dt, double T) {
  auto spec = manufactured(n);
  auto traj = solve_forward(spec, T, dt);
  const auto& u = traj.snapshots.back();
  double t = traj.times.back();
  double err = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double x = spec.grid.node(i);
    err = std::max(err, std::abs(u[i] + spec.h_bar[i] - (2 + std::exp(-t) * std::sin(pi * x))));
  }
  return err;
}

ScalarField random_field(const Grid& g, std::mt19937_64& rng, double shift = 0.0) {
  std::normal_distribution<double> nd;
  ScalarField f(g);
  for (std::size_t i = 0; i < g.n; ++i) f[i] = shift + nd(rng);
  return f;
}

}  // namespace

TEST_CASE("nemytskii f at a single node") {
  auto spec = homogenize(build_problem(params("c_cubic", 5, "const 1", "const 0", "const 0", 0, 0)));
  auto f = nemytskii_f(spec, ScalarField(spec.grid, 1.0), ScalarField(spec.grid, 2.0));
  CHECK(f[2] == doctest::Approx(10.0));
}

TEST_CASE("a-problem with constant q reduces to the laplacian") {
  auto spec = homogenize(build_problem(params("a_cubic", 11, "const 1", "const 0", "const 0", 0, 0)));
  std::mt19937_64 rng(1);
  auto u = random_field(spec.grid, rng);
  auto lin = linear_part(spec, ScalarField(spec.grid, 1.0), u);
  auto lap = assemble_laplacian(spec.grid).apply(u);
  CHECK(norm(lin - lap, NormKind::H) <= 1e-12 * norm(lap, NormKind::H));
}

TEST_CASE("homogenize") {
  auto two = homogenize(build_problem(params("c_cubic", 7, "const 1", "const 3", "const 0", 2, 2)));
  CHECK(two.homogenized);
  for (std::size_t i = 0; i < 7; ++i) {
    CHECK(two.h_bar[i] == doctest::Approx(2.0));
    CHECK(two.u0[i] == doctest::Approx(1.0));
  }
  // f sees the shifted argument: w = 2, q = 1, so f = 0 + 2 + 8
  auto f = nemytskii_f(two, ScalarField(two.grid, 1.0), ScalarField(two.grid, 0.0));
  CHECK(f[0] == doctest::Approx(10.0));
  CHECK(f[3] == doctest::Approx(10.0));

  auto raw = build_problem(params("c_cubic", 7, "const 1", "sine 1 1", "const 0", 0, 0));
  auto zero = homogenize(raw);
  CHECK(norm(zero.u0 - raw.u0, NormKind::H) == 0.0);

  auto aff = homogenize(build_problem(params("c_cubic", 9, "const 1", "const 2", "const 0", 1, 3)));
  const double h = aff.grid.h;
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(aff.h_bar[i] == doctest::Approx(1 + 2 * aff.grid.node(i)));
    double l = i == 0 ? 1.0 : aff.h_bar[i - 1];
    double r = i == 8 ? 3.0 : aff.h_bar[i + 1];
    CHECK(std::abs((2 * aff.h_bar[i] - l - r) / (h * h)) <= 1e-9);
  }
}

TEST_CASE("validate_problem examples") {
  auto good = homogenize(build_problem(params("c_cubic", 21, "const 1", "const 1", "const 10", 1, 1)));
  auto rep = validate_problem(good);
  CHECK(rep.failed_count() == 0);

  auto bad = homogenize(build_problem(params("c_cubic", 21, "const 1", "const 0", "const 10", 1, 1)));
  auto rb = validate_problem(bad);
  const auto* e = rb.find("u0 >= c_lower");
  REQUIRE(e != nullptr);
  CHECK_FALSE(e->passed);
  CHECK(e->slack == doctest::Approx(-1.0));

  auto a = homogenize(build_problem(params("a_cubic", 21, "const 1", "const -1", "const -10", -1, -1)));
  CHECK(validate_problem(a).failed_count() == 0);
}

TEST_CASE("presets pass their data conditions and the max principle") {
  for (const char* preset : {"c_cubic", "a_cubic"}) {
    ProblemParams p;
    p.preset = preset;
    p.n = 49;
    auto spec = homogenize(build_problem(p));
    auto z = solve_forward(spec, 1.0, 1e-3);
    CHECK(validate_problem(spec, &z).failed_count() == 0);
    CHECK(check_max_principle(z, spec.h_bar, spec.c_lower, spec.kind).all_passed());
  }
}

TEST_CASE("max principle report cases") {
  auto spec = homogenize(build_problem(params("c_cubic", 9, "const 1", "const 1", "const 10", 1, 1)));
  Trajectory flat;
  flat.push_back(0.0, ScalarField(spec.grid, 0.0));
  flat.push_back(0.1, ScalarField(spec.grid, 0.0));
  auto ok = check_max_principle(flat, spec.h_bar, 1.0, ProblemKind::CProblem);
  CHECK(ok.all_passed());
  CHECK(std::abs(ok.entries().front().slack) <= 1e-12);

  Trajectory dip = flat;
  dip.snapshots[0][4] = -0.5;
  auto bad = check_max_principle(dip, spec.h_bar, 1.0, ProblemKind::CProblem);
  CHECK_FALSE(bad.all_passed());
  REQUIRE(bad.entries().front().t.has_value());
  CHECK(*bad.entries().front().t == 0.0);
}

TEST_CASE("heat eigenmode decays at the continuum rate") {
  ProblemParams p = params("c_cubic", 99, "const 0", "sine 1 1", "const 0", 0, 0);
  p.nonlinearity = "none";
  auto spec = homogenize(build_problem(p));
  auto z = solve_forward(spec, 0.1, 1e-4);
  double decay = std::exp(-pi * pi * 0.1);
  for (std::size_t i = 10; i < 90; i += 10) {
    double exact = decay * std::sin(pi * spec.grid.node(i));
    CHECK(std::abs(z.snapshots.back()[i] - exact) <= 0.05 * std::abs(exact));
  }
}

TEST_CASE("manufactured solution converges in time and space") {
  double e1 = mms_error(99, 1e-2, 1.0);
  double e2 = mms_error(99, 5e-3, 1.0);
  CHECK(std::log2(e1 / e2) >= 0.9);

  double s1 = mms_error(24, 1.0 / (25.0 * 25.0), 0.5);
  double s2 = mms_error(49, 1.0 / (50.0 * 50.0), 0.5);
  CHECK(std::log2(s1 / s2) >= 1.9);
}

TEST_CASE("exact data derivative matches the difference quotient") {
  ProblemParams p;
  p.n = 39;
  auto spec = homogenize(build_problem(p));
  auto z = solve_forward(spec, 0.2, 1e-3);
  auto dz = exact_data_derivative(spec, z);
  REQUIRE(dz.size() == z.size());
  for (std::size_t k = 1; k < z.size(); k += 17) {
    auto q = (1.0 / 1e-3) * (z.snapshots[k] - z.snapshots[k - 1]);
    CHECK(norm(dz.snapshots[k] - q, NormKind::H) <= 1e-8 * (1 + norm(q, NormKind::H)));
  }
  CHECK(norm(dz.snapshots[0] - dz.snapshots[1], NormKind::H) == 0.0);
}

TEST_CASE("forward residual is of truncation size") {
  auto spec = manufactured(49);
  auto z = solve_forward(spec, 0.5, 1e-3);
  auto dz = exact_data_derivative(spec, z);
  const std::size_t k = z.size() - 1;
  auto f = nemytskii_f(spec, spec.q_star, z.snapshots[k]);
  auto res = spec.g_at(z.times[k]) - dz.snapshots[k] - f;
  CHECK(res.max_abs() <= 50 * (1e-3 + spec.grid.h * spec.grid.h));
}

TEST_CASE("dfdq multiplication case") {
  auto spec = homogenize(build_problem(params("c_cubic", 9, "const 1", "const 2", "const 10", 2, 2)));
  auto B = assemble_dfdq(spec, ScalarField(spec.grid, 0.0), ScalarField(spec.grid, 0.0));
  CHECK(B.is_symmetric());
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(B.diag()[i] == doctest::Approx(2.0));
    if (i > 0) CHECK(B.lower()[i] == 0.0);
    if (i + 1 < 9) CHECK(B.upper()[i] == 0.0);
  }
}

TEST_CASE("dfdq adjoint consistency on both problems") {
  std::mt19937_64 rng(21);
  for (const char* preset : {"c_cubic", "a_cubic"}) {
    ProblemParams p;
    p.preset = preset;
    p.n = 31;
    auto spec = homogenize(build_problem(p));
    for (int trial = 0; trial < 20; ++trial) {
      auto z = random_field(spec.grid, rng);
      auto q = random_field(spec.grid, rng, 1.0);
      auto B = assemble_dfdq(spec, q, z);
      auto dq = random_field(spec.grid, rng);
      auto v = random_field(spec.grid, rng);
      double lhs = inner_h(B.apply(dq), v);
      double rhs = inner_h(dq, B.apply_adjoint(v));
      double scale = norm(B.apply(dq), NormKind::H) * norm(v, NormKind::H) + 1.0;
      CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("dfdq is the derivative of split_f in q") {
  std::mt19937_64 rng(4);
  for (const char* preset : {"c_cubic", "a_cubic"}) {
    ProblemParams p;
    p.preset = preset;
    p.n = 15;
    auto spec = homogenize(build_problem(p));
    auto zl = random_field(spec.grid, rng);
    auto zn = random_field(spec.grid, rng);
    auto q = random_field(spec.grid, rng, 2.0);
    auto dq = random_field(spec.grid, rng);
    auto B = assemble_dfdq(spec, q, zl, zn);
    const double eps = 1e-6;
    auto fd = (1.0 / (2 * eps)) * (split_f(spec, q + eps * dq, zl, zn) - split_f(spec, q - eps * dq, zl, zn));
    CHECK(norm(fd - B.apply(dq), NormKind::H) <= 1e-6 * (1 + norm(fd, NormKind::H)));
  }
}

TEST_CASE("a-problem sensitivity against the continuum identity") {
  // w = -1 - 2x affine, δq = x (1 - x), q⁰ = 0 removes the reaction term:
  // -(δq w')' + w δq'' = -δq' w' + w δq''
  auto spec = homogenize(build_problem(params("a_cubic", 99, "const 1", "const -1", "const -10", -1, -3)));
  auto B = assemble_dfdq(spec, ScalarField(spec.grid, 0.0), ScalarField(spec.grid, 0.0));
  auto dq = ScalarField::sample(spec.grid, [](double x) { return x * (1 - x); });
  auto out = B.apply(dq);
  double worst = 0;
  for (std::size_t i = 0; i < spec.grid.n; ++i) {
    double x = spec.grid.node(i);
    double w = -1 - 2 * x;
    double exact = -(1 - 2 * x) * (-2.0) + w * (-2.0);
    worst = std::max(worst, std::abs(out[i] - exact));
  }
  CHECK(worst <= 10 * spec.grid.h * spec.grid.h);
}

TEST_CASE("a-problem reaction split is monotone") {
  auto nl = make_nonlinearity("a_cubic");
  for (double z = -3; z < 3; z += 0.1) CHECK(nl.phi0(z + 0.05) >= nl.phi0(z));
  for (double z = -3; z < -0.05; z += 0.25)
    for (double q = -2; q < 2; q += 0.1) CHECK(nl.phi(z) * nl.psi(q + 0.05) >= nl.phi(z) * nl.psi(q));
}

TEST_CASE("blow-up is reported") {
  ProblemParams p = params("c_cubic", 9, "const 1", "const 50", "const 0", 0, 0);
  auto spec = homogenize(build_problem(p));
  CHECK_THROWS_AS(solve_forward(spec, 1.0, 0.1), BlowUpError);
}
