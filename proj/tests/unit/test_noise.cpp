#include <doctest.h>

#include <cmath>
#include <random>

#include "mras/error.hpp"
#include "mras/noise.hpp"
#include "mras/operators.hpp"

using namespace mras;

namespace {

Trajectory decaying(const Grid& g, std::size_t steps, double dt) {
  Trajectory tr;
  auto v = ScalarField::sample(g, [](double x) { return std::sin(3.0 * x) + x; });
  for (std::size_t k = 0; k <= steps; ++k) {
    double t = static_cast<double>(k) * dt;
    tr.push_back(t, std::exp(-t) * v);
  }
  return tr;
}

ScalarField white(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  ScalarField f(g);
  for (std::size_t i = 0; i < g.n; ++i) f[i] = nd(rng);
  return f;
}

}  // namespace

TEST_CASE("add_noise hits the prescribed level") {
  Grid g = make_uniform_grid(0, 1, 30);
  auto clean = decaying(g, 200, 1e-2);
  NoiseConfig c;
  c.seed = 42;

  auto same = add_noise(clean, c);
  for (std::size_t k = 0; k < clean.size(); ++k) CHECK(norm(same.snapshots[k] - clean.snapshots[k], NormKind::H) == 0.0);

  for (double p : {2.0, 3.0}) {
    c.delta = 0.1;
    c.p = p;
    auto noisy = add_noise(clean, c);
    std::vector<ScalarField> diff;
    for (std::size_t k = 0; k < clean.size(); ++k) diff.push_back(noisy.snapshots[k] - clean.snapshots[k]);
    CHECK(discrete_lp_h_norm(diff, 1e-2, p) == doctest::Approx(0.1).epsilon(1e-12));
  }

  c.p = 2.0;
  auto a = add_noise(clean, c);
  auto a2 = add_noise(clean, c);
  c.seed = 43;
  auto b = add_noise(clean, c);
  CHECK(norm(a.snapshots[7] - a2.snapshots[7], NormKind::H) == 0.0);
  CHECK(norm(a.snapshots[7] - b.snapshots[7], NormKind::H) > 0.0);
}

TEST_CASE("spatial smoother basics") {
  Grid g = make_uniform_grid(0, 1, 60);
  ScalarField c(g, 3.0);
  NoiseConfig cfg;
  auto id = smooth_spatial(c, cfg);
  CHECK(norm(id - c, NormKind::H) == 0.0);

  cfg.sp_width = 2.0;
  auto s = smooth_spatial(c, cfg);
  for (std::size_t i = 8; i + 8 < g.n; ++i) CHECK(std::abs(s[i] - 3.0) <= 1e-12);
}

TEST_CASE("spatial smoothing reduces the seminorm of noise monotonically in width") {
  Grid g = make_uniform_grid(0, 1, 99);
  std::mt19937_64 rng(17);
  double mean[3] = {0, 0, 0};
  const double widths[3] = {1.0, 2.0, 3.0};
  for (int trial = 0; trial < 100; ++trial) {
    auto f = white(g, rng);
    double in = norm(f, NormKind::VSemi);
    for (int j = 0; j < 3; ++j) {
      NoiseConfig c;
      c.sp_width = widths[j];
      double r = norm(smooth_spatial(f, c), NormKind::VSemi) / in;
      if (j == 2) CHECK(r <= 1.0);
      mean[j] += r / 100;
    }
  }
  CHECK(mean[1] < mean[0]);
  CHECK(mean[2] < mean[1]);
}

TEST_CASE("temporal smoother on clean data") {
  Grid g = make_uniform_grid(0, 1, 10);
  Trajectory flat;
  for (int k = 0; k <= 20; ++k) flat.push_back(k * 0.1, ScalarField(g, 2.0));
  NoiseConfig c;
  c.ti_window = 5;
  auto sm = smooth_temporal(flat, c);
  for (const auto& d : sm.dz_reg.snapshots) CHECK(d.max_abs() <= 1e-12);
  CHECK(sm.lookahead == 2);

  const double dt = 1e-3;
  auto tr = decaying(g, 1000, dt);
  c.ti_window = 3;
  auto s2 = smooth_temporal(tr, c);
  auto v = ScalarField::sample(g, [](double x) { return std::sin(3.0 * x) + x; });
  for (std::size_t k = 5; k < 995; k += 37) {
    double tm = tr.times[k] - 0.5 * dt;
    auto exact = -std::exp(-tm) * v;
    CHECK(norm(s2.dz_reg.snapshots[k] - exact, NormKind::H) <= 1e-5 * norm(exact, NormKind::H));
  }
}

TEST_CASE("wider windows shrink the derivative discrepancy") {
  Grid g = make_uniform_grid(0, 1, 20);
  Trajectory clean;
  for (int k = 0; k <= 200; ++k) clean.push_back(k * 1e-2, ScalarField(g, 1.0));
  Trajectory dz;
  for (int k = 0; k <= 200; ++k) dz.push_back(k * 1e-2, ScalarField(g, 0.0));
  double m3 = 0, m11 = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    NoiseConfig c;
    c.delta = 0.05;
    c.seed = seed;
    auto noisy = add_noise(clean, c);
    c.ti_window = 3;
    m3 += smooth_temporal(noisy, c, &clean, &dz).delta_ti;
    c.ti_window = 11;
    m11 += smooth_temporal(noisy, c, &clean, &dz).delta_ti;
  }
  CHECK(m11 < m3);
}

TEST_CASE("smoothers are linear") {
  Grid g = make_uniform_grid(0, 1, 25);
  std::mt19937_64 rng(8);
  NoiseConfig c;
  c.sp_width = 1.5;
  c.ti_window = 5;
  auto u = white(g, rng);
  auto v = white(g, rng);
  auto lhs = smooth_spatial(2.0 * u + -0.5 * v, c);
  auto rhs = 2.0 * smooth_spatial(u, c) + -0.5 * smooth_spatial(v, c);
  CHECK(norm(lhs - rhs, NormKind::H) <= 1e-12 * norm(lhs, NormKind::H));

  Trajectory a, b, mix;
  for (int k = 0; k <= 12; ++k) {
    auto x = white(g, rng);
    auto y = white(g, rng);
    a.push_back(k * 0.1, x);
    b.push_back(k * 0.1, y);
    mix.push_back(k * 0.1, 3.0 * x + -1.0 * y);
  }
  auto sa = smooth_temporal(a, c), sb = smooth_temporal(b, c), sm = smooth_temporal(mix, c);
  for (int k = 0; k <= 12; ++k) {
    auto comb = 3.0 * sa.dz_reg.snapshots[k] + -1.0 * sb.dz_reg.snapshots[k];
    CHECK(norm(sm.dz_reg.snapshots[k] - comb, NormKind::H) <= 1e-12 * (1 + norm(comb, NormKind::H)));
  }
}

TEST_CASE("validation mode measures the discrepancies directly") {
  Grid g = make_uniform_grid(0, 1, 30);
  const double dt = 1e-2;
  auto clean = decaying(g, 100, dt);
  Trajectory dz;
  for (std::size_t k = 0; k < clean.size(); ++k) {
    std::size_t j = k == 0 ? 1 : k;
    dz.push_back(clean.times[k], (1.0 / dt) * (clean.snapshots[j] - clean.snapshots[j - 1]));
  }
  double prev_sp = INFINITY, prev_ti = INFINITY;
  for (double delta : {0.1, 0.01, 0.001, 0.0}) {
    NoiseConfig c;
    c.delta = delta;
    c.seed = 5;
    auto sm = smooth_temporal(add_noise(clean, c), c, &clean, &dz);
    REQUIRE(sm.validated);
    for (std::size_t k = 0; k < clean.size(); k += 10)
      CHECK(sm.delta_sp[k] == norm(sm.z_reg.snapshots[k] - clean.snapshots[k], NormKind::VSemi));
    double sup = 0;
    for (double d : sm.delta_sp) sup = std::max(sup, d);
    CHECK(sup < prev_sp);
    CHECK(sm.delta_ti <= prev_ti);
    prev_sp = sup;
    prev_ti = sm.delta_ti;
  }
  CHECK(prev_sp == 0.0);
  CHECK(prev_ti <= 1e-12);
}

TEST_CASE("noise configuration errors") {
  Grid g = make_uniform_grid(0, 1, 5);
  Trajectory tr;
  for (int k = 0; k < 4; ++k) tr.push_back(k * 0.1, ScalarField(g, 1.0));
  NoiseConfig c;
  c.ti_window = 7;
  CHECK_THROWS_AS(smooth_temporal(tr, c), DomainError);
  c.ti_window = 2;
  CHECK_THROWS_AS(validate_noise_config(c), ConfigError);
  c.ti_window = 1;
  c.p = 1.5;
  CHECK_THROWS_AS(validate_noise_config(c), ConfigError);
  c.p = 2;
  c.delta = -1;
  CHECK_THROWS_AS(validate_noise_config(c), ConfigError);
}
