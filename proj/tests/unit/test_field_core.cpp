#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mras/error.hpp"
#include "mras/grid.hpp"
#include "mras/io.hpp"
#include "mras/operators.hpp"

using namespace mras;

namespace {

ScalarField random_field(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  ScalarField f(g);
  for (std::size_t i = 0; i < g.n; ++i) f[i] = nd(rng);
  return f;
}

double lambda_min_oracle(const Grid& g) {
  double s = std::sin(std::numbers::pi * g.h / (2.0 * g.length()));
  return 4.0 / (g.h * g.h) * s * s;
}

}  // namespace

TEST_CASE("uniform grid") {
  Grid g = make_uniform_grid(0, 1, 3);
  CHECK(g.h == 0.25);
  CHECK(g.node(0) == 0.25);
  CHECK(g.node(1) == 0.5);
  CHECK(g.node(2) == 0.75);

  Grid one = make_uniform_grid(0, 1, 1);
  CHECK(one.h == 0.5);
  CHECK(one.node(0) == 0.5);

  CHECK(make_uniform_grid(-1, 1, 7).h == 0.25);

  CHECK_THROWS_AS(make_uniform_grid(1, 1, 3), DomainError);
  CHECK_THROWS_AS(make_uniform_grid(0, 1, 0), DomainError);
}

TEST_CASE("norms of closed-form fields") {
  Grid g = make_uniform_grid(0, 1, 99);
  ScalarField ones(g, 1.0);
  double n1 = norm(ones, NormKind::H);
  CHECK(n1 >= 0.99);
  CHECK(n1 <= 1.0);
  // coarse grid underestimates, refined grid approaches 1
  double coarse = norm(ScalarField(make_uniform_grid(0, 1, 9), 1.0), NormKind::H);
  CHECK(coarse >= 0.86);
  CHECK(coarse < n1);

  Grid g2 = make_uniform_grid(0, 1, 199);
  auto s = ScalarField::sample(g2, [](double x) { return std::sin(std::numbers::pi * x); });
  CHECK(norm(s, NormKind::H) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-3));
  // |sin(pi x)|_V^2 = pi^2 / 2
  CHECK(norm(s, NormKind::VSemi) == doctest::Approx(std::numbers::pi / std::sqrt(2.0)).epsilon(1e-3));

  ScalarField zero(g);
  for (auto k : {NormKind::H, NormKind::VSemi, NormKind::VFull, NormKind::HMinus1}) CHECK(norm(zero, k) == 0.0);
}

TEST_CASE("laplacian stencil") {
  Grid g = make_uniform_grid(0, 1, 3);
  auto L = assemble_laplacian(g);
  auto y = L.apply(ScalarField(g, {1, 2, 1}));
  CHECK(y[0] == doctest::Approx(0.0));
  CHECK(y[1] == doctest::Approx(32.0));
  CHECK(y[2] == doctest::Approx(0.0));
  auto y1 = L.apply(ScalarField(g, 1.0));
  CHECK(y1[0] == doctest::Approx(16.0));
  CHECK(y1[1] == doctest::Approx(0.0));
  CHECK(y1[2] == doctest::Approx(16.0));
}

TEST_CASE("smallest eigenvalue and embedding constant") {
  Grid g = make_uniform_grid(0, 1, 99);
  CHECK(assemble_laplacian(g).smallest_eigenvalue() == doctest::Approx(9.8688).epsilon(1e-4));
  CHECK(assemble_laplacian(g).smallest_eigenvalue() == doctest::Approx(lambda_min_oracle(g)).epsilon(1e-10));

  CHECK(std::abs(embedding_constant(g) - 9.87) <= 0.02);
  CHECK(std::abs(embedding_constant(make_uniform_grid(0, 2, 99)) - 2.467) <= 0.01);
  CHECK(embedding_constant(make_uniform_grid(0, 1, 1)) == doctest::Approx(8.0));
  for (std::size_t n : {5u, 17u, 64u}) {
    Grid gn = make_uniform_grid(-0.5, 2.0, n);
    CHECK(embedding_constant(gn) == doctest::Approx(lambda_min_oracle(gn)).epsilon(1e-10));
  }
}

TEST_CASE("sup embedding holds for sampled fields") {
  Grid g = make_uniform_grid(0, 2, 63);
  std::mt19937_64 rng(7);
  double c = sup_embedding_constant(g);
  CHECK(c == doctest::Approx(std::sqrt(2.0) / 2.0));
  for (int trial = 0; trial < 50; ++trial) {
    auto v = random_field(g, rng);
    CHECK(v.max_abs() <= c * norm(v, NormKind::VSemi) * (1 + 1e-12));
  }
}

TEST_CASE("laplacian properties on random fields") {
  Grid g = make_uniform_grid(0, 1.5, 41);
  auto L = assemble_laplacian(g);
  double lam = embedding_constant(g);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    auto v = random_field(g, rng);
    auto w = random_field(g, rng);
    double scale = norm(v, NormKind::VSemi) * norm(w, NormKind::VSemi) + 1.0;
    CHECK(std::abs(inner_h(L.apply(v), w) - inner_h(v, L.apply(w))) <= 1e-12 * scale);

    double vv = norm(v, NormKind::H);
    CHECK(inner_h(L.apply(v), v) >= lam * vv * vv * (1 - 1e-12));

    auto back = L.solve(L.apply(v));
    CHECK(norm(back - v, NormKind::H) <= 1e-10 * vv);

    CHECK(norm(v, NormKind::VSemi) * norm(v, NormKind::VSemi) ==
          doctest::Approx(inner_h(L.apply(v), v)).epsilon(1e-12));
  }
}

TEST_CASE("norm homogeneity and triangle inequality") {
  Grid g = make_uniform_grid(0, 1, 30);
  std::mt19937_64 rng(3);
  for (auto kind : {NormKind::H, NormKind::VSemi, NormKind::VFull, NormKind::HMinus1}) {
    for (int trial = 0; trial < 30; ++trial) {
      auto u = random_field(g, rng);
      auto v = random_field(g, rng);
      auto w = random_field(g, rng);
      CHECK(norm(-3.5 * u, kind) == doctest::Approx(3.5 * norm(u, kind)).epsilon(1e-12));
      CHECK(norm(u - w, kind) <= (norm(u - v, kind) + norm(v - w, kind)) * (1 + 1e-12));
    }
  }
}

TEST_CASE("dual norm pairs with the seminorm") {
  Grid g = make_uniform_grid(0, 1, 25);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = random_field(g, rng);
    auto v = random_field(g, rng);
    CHECK(std::abs(inner_h(f, v)) <= dual_norm(f) * norm(v, NormKind::VSemi) * (1 + 1e-12));
  }
  // the dual norm of -Δ_h v is the seminorm of v
  auto v = random_field(g, rng);
  CHECK(dual_norm(assemble_laplacian(g).apply(v)) == doctest::Approx(norm(v, NormKind::VSemi)).epsilon(1e-10));
}

TEST_CASE("operator transpose is the H-adjoint") {
  Grid g = make_uniform_grid(0, 1, 12);
  DiscreteOperator op(g);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  for (std::size_t i = 0; i < g.n; ++i) {
    op.lower()[i] = nd(rng);
    op.diag()[i] = 5 + nd(rng);
    op.upper()[i] = nd(rng);
  }
  auto x = random_field(g, rng);
  auto y = random_field(g, rng);
  CHECK(inner_h(op.apply(x), y) == doctest::Approx(inner_h(x, op.apply_adjoint(y))).epsilon(1e-12));
  CHECK(norm(op.transpose().apply(y) - op.apply_adjoint(y), NormKind::H) <= 1e-14);
  auto s = op.solve(x);
  CHECK(norm(op.apply(s) - x, NormKind::H) <= 1e-10 * norm(x, NormKind::H));
}

TEST_CASE("operator norm H to dual of a multiplication operator") {
  // B = c I: |B|_{H->V*}^2 = c^2 / λ_min
  Grid g = make_uniform_grid(0, 1, 49);
  DiscreteOperator op(g);
  for (auto& d : op.diag()) d = 2.0;
  CHECK(operator_norm_h_to_dual(op, 500, 1e-12) ==
        doctest::Approx(2.0 / std::sqrt(lambda_min_oracle(g))).epsilon(1e-6));
}

TEST_CASE("field csv uses 17 digits") {
  Grid g = make_uniform_grid(0, 1, 2);
  ScalarField f(g, {1.0 / 3.0, -2.5});
  std::string csv = field_csv(f);
  CHECK(csv.find("0.33333333333333331") != std::string::npos);
  CHECK(std::stod(format_number(0.1)) == 0.1);
  CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("mismatched grids are rejected") {
  ScalarField a(make_uniform_grid(0, 1, 3));
  ScalarField b(make_uniform_grid(0, 1, 4));
  CHECK_THROWS_AS(a += b, DomainError);
}
