#include "mras/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mras/error.hpp"

namespace mras {

DiscreteOperator::DiscreteOperator(const Grid& grid)
    : grid_(grid), lower_(grid.n, 0.0), diag_(grid.n, 0.0), upper_(grid.n, 0.0) {}

void DiscreteOperator::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = diag_.size();
  if (x.size() != n || y.size() != n) throw DomainError("operator size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag_[i] * x[i];
    if (i > 0) s += lower_[i] * x[i - 1];
    if (i + 1 < n) s += upper_[i] * x[i + 1];
    y[i] = s;
  }
}

void DiscreteOperator::apply_adjoint(std::span<const double> x, std::span<double> y) const {
  // (A^T x)_i = upper[i-1] x[i-1] + diag[i] x[i] + lower[i+1] x[i+1]
  const std::size_t n = diag_.size();
  if (x.size() != n || y.size() != n) throw DomainError("operator size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag_[i] * x[i];
    if (i > 0) s += upper_[i - 1] * x[i - 1];
    if (i + 1 < n) s += lower_[i + 1] * x[i + 1];
    y[i] = s;
  }
}

ScalarField DiscreteOperator::apply(const ScalarField& x) const {
  ScalarField y(x.grid());
  apply(x.values(), y.values());
  return y;
}

ScalarField DiscreteOperator::apply_adjoint(const ScalarField& x) const {
  ScalarField y(x.grid());
  apply_adjoint(x.values(), y.values());
  return y;
}

void DiscreteOperator::solve(std::span<const double> rhs, std::span<double> out) const {
  const std::size_t n = diag_.size();
  if (rhs.size() != n || out.size() != n) throw DomainError("operator size mismatch");
  std::vector<double> c(n);
  double pivot = diag_[0];
  if (pivot == 0.0 || !std::isfinite(pivot)) throw DomainError("singular tridiagonal system");
  c[0] = n > 1 ? upper_[0] / pivot : 0.0;
  out[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag_[i] - lower_[i] * c[i - 1];
    if (pivot == 0.0 || !std::isfinite(pivot)) throw DomainError("singular tridiagonal system");
    c[i] = i + 1 < n ? upper_[i] / pivot : 0.0;
    out[i] = (rhs[i] - lower_[i] * out[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) out[i] -= c[i] * out[i + 1];
}

ScalarField DiscreteOperator::solve(const ScalarField& rhs) const {
  ScalarField x(rhs.grid());
  solve(rhs.values(), x.values());
  return x;
}

DiscreteOperator DiscreteOperator::transpose() const {
  DiscreteOperator t(grid_);
  const std::size_t n = diag_.size();
  t.diag_ = diag_;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    t.upper_[i] = lower_[i + 1];
    t.lower_[i + 1] = upper_[i];
  }
  return t;
}

DiscreteOperator DiscreteOperator::identity_plus(double alpha) const {
  DiscreteOperator r(grid_);
  for (std::size_t i = 0; i < diag_.size(); ++i) {
    r.lower_[i] = alpha * lower_[i];
    r.diag_[i] = 1.0 + alpha * diag_[i];
    r.upper_[i] = alpha * upper_[i];
  }
  return r;
}

DiscreteOperator& DiscreteOperator::add_scaled(const DiscreteOperator& other, double alpha) {
  if (other.size() != size()) throw DomainError("operator size mismatch");
  for (std::size_t i = 0; i < diag_.size(); ++i) {
    lower_[i] += alpha * other.lower_[i];
    diag_[i] += alpha * other.diag_[i];
    upper_[i] += alpha * other.upper_[i];
  }
  return *this;
}

bool DiscreteOperator::is_symmetric(double tol) const {
  for (std::size_t i = 0; i + 1 < diag_.size(); ++i)
    if (std::abs(upper_[i] - lower_[i + 1]) > tol) return false;
  return true;
}

namespace {

// Number of eigenvalues of the symmetric tridiagonal matrix below x.
std::size_t sturm_count(const std::vector<double>& d, const std::vector<double>& off, double x) {
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double b2 = i > 0 ? off[i] * off[i] : 0.0;
    q = d[i] - x - (i > 0 ? b2 / q : 0.0);
    if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(d[i]) + std::abs(x) + 1.0);
    if (q < 0.0) ++count;
  }
  return count;
}

}  // namespace

double DiscreteOperator::smallest_eigenvalue() const {
  const std::size_t n = diag_.size();
  std::vector<double> off(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) off[i] = lower_[i];
  // Gershgorin bracket
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = (i > 0 ? std::abs(off[i]) : 0.0) + (i + 1 < n ? std::abs(off[i + 1]) : 0.0);
    lo = std::min(lo, diag_[i] - r);
    hi = std::max(hi, diag_[i] + r);
  }
  for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() *
                                              std::max(std::abs(lo), std::abs(hi));
       ++it) {
    double mid = 0.5 * (lo + hi);
    if (sturm_count(diag_, off, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

DiscreteOperator assemble_laplacian(const Grid& grid) {
  DiscreteOperator op(grid);
  const double s = 1.0 / (grid.h * grid.h);
  for (std::size_t i = 0; i < grid.n; ++i) {
    op.diag()[i] = 2.0 * s;
    op.lower()[i] = i > 0 ? -s : 0.0;
    op.upper()[i] = i + 1 < grid.n ? -s : 0.0;
  }
  return op;
}

double embedding_constant(const Grid& grid) {
  // the mass matrix is h I, so the generalized problem reduces to -Δ_h itself
  return assemble_laplacian(grid).smallest_eigenvalue();
}

double dual_norm(std::span<const double> f, const Grid& grid) {
  if (f.size() != grid.n) throw DomainError("field size does not match grid");
  std::vector<double> y(grid.n);
  assemble_laplacian(grid).solve(f, y);
  return std::sqrt(std::max(0.0, inner_h(f, y, grid.h)));
}

double dual_norm(const ScalarField& f) { return dual_norm(f.values(), f.grid()); }

double operator_norm_h_to_dual(const DiscreteOperator& op, int max_iterations, double rel_tol) {
  const Grid& g = op.grid();
  const std::size_t n = op.size();
  DiscreteOperator lap = assemble_laplacian(g);
  // power iteration on B^T K B, K = (-Δ_h)^{-1}; deterministic start vector
  std::vector<double> x(n), y(n), z(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.1 * std::sin(0.37 * static_cast<double>(i + 1));
  double lambda = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    double nx = std::sqrt(inner_h(x, x, g.h));
    if (nx == 0.0) return 0.0;
    for (double& v : x) v /= nx;
    op.apply(x, y);
    lap.solve(y, z);
    op.apply_adjoint(z, y);
    double next = inner_h(x, y, g.h);
    x.swap(y);
    if (it > 0 && std::abs(next - lambda) <= rel_tol * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(0.0, lambda));
}

double sup_embedding_constant(const Grid& grid) { return 0.5 * std::sqrt(grid.length()); }

}  // namespace mras
