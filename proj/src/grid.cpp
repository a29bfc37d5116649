#include "mras/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mras/error.hpp"
#include "mras/operators.hpp"

namespace mras {

Grid make_uniform_grid(double a, double b, std::size_t n) {
  if (!(b > a)) throw DomainError("empty domain: need b > a");
  if (n == 0) throw DomainError("grid needs at least one interior node");
  return Grid{a, b, n, (b - a) / static_cast<double>(n + 1)};
}

ScalarField::ScalarField(const Grid& grid, double fill) : grid_(grid), values_(grid.n, fill) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.n)
    throw DomainError("field has " + std::to_string(values_.size()) + " values, grid has " +
                      std::to_string(grid_.n) + " nodes");
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid()) || a.size() != b.size())
    throw DomainError("fields live on different grids");
}

double inner_h(std::span<const double> v, std::span<const double> w, double h) {
  if (v.size() != w.size()) throw DomainError("inner product of fields with different sizes");
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * w[i];
  return h * s;
}

double inner_h(const ScalarField& v, const ScalarField& w) {
  require_same_grid(v, w);
  return inner_h(v.values(), w.values(), v.grid().h);
}

double vsemi_squared(std::span<const double> v, double h) {
  // forward differences including both boundary cells
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  double s = v[0] * v[0] + v[n - 1] * v[n - 1];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double d = v[i + 1] - v[i];
    s += d * d;
  }
  return s / h;
}

double norm(const ScalarField& field, NormKind kind) {
  const double h = field.grid().h;
  switch (kind) {
    case NormKind::H:
      return std::sqrt(inner_h(field.values(), field.values(), h));
    case NormKind::VSemi:
      return std::sqrt(vsemi_squared(field.values(), h));
    case NormKind::VFull:
      return std::sqrt(inner_h(field.values(), field.values(), h) +
                       vsemi_squared(field.values(), h));
    case NormKind::HMinus1:
      return dual_norm(field);
  }
  return 0.0;
}

}  // namespace mras
