#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mras {

/// Uniform 1-D grid on [a, b] with n interior nodes. Boundary values are
/// implicit (Dirichlet) and never stored; node i (0-based) sits at a + (i+1)h.
struct Grid {
  double a = 0.0;
  double b = 1.0;
  std::size_t n = 1;
  double h = 0.5;

  double node(std::size_t i) const { return a + static_cast<double>(i + 1) * h; }
  double length() const { return b - a; }
  bool operator==(const Grid&) const = default;
};

/// Throws DomainError if b <= a or n == 0.
Grid make_uniform_grid(double a, double b, std::size_t n);

/// Interior nodal values of a function on a Grid.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double fill = 0.0);
  ScalarField(const Grid& grid, std::vector<double> values);

  template <class F>
  static ScalarField sample(const Grid& grid, F&& f) {
    std::vector<double> v(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) v[i] = f(grid.node(i));
    return ScalarField(grid, std::move(v));
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vector() const { return values_; }

  bool all_finite() const;
  double min() const;
  double max() const;
  double max_abs() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);

  friend ScalarField operator+(ScalarField l, const ScalarField& r) { return l += r; }
  friend ScalarField operator-(ScalarField l, const ScalarField& r) { return l -= r; }
  friend ScalarField operator*(double s, ScalarField f) { return f *= s; }

 private:
  Grid grid_{};
  std::vector<double> values_;
};

/// Throws DomainError unless both fields live on the same grid.
void require_same_grid(const ScalarField& a, const ScalarField& b);

enum class NormKind {
  H,        ///< discrete L2: trapezoid rule with zero boundary values
  VSemi,    ///< discrete H1_0 seminorm: forward-difference energy <-Δ_h v, v>
  VFull,    ///< sqrt(H^2 + VSemi^2)
  HMinus1,  ///< dual norm sqrt(<f, (-Δ_h)^{-1} f>)
};

/// <v, w>_H = h * sum v_i w_i.
double inner_h(const ScalarField& v, const ScalarField& w);
double inner_h(std::span<const double> v, std::span<const double> w, double h);

double norm(const ScalarField& field, NormKind kind);

/// Squared VSemi norm of raw nodal values with zero closure.
double vsemi_squared(std::span<const double> v, double h);

}  // namespace mras
