#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mras/grid.hpp"

namespace mras {

/// Tridiagonal operator on the interior nodes of a Grid. Every discrete
/// operator in the library (Laplacian, stiffness of the forward model,
/// parameter sensitivities) has this band structure in 1-D.
///
/// Row i reads lower[i]*x[i-1] + diag[i]*x[i] + upper[i]*x[i+1]; lower[0]
/// and upper[n-1] are ignored. Since the H inner product carries a uniform
/// weight h, the H-adjoint is the matrix transpose.
class DiscreteOperator {
 public:
  DiscreteOperator() = default;
  explicit DiscreteOperator(const Grid& grid);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return diag_.size(); }

  std::vector<double>& lower() { return lower_; }
  std::vector<double>& diag() { return diag_; }
  std::vector<double>& upper() { return upper_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& diag() const { return diag_; }
  const std::vector<double>& upper() const { return upper_; }

  ScalarField apply(const ScalarField& x) const;
  ScalarField apply_adjoint(const ScalarField& x) const;
  void apply(std::span<const double> x, std::span<double> y) const;
  void apply_adjoint(std::span<const double> x, std::span<double> y) const;

  /// Direct tridiagonal solve (Thomas algorithm, no pivoting). Throws
  /// DomainError on a vanishing pivot.
  ScalarField solve(const ScalarField& rhs) const;
  void solve(std::span<const double> rhs, std::span<double> out) const;

  DiscreteOperator transpose() const;

  /// Returns I + alpha * (*this).
  DiscreteOperator identity_plus(double alpha) const;

  /// Adds alpha * other to *this.
  DiscreteOperator& add_scaled(const DiscreteOperator& other, double alpha);

  /// Smallest eigenvalue; valid only for symmetric operators (Sturm-sequence
  /// bisection).
  double smallest_eigenvalue() const;

  bool is_symmetric(double tol = 0.0) const;

 private:
  Grid grid_{};
  std::vector<double> lower_;
  std::vector<double> diag_;
  std::vector<double> upper_;
};

/// (-Δ_h v)_i = (2v_i - v_{i-1} - v_{i+1}) / h^2 with v_0 = v_{n+1} = 0.
DiscreteOperator assemble_laplacian(const Grid& grid);

/// min over v != 0 of ||v||_{VSemi}^2 / ||v||_H^2, i.e. the lower-bound
/// reading of the V -> H embedding constant.
double embedding_constant(const Grid& grid);

/// sqrt(<f, (-Δ_h)^{-1} f>_H), the discrete V* norm.
double dual_norm(const ScalarField& f);
double dual_norm(std::span<const double> f, const Grid& grid);

/// Operator norm of B as a map H -> V*, sqrt(λ_max(B^T (-Δ_h)^{-1} B)),
/// estimated by power iteration.
double operator_norm_h_to_dual(const DiscreteOperator& op, int max_iterations = 200,
                               double rel_tol = 1e-10);

/// Sup-norm Sobolev constant on the interval: max|v| <= c * ||v||_{VSemi}
/// for v in H1_0(a,b), c = sqrt(b - a) / 2. Holds for the piecewise linear
/// interpolant of nodal values, hence for the discrete norms.
double sup_embedding_constant(const Grid& grid);

}  // namespace mras
