#pragma once

#include "mras/grid.hpp"
#include "mras/operators.hpp"
#include "mras/problem.hpp"
#include "mras/report.hpp"
#include "mras/trajectory.hpp"

namespace mras {

/// Shifts to homogeneous boundary data: u0 -> u0 - h_bar. The state entering
/// f is always u + h_bar; with the affine extension D_t h_bar = 0 and
/// Δ_h h_bar = 0, so g is unchanged.
ProblemSpec homogenize(const ProblemSpec& spec);

/// Physical state w = u + h_bar.
ScalarField physical_state(const ProblemSpec& spec, const ScalarField& u);

/// Part of f(q, u) that is linear in the physical state w = u + h_bar:
///   c-problem: -Δ_h w + q w
///   a-problem: -(q_{i+1/2}(w_{i+1}-w_i) - q_{i-1/2}(w_i-w_{i-1}))/h^2 + w Δ_h q
/// using the boundary values h_left/right for w and q_left/right for q.
/// Bilinear in (q, w).
ScalarField linear_part(const ProblemSpec& spec, const ScalarField& q, const ScalarField& w);

/// Reaction N(w, q) nodewise.
ScalarField reaction(const ProblemSpec& spec, const ScalarField& q, const ScalarField& w);

/// f(q, u) = linear_part(q, u + h_bar) + reaction(q, u + h_bar).
ScalarField nemytskii_f(const ProblemSpec& spec, const ScalarField& q, const ScalarField& u);

/// f evaluated with the IMEX split used by both time steppers: linear part
/// at u_lin, reaction at u_nl.
ScalarField split_f(const ProblemSpec& spec, const ScalarField& q, const ScalarField& u_lin,
                    const ScalarField& u_nl);

/// Matrix of u -> linear_part(q, u) with zero closure (the stiff part).
DiscreteOperator state_operator(const ProblemSpec& spec, const ScalarField& q);

/// Derivative of split_f with respect to q at q_lin, acting on parameter
/// perturbations with zero boundary values:
///   c-problem: δq -> w_lin δq + phi(w_nl) psi'(q_lin) δq
///   a-problem: δq -> -div(δq ∇w_lin) + w_lin Δ_h δq + phi(w_nl) psi'(q_lin) δq
DiscreteOperator assemble_dfdq(const ProblemSpec& spec, const ScalarField& q_lin,
                               const ScalarField& z_lin, const ScalarField& z_nl);
DiscreteOperator assemble_dfdq(const ProblemSpec& spec, const ScalarField& q_lin,
                               const ScalarField& z);

/// The q-linear part of assemble_dfdq alone: δq -> linear_part(q + δq, w) - linear_part(q, w).
DiscreteOperator assemble_parameter_operator(const ProblemSpec& spec, const ScalarField& z_lin);

/// Semi-implicit Euler: (I + dt A_{q*}) u_{k+1} = u_k + dt (g_{k+1} - b - N(u_k)).
/// Requires a homogenized spec. Throws BlowUpError on non-finite values.
Trajectory solve_forward(const ProblemSpec& spec, double T, double dt);

/// Exact data derivative consistent with solve_forward:
/// dz[k] = g(t_k) - split_f(q*, z_k, z_{k-1}) = (z_k - z_{k-1}) / dt for k >= 1;
/// dz[0] repeats dz[1].
Trajectory exact_data_derivative(const ProblemSpec& spec, const Trajectory& z);

/// Realized bounds entering the maximum-principle data conditions.
struct DataBounds {
  double M_z = 0.0;       ///< max |phi(w)| over the state range
  double M_q = 0.0;       ///< max |psi(q*)|
  double w_min = 0.0;
  double w_max = 0.0;
  bool from_trajectory = false;
};

DataBounds data_bounds(const ProblemSpec& spec, const Trajectory* z);

/// Checks every data condition of the example (nodewise inequalities on
/// u0, boundary data and g, positivity of q*, monotonicity of
/// phi(w) psi(.) on a sample box, growth constants). With z == nullptr the
/// state range is taken from the initial and boundary data; otherwise from
/// the realized trajectory, and g is scanned at every trajectory time.
VerificationReport validate_problem(const ProblemSpec& spec, const Trajectory* z = nullptr);

/// c-problem: min (z + h_bar) >= c_lower - tol; a-problem: max <= -c_lower + tol.
VerificationReport check_max_principle(const Trajectory& z, const ScalarField& h_bar,
                                       double c_lower, ProblemKind kind, double tol = 1e-6);

}  // namespace mras
