#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mras/grid.hpp"

namespace mras {

/// Reaction nonlinearity N(w, q) = phi(w) * psi(q) + phi0(w) of the examples,
/// where w is the physical (un-homogenized) state. phi0 is a state-only,
/// monotone increasing term; it is zero for the c-problem preset.
struct Nonlinearity {
  std::string name;
  std::function<double(double)> phi;
  std::function<double(double)> dphi;
  std::function<double(double)> psi;
  std::function<double(double)> dpsi;
  std::function<double(double)> ddpsi;
  std::function<double(double)> phi0;
  std::function<double(double)> dphi0;
  double alpha = 0.0;  ///< |phi(s)| <= C_phi (1 + |s|^alpha)
  double beta = 1.0;   ///< |psi'(t)| <= C_psi (1 + |t|^(beta-1))
  double C_phi = 1.0;
  double C_psi = 1.0;
  bool psi_linear = false;  ///< psi'' == 0 identically

  double term(double w, double q) const { return phi(w) * psi(q) + phi0(w); }
};

/// Presets: "c_cubic" (z^3 |q|^{2/3} q), "a_cubic" (z^3 - z |q|^{4/3} q),
/// "c_linear" (z^3 q), "a_linear" (z^3 - z q), "none" (zero).
Nonlinearity make_nonlinearity(std::string_view name);

enum class ProblemKind { CProblem, AProblem };

std::string to_string(ProblemKind kind);

/// Closed-form spatial profile parsed from a descriptor string:
///   "const c", "one_plus_sine amp k", "sine amp k",
///   "bump center width height", "affine left right".
/// Coordinates are mapped onto the reference interval of [a, b].
std::function<double(double)> parse_profile(std::string_view text, double a, double b);

/// Source g(x, t).
using SourceFunction = std::function<double(double x, double t)>;

struct ProblemSpec {
  ProblemKind kind = ProblemKind::CProblem;
  Grid grid{};
  Nonlinearity nonlinearity;
  ScalarField q_star;
  /// Boundary values of the parameter. The a-problem needs them for face
  /// averages and Δ_h q; parameter errors vanish on the boundary.
  double q_left = 0.0;
  double q_right = 0.0;
  ScalarField u0;  ///< physical until homogenize(), then u0 - h_bar
  SourceFunction source;
  double h_left = 0.0;
  double h_right = 0.0;
  double c_lower = 1.0;
  ScalarField h_bar;  ///< affine extension of the boundary values
  bool homogenized = false;

  ScalarField g_at(double t) const;
};

/// Declarative problem description (what an experiment config carries).
struct ProblemParams {
  std::string preset = "c_cubic";
  std::string nonlinearity;  ///< empty: preset default
  double a = 0.0;
  double b = 1.0;
  std::size_t n = 99;
  std::string q_star;
  std::string u0;
  std::string g;  ///< profile descriptor or "qstar_affine s K"
  std::optional<double> c_lower;
  std::optional<std::array<double, 2>> boundary;
};

/// Fills every empty field of params from the named preset
/// ("c_cubic" or "a_cubic"). Throws ConfigError for unknown presets.
ProblemParams with_preset_defaults(ProblemParams params);

/// Builds the (not yet homogenized) problem.
ProblemSpec build_problem(const ProblemParams& params);

/// Affine interpolant of the two boundary values on the grid nodes.
ScalarField affine_extension(const Grid& grid, double left, double right);

}  // namespace mras
