#include "mras/forward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mras/error.hpp"

namespace mras {

ProblemSpec homogenize(const ProblemSpec& spec) {
  if (spec.homogenized) return spec;
  ProblemSpec out = spec;
  out.u0 -= spec.h_bar;
  out.homogenized = true;
  return out;
}

ScalarField physical_state(const ProblemSpec& spec, const ScalarField& u) {
  return u + spec.h_bar;
}

namespace {

// Neighbor value with Dirichlet closure.
inline double at(std::span<const double> v, std::size_t i, std::ptrdiff_t off, double left,
                 double right) {
  const auto j = static_cast<std::ptrdiff_t>(i) + off;
  if (j < 0) return left;
  if (j >= static_cast<std::ptrdiff_t>(v.size())) return right;
  return v[static_cast<std::size_t>(j)];
}

}  // namespace

ScalarField linear_part(const ProblemSpec& spec, const ScalarField& q, const ScalarField& w) {
  require_same_grid(q, w);
  const std::size_t n = w.size();
  const double h2 = spec.grid.h * spec.grid.h;
  ScalarField out(w.grid());
  auto wv = w.values();
  auto qv = q.values();
  for (std::size_t i = 0; i < n; ++i) {
    const double wl = at(wv, i, -1, spec.h_left, spec.h_right);
    const double wr = at(wv, i, 1, spec.h_left, spec.h_right);
    if (spec.kind == ProblemKind::CProblem) {
      out[i] = (2.0 * wv[i] - wl - wr) / h2 + qv[i] * wv[i];
    } else {
      const double ql = at(qv, i, -1, spec.q_left, spec.q_right);
      const double qr = at(qv, i, 1, spec.q_left, spec.q_right);
      const double face_r = 0.5 * (qv[i] + qr);
      const double face_l = 0.5 * (qv[i] + ql);
      const double div = -(face_r * (wr - wv[i]) - face_l * (wv[i] - wl)) / h2;
      const double lap_q = (qr - 2.0 * qv[i] + ql) / h2;
      out[i] = div + wv[i] * lap_q;
    }
  }
  return out;
}

ScalarField reaction(const ProblemSpec& spec, const ScalarField& q, const ScalarField& w) {
  require_same_grid(q, w);
  const auto& nl = spec.nonlinearity;
  ScalarField out(w.grid());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = nl.term(w[i], q[i]);
  return out;
}

ScalarField nemytskii_f(const ProblemSpec& spec, const ScalarField& q, const ScalarField& u) {
  ScalarField w = physical_state(spec, u);
  return linear_part(spec, q, w) + reaction(spec, q, w);
}

ScalarField split_f(const ProblemSpec& spec, const ScalarField& q, const ScalarField& u_lin,
                    const ScalarField& u_nl) {
  return linear_part(spec, q, physical_state(spec, u_lin)) +
         reaction(spec, q, physical_state(spec, u_nl));
}

DiscreteOperator state_operator(const ProblemSpec& spec, const ScalarField& q) {
  const std::size_t n = spec.grid.n;
  const double h2 = spec.grid.h * spec.grid.h;
  DiscreteOperator op(spec.grid);
  auto qv = q.values();
  for (std::size_t i = 0; i < n; ++i) {
    if (spec.kind == ProblemKind::CProblem) {
      op.diag()[i] = 2.0 / h2 + qv[i];
      op.lower()[i] = i > 0 ? -1.0 / h2 : 0.0;
      op.upper()[i] = i + 1 < n ? -1.0 / h2 : 0.0;
    } else {
      const double ql = at(qv, i, -1, spec.q_left, spec.q_right);
      const double qr = at(qv, i, 1, spec.q_left, spec.q_right);
      const double face_r = 0.5 * (qv[i] + qr);
      const double face_l = 0.5 * (qv[i] + ql);
      op.diag()[i] = (face_r + face_l) / h2 + (qr - 2.0 * qv[i] + ql) / h2;
      op.lower()[i] = i > 0 ? -face_l / h2 : 0.0;
      op.upper()[i] = i + 1 < n ? -face_r / h2 : 0.0;
    }
  }
  return op;
}

namespace {

// δq -> linear_part(q + δq, w) - linear_part(q, w) for zero-closure δq.
DiscreteOperator parameter_operator(const ProblemSpec& spec, const ScalarField& w) {
  const std::size_t n = spec.grid.n;
  const double h2 = spec.grid.h * spec.grid.h;
  DiscreteOperator op(spec.grid);
  auto wv = w.values();
  for (std::size_t i = 0; i < n; ++i) {
    if (spec.kind == ProblemKind::CProblem) {
      op.diag()[i] = wv[i];
    } else {
      const double wl = at(wv, i, -1, spec.h_left, spec.h_right);
      const double wr = at(wv, i, 1, spec.h_left, spec.h_right);
      const double dp = wr - wv[i];
      const double dm = wv[i] - wl;
      op.diag()[i] = -0.5 * (dp - dm) / h2 - 2.0 * wv[i] / h2;
      op.upper()[i] = i + 1 < n ? (-0.5 * dp + wv[i]) / h2 : 0.0;
      op.lower()[i] = i > 0 ? (0.5 * dm + wv[i]) / h2 : 0.0;
    }
  }
  return op;
}

}  // namespace

DiscreteOperator assemble_dfdq(const ProblemSpec& spec, const ScalarField& q_lin,
                               const ScalarField& z_lin, const ScalarField& z_nl) {
  ScalarField w_lin = physical_state(spec, z_lin);
  ScalarField w_nl = physical_state(spec, z_nl);
  DiscreteOperator op = parameter_operator(spec, w_lin);
  const auto& nl = spec.nonlinearity;
  for (std::size_t i = 0; i < spec.grid.n; ++i) op.diag()[i] += nl.phi(w_nl[i]) * nl.dpsi(q_lin[i]);
  return op;
}

DiscreteOperator assemble_dfdq(const ProblemSpec& spec, const ScalarField& q_lin,
                               const ScalarField& z) {
  return assemble_dfdq(spec, q_lin, z, z);
}

DiscreteOperator assemble_parameter_operator(const ProblemSpec& spec, const ScalarField& z_lin) {
  return parameter_operator(spec, physical_state(spec, z_lin));
}

Trajectory solve_forward(const ProblemSpec& spec, double T, double dt) {
  if (!spec.homogenized) throw DomainError("solve_forward needs a homogenized problem");
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (T < dt) throw DomainError("dt exceeds horizon");
  const std::size_t steps = step_count(T, dt);
  const DiscreteOperator A = state_operator(spec, spec.q_star);
  const DiscreteOperator lhs = A.identity_plus(dt);
  // constant part of the linear term: linear_part(q*, h_bar)
  const ScalarField b = linear_part(spec, spec.q_star, spec.h_bar);
  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.snapshots.reserve(steps + 1);
  traj.push_back(0.0, spec.u0);
  ScalarField u = spec.u0;
  ScalarField rhs(spec.grid);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t1 = static_cast<double>(k + 1) * dt;
    ScalarField N = reaction(spec, spec.q_star, physical_state(spec, u));
    ScalarField g = spec.g_at(t1);
    for (std::size_t i = 0; i < u.size(); ++i) rhs[i] = u[i] + dt * (g[i] - b[i] - N[i]);
    u = lhs.solve(rhs);
    if (!u.all_finite()) throw BlowUpError("forward solve produced non-finite values", k + 1);
    traj.push_back(t1, u);
  }
  return traj;
}

Trajectory exact_data_derivative(const ProblemSpec& spec, const Trajectory& z) {
  if (z.size() < 2) throw DomainError("data derivative needs at least two samples");
  Trajectory dz;
  dz.times = z.times;
  dz.snapshots.resize(z.size());
  for (std::size_t k = 1; k < z.size(); ++k) {
    dz.snapshots[k] = spec.g_at(z.times[k]) -
                      split_f(spec, spec.q_star, z.snapshots[k], z.snapshots[k - 1]);
  }
  dz.snapshots[0] = dz.snapshots[1];
  return dz;
}

namespace {

ScalarField initial_physical(const ProblemSpec& spec) {
  return spec.homogenized ? spec.u0 + spec.h_bar : spec.u0;
}

}  // namespace

DataBounds data_bounds(const ProblemSpec& spec, const Trajectory* z) {
  DataBounds db;
  const auto& nl = spec.nonlinearity;
  db.w_min = std::min(spec.h_left, spec.h_right);
  db.w_max = std::max(spec.h_left, spec.h_right);
  double mz = std::max(std::abs(nl.phi(spec.h_left)), std::abs(nl.phi(spec.h_right)));
  auto scan = [&](const ScalarField& w) {
    for (double v : w.values()) {
      db.w_min = std::min(db.w_min, v);
      db.w_max = std::max(db.w_max, v);
      mz = std::max(mz, std::abs(nl.phi(v)));
    }
  };
  if (z != nullptr && !z->empty()) {
    db.from_trajectory = true;
    for (const auto& s : z->snapshots) scan(spec.homogenized ? s + spec.h_bar : s);
  } else {
    scan(initial_physical(spec));
  }
  db.M_z = mz;
  double mq = std::max(std::abs(nl.psi(spec.q_left)), std::abs(nl.psi(spec.q_right)));
  for (double q : spec.q_star.values()) mq = std::max(mq, std::abs(nl.psi(q)));
  db.M_q = mq;
  return db;
}

namespace {

// Nodewise minimum of margin(i, g_i) over the scanned times.
struct Worst {
  double value = std::numeric_limits<double>::infinity();
  double t = 0.0;
  double x = 0.0;
};

}  // namespace

VerificationReport validate_problem(const ProblemSpec& spec, const Trajectory* z) {
  VerificationReport rep;
  const auto& nl = spec.nonlinearity;
  const Grid& grid = spec.grid;
  if (spec.q_star.size() != grid.n || spec.u0.size() != grid.n || spec.h_bar.size() != grid.n)
    throw DomainError("problem fields do not match the grid");
  const DataBounds db = data_bounds(spec, z);
  const double cl = spec.c_lower;
  const ScalarField w0 = initial_physical(spec);
  const bool cprob = spec.kind == ProblemKind::CProblem;

  std::vector<double> times = {0.0};
  if (z != nullptr && !z->empty()) times = z->times;

  // Δ_h q* with the parameter's boundary values
  ScalarField lap_q(grid);
  const double h2 = grid.h * grid.h;
  for (std::size_t i = 0; i < grid.n; ++i) {
    double ql = i > 0 ? spec.q_star[i - 1] : spec.q_left;
    double qr = i + 1 < grid.n ? spec.q_star[i + 1] : spec.q_right;
    lap_q[i] = (qr - 2.0 * spec.q_star[i] + ql) / h2;
  }

  Worst g_worst;
  for (double t : times) {
    ScalarField g = spec.g_at(t);
    for (std::size_t i = 0; i < grid.n; ++i) {
      double margin;
      if (cprob)
        margin = g[i] - (spec.q_star[i] * cl + db.M_z * db.M_q);
      else
        margin = (-cl * lap_q[i] + nl.phi0(-cl) - db.M_z * db.M_q) - g[i];
      if (margin < g_worst.value) g_worst = {margin, t, grid.node(i)};
    }
  }

  if (cprob) {
    std::size_t imin = static_cast<std::size_t>(
        std::min_element(w0.values().begin(), w0.values().end()) - w0.values().begin());
    auto& e0 = rep.check("u0 >= c_lower", w0[imin], cl, Sense::AtLeast);
    e0.x = grid.node(imin);
    e0.t = 0.0;
    rep.check("boundary >= c_lower", std::min(spec.h_left, spec.h_right), cl, Sense::AtLeast);
    auto& eg = rep.check("g >= q* c_lower + M_z M_q*", g_worst.value, 0.0, Sense::AtLeast);
    eg.t = g_worst.t;
    eg.x = g_worst.x;
    eg.note = "M_z=" + std::to_string(db.M_z) + " M_q*=" + std::to_string(db.M_q) +
              (db.from_trajectory ? " (realized range)" : " (initial range)");
  } else {
    std::size_t imax = static_cast<std::size_t>(
        std::max_element(w0.values().begin(), w0.values().end()) - w0.values().begin());
    auto& e0 = rep.check("u0 <= -c_lower", w0[imax], -cl, Sense::AtMost);
    e0.x = grid.node(imax);
    e0.t = 0.0;
    rep.check("boundary <= 0", std::max(spec.h_left, spec.h_right), 0.0, Sense::AtMost);
    rep.check("boundary <= -c_lower", std::max(spec.h_left, spec.h_right), -cl, Sense::AtMost);
    double qmin = std::min({spec.q_star.min(), spec.q_left, spec.q_right});
    auto& eq = rep.check("q* > 0", qmin, 0.0, Sense::AtLeast);
    eq.passed = qmin > 0.0;
    auto& el = rep.check("|Delta_h q*| bounded", lap_q.max_abs(),
                         std::numeric_limits<double>::max(), Sense::AtMost);
    el.informational = true;
    auto& eg = rep.check("g <= -c_lower Delta_h q* + phi0(-c_lower) - M_z M_q*", -g_worst.value,
                         0.0, Sense::AtMost);
    eg.t = g_worst.t;
    eg.x = g_worst.x;
    eg.note = "M_z=" + std::to_string(db.M_z) + " M_q*=" + std::to_string(db.M_q) +
              (db.from_trajectory ? " (realized range)" : " (initial range)");
  }

  // monotonicity of phi(w) psi(.) and of phi0 on the sample box
  {
    const double qlo = std::min({spec.q_star.min(), spec.q_left, spec.q_right}) - 1.0;
    const double qhi = std::max({spec.q_star.max(), spec.q_left, spec.q_right}) + 1.0;
    const double wlo = db.w_min, whi = db.w_max;
    double worst = std::numeric_limits<double>::infinity();
    double worst0 = std::numeric_limits<double>::infinity();
    constexpr int S = 41;
    for (int a = 0; a < S; ++a) {
      double w = wlo + (whi - wlo) * a / (S - 1.0);
      worst0 = std::min(worst0, nl.dphi0(w));
      for (int b = 0; b < S; ++b) {
        double q = qlo + (qhi - qlo) * b / (S - 1.0);
        worst = std::min(worst, nl.phi(w) * nl.dpsi(q));
      }
    }
    rep.check("phi(w) psi(q) nondecreasing in q", worst, 0.0, Sense::AtLeast, 1e-14);
    rep.check("phi0 nondecreasing", worst0, 0.0, Sense::AtLeast, 1e-14);
  }

  // growth constants
  {
    double rphi = 0.0, rpsi = 0.0;
    for (int a = -200; a <= 200; ++a) {
      double s = a / 20.0;
      rphi = std::max(rphi, std::abs(nl.phi(s)) / (nl.C_phi * (1.0 + std::pow(std::abs(s), nl.alpha))));
      rpsi = std::max(rpsi, std::abs(nl.dpsi(s)) /
                                (nl.C_psi * (1.0 + std::pow(std::abs(s), nl.beta - 1.0))));
    }
    rep.check("|phi(s)| <= C_phi (1 + |s|^alpha)", rphi, 1.0, Sense::AtMost, 1e-12);
    rep.check("|psi'(t)| <= C_psi (1 + |t|^(beta-1))", rpsi, 1.0, Sense::AtMost, 1e-12);
    const double beta_max = cprob ? 5.0 / 3.0 : 7.0 / 3.0;
    auto& eb = rep.check("beta in stated range", nl.beta, beta_max, Sense::AtMost, 1e-12);
    eb.informational = true;
    eb.note = "three-dimensional embedding range, not binding in 1-D";
    if (nl.beta < 1.0) eb.passed = false;
  }
  return rep;
}

VerificationReport check_max_principle(const Trajectory& z, const ScalarField& h_bar,
                                       double c_lower, ProblemKind kind, double tol) {
  VerificationReport rep;
  const bool cprob = kind == ProblemKind::CProblem;
  double worst = std::numeric_limits<double>::infinity();
  double wt = 0.0, wx = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const auto& s = z.snapshots[k];
    for (std::size_t i = 0; i < s.size(); ++i) {
      double w = s[i] + h_bar[i];
      double margin = cprob ? w - c_lower : -c_lower - w;
      if (margin < worst) {
        worst = margin;
        wt = z.times[k];
        wx = s.grid().node(i);
      }
    }
  }
  auto& e = cprob ? rep.check("max principle: min z >= c_lower", worst + c_lower, c_lower,
                              Sense::AtLeast, tol)
                  : rep.check("max principle: max z <= -c_lower", -c_lower - worst, -c_lower,
                              Sense::AtMost, tol);
  e.t = wt;
  e.x = wx;
  return rep;
}

}  // namespace mras
