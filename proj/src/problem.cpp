#include "mras/problem.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mras/error.hpp"

namespace mras {

namespace {

double signed_pow(double t, double p) { return std::copysign(std::pow(std::abs(t), p), t); }

}  // namespace

Nonlinearity make_nonlinearity(std::string_view name) {
  Nonlinearity nl;
  nl.name = std::string(name);
  auto zero = [](double) { return 0.0; };
  nl.phi0 = zero;
  nl.dphi0 = zero;
  if (name == "c_cubic") {
    nl.phi = [](double s) { return s * s * s; };
    nl.dphi = [](double s) { return 3.0 * s * s; };
    nl.psi = [](double t) { return signed_pow(t, 5.0 / 3.0); };
    nl.dpsi = [](double t) { return 5.0 / 3.0 * std::pow(std::abs(t), 2.0 / 3.0); };
    nl.ddpsi = [](double t) { return t == 0.0 ? 0.0 : 10.0 / 9.0 * signed_pow(t, -1.0 / 3.0); };
    nl.alpha = 3.0;
    nl.beta = 5.0 / 3.0;
    nl.C_psi = 5.0 / 3.0;
  } else if (name == "a_cubic") {
    nl.phi0 = [](double s) { return s * s * s; };
    nl.dphi0 = [](double s) { return 3.0 * s * s; };
    nl.phi = [](double s) { return s; };
    nl.dphi = [](double) { return 1.0; };
    nl.psi = [](double t) { return -signed_pow(t, 7.0 / 3.0); };
    nl.dpsi = [](double t) { return -7.0 / 3.0 * std::pow(std::abs(t), 4.0 / 3.0); };
    nl.ddpsi = [](double t) { return -28.0 / 9.0 * signed_pow(t, 1.0 / 3.0); };
    nl.alpha = 1.0;
    nl.beta = 7.0 / 3.0;
    nl.C_psi = 7.0 / 3.0;
  } else if (name == "c_linear") {
    nl.phi = [](double s) { return s * s * s; };
    nl.dphi = [](double s) { return 3.0 * s * s; };
    nl.psi = [](double t) { return t; };
    nl.dpsi = [](double) { return 1.0; };
    nl.ddpsi = zero;
    nl.alpha = 3.0;
    nl.psi_linear = true;
  } else if (name == "a_linear") {
    nl.phi0 = [](double s) { return s * s * s; };
    nl.dphi0 = [](double s) { return 3.0 * s * s; };
    nl.phi = [](double s) { return s; };
    nl.dphi = [](double) { return 1.0; };
    nl.psi = [](double t) { return -t; };
    nl.dpsi = [](double) { return -1.0; };
    nl.ddpsi = zero;
    nl.alpha = 1.0;
    nl.psi_linear = true;
  } else if (name == "none") {
    nl.phi = zero;
    nl.dphi = zero;
    nl.psi = zero;
    nl.dpsi = zero;
    nl.ddpsi = zero;
    nl.psi_linear = true;
  } else {
    throw ConfigError("unknown nonlinearity '" + std::string(name) + "'");
  }
  return nl;
}

std::string to_string(ProblemKind kind) {
  return kind == ProblemKind::CProblem ? "c_problem" : "a_problem";
}

namespace {

std::function<double(double)> parse_term(const std::string& term, double a, double b) {
  std::istringstream is(term);
  std::string kind;
  is >> kind;
  std::vector<double> args;
  double v;
  while (is >> v) args.push_back(v);
  if (!is.eof()) throw ConfigError("bad number in profile '" + term + "'");
  auto need = [&](std::size_t k) {
    if (args.size() != k)
      throw ConfigError("profile '" + kind + "' takes " + std::to_string(k) + " arguments");
  };
  const double L = b - a;
  auto xi = [a, L](double x) { return (x - a) / L; };
  constexpr double pi = std::numbers::pi;
  if (kind == "const") {
    need(1);
    double c = args[0];
    return [c](double) { return c; };
  }
  if (kind == "one_plus_sine" || kind == "sine") {
    need(2);
    double amp = args[0], k = args[1], base = kind == "sine" ? 0.0 : 1.0;
    return [=](double x) { return base + amp * std::sin(k * pi * xi(x)); };
  }
  if (kind == "bump") {
    need(3);
    double c = args[0], w = args[1], height = args[2];
    if (!(w > 0.0)) throw ConfigError("bump width must be positive");
    return [=](double x) {
      double s = (xi(x) - c) / w;
      return height * std::exp(-s * s);
    };
  }
  if (kind == "affine") {
    need(2);
    double l = args[0], r = args[1];
    return [=](double x) { return l + (r - l) * xi(x); };
  }
  throw ConfigError("unknown profile '" + kind + "'");
}

}  // namespace

std::function<double(double)> parse_profile(std::string_view text, double a, double b) {
  // terms joined by " + "
  std::vector<std::function<double(double)>> terms;
  std::string s(text);
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(" + ", pos);
    std::string term = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (term.find_first_not_of(' ') == std::string::npos)
      throw ConfigError("empty profile term in '" + s + "'");
    terms.push_back(parse_term(term, a, b));
    if (next == std::string::npos) break;
    pos = next + 3;
  }
  if (terms.size() == 1) return terms.front();
  return [terms](double x) {
    double v = 0.0;
    for (const auto& t : terms) v += t(x);
    return v;
  };
}

ScalarField ProblemSpec::g_at(double t) const {
  return ScalarField::sample(grid, [&](double x) { return source(x, t); });
}

ProblemParams with_preset_defaults(ProblemParams p) {
  auto fill = [](std::string& s, const char* v) {
    if (s.empty()) s = v;
  };
  if (p.preset == "c_cubic") {
    fill(p.nonlinearity, "c_cubic");
    fill(p.q_star, "one_plus_sine 0.5 1");
    fill(p.u0, "const 1");
    fill(p.g, "qstar_affine 1 6");
    if (!p.c_lower) p.c_lower = 1.0;
    if (!p.boundary) p.boundary = std::array<double, 2>{1.0, 1.0};
  } else if (p.preset == "a_cubic") {
    fill(p.nonlinearity, "a_cubic");
    fill(p.q_star, "one_plus_sine 0.3 1");
    fill(p.u0, "const -1");
    fill(p.g, "const -10");
    if (!p.c_lower) p.c_lower = 1.0;
    if (!p.boundary) p.boundary = std::array<double, 2>{-1.0, -1.0};
  } else {
    throw ConfigError("unknown preset '" + p.preset + "' (expected c_cubic or a_cubic)");
  }
  return p;
}

ScalarField affine_extension(const Grid& grid, double left, double right) {
  return ScalarField::sample(grid, [&](double x) { return left + (right - left) * (x - grid.a) / grid.length(); });
}

ProblemSpec build_problem(const ProblemParams& raw) {
  ProblemParams p = with_preset_defaults(raw);
  ProblemSpec spec;
  spec.kind = p.preset == "a_cubic" ? ProblemKind::AProblem : ProblemKind::CProblem;
  spec.grid = make_uniform_grid(p.a, p.b, p.n);
  spec.nonlinearity = make_nonlinearity(p.nonlinearity);
  auto qf = parse_profile(p.q_star, p.a, p.b);
  spec.q_star = ScalarField::sample(spec.grid, qf);
  spec.q_left = qf(p.a);
  spec.q_right = qf(p.b);
  spec.u0 = ScalarField::sample(spec.grid, parse_profile(p.u0, p.a, p.b));
  spec.h_left = (*p.boundary)[0];
  spec.h_right = (*p.boundary)[1];
  spec.c_lower = *p.c_lower;
  spec.h_bar = affine_extension(spec.grid, spec.h_left, spec.h_right);

  std::istringstream is(p.g);
  std::string head;
  is >> head;
  if (head == "qstar_affine") {
    double s = 0.0, K = 0.0;
    if (!(is >> s >> K)) throw ConfigError("g 'qstar_affine' takes 2 arguments");
    spec.source = [qf, s, K](double x, double) { return s * qf(x) + K; };
  } else {
    auto gf = parse_profile(p.g, p.a, p.b);
    spec.source = [gf](double x, double) { return gf(x); };
  }
  return spec;
}

}  // namespace mras
