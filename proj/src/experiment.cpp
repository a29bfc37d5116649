#include "mras/experiment.hpp"

#include <chrono>
#include <cmath>
#include <set>

#include <json.hpp>

#include "mras/error.hpp"
#include "mras/forward.hpp"
#include "mras/io.hpp"
#include "mras/operators.hpp"
#include "parallel.hpp"

namespace mras {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError("'" + where + "' must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!ok.count(it.key()))
      throw ConfigError("unknown key '" + it.key() + "'" + (where.empty() ? "" : " in '" + where + "'"));
}

template <class T>
void read(const json& obj, const char* key, const std::string& where, T& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + (where.empty() ? "" : where + ".") + key + "': " + e.what());
  }
}

template <class T>
void read_opt(const json& obj, const char* key, const std::string& where, std::optional<T>& out) {
  if (!obj.contains(key)) return;
  T v{};
  read(obj, key, where, v);
  out = v;
}

std::string lower_key(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string sigma_name(SigmaMode m) {
  return m == SigmaMode::Auto ? "auto" : m == SigmaMode::Force0 ? "force_0" : "force_1";
}

std::string stabilizer_name(StabilizerMode m) {
  return m == StabilizerMode::Guaranteed ? "guaranteed" : "simple";
}

std::string q_update_name(QUpdate m) { return m == QUpdate::Explicit ? "explicit" : "linear_implicit"; }

QUpdate default_q_update(const ExperimentConfig& cfg) {
  if (cfg.adaptive.q_update) return *cfg.adaptive.q_update;
  return cfg.problem.preset == "a_cubic" ? QUpdate::LinearImplicit : QUpdate::Explicit;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') ++line, col = 1;
      else ++col;
    }
    throw ConfigError("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                      e.what());
  }
  ExperimentConfig cfg;
  reject_unknown(root, "", {"problem", "T", "dt", "adaptive", "noise", "analysis", "output_dir", "seed",
                            "snapshot_stride"});
  read(root, "T", "", cfg.T);
  read(root, "dt", "", cfg.dt);
  read(root, "seed", "", cfg.seed);
  read(root, "snapshot_stride", "", cfg.snapshot_stride);
  if (root.contains("output_dir")) {
    std::string d;
    read(root, "output_dir", "", d);
    cfg.output_dir = d;
  }
  if (root.contains("problem")) {
    const json& p = root["problem"];
    reject_unknown(p, "problem", {"preset", "nonlinearity", "a", "b", "n", "q_star", "u0", "g", "c_lower", "boundary"});
    auto& pp = cfg.problem;
    read(p, "preset", "problem", pp.preset);
    read(p, "nonlinearity", "problem", pp.nonlinearity);
    read(p, "a", "problem", pp.a);
    read(p, "b", "problem", pp.b);
    read(p, "n", "problem", pp.n);
    read(p, "q_star", "problem", pp.q_star);
    read(p, "u0", "problem", pp.u0);
    read(p, "g", "problem", pp.g);
    read_opt(p, "c_lower", "problem", pp.c_lower);
    read_opt(p, "boundary", "problem", pp.boundary);
  }
  if (root.contains("adaptive")) {
    const json& a = root["adaptive"];
    reject_unknown(a, "adaptive", {"q0", "q_lin", "M", "C_coe", "lipschitz", "sigma", "stabilizer", "q_update"});
    auto& ap = cfg.adaptive;
    read(a, "q0", "adaptive", ap.q0);
    read(a, "q_lin", "adaptive", ap.q_lin);
    read(a, "M", "adaptive", ap.M);
    read_opt(a, "C_coe", "adaptive", ap.C_coe);
    if (a.contains("lipschitz")) {
      const json& l = a["lipschitz"];
      if (l.is_number()) {
        ap.lipschitz_mode = LipschitzMode::Constant;
        ap.lipschitz_value = l.get<double>();
      } else if (l.is_string() && lower_key(l.get<std::string>()) == "formula") {
        ap.lipschitz_mode = LipschitzMode::Formula;
      } else {
        throw ConfigError("bad value for 'adaptive.lipschitz': expected \"formula\" or a number");
      }
    }
    if (a.contains("sigma")) {
      const json& s = a["sigma"];
      std::string v = s.is_number_integer() ? std::to_string(s.get<int>()) : s.is_string() ? lower_key(s.get<std::string>()) : "";
      if (v == "auto") ap.sigma = SigmaMode::Auto;
      else if (v == "0" || v == "force_0") ap.sigma = SigmaMode::Force0;
      else if (v == "1" || v == "force_1") ap.sigma = SigmaMode::Force1;
      else throw ConfigError("bad value for 'adaptive.sigma': expected auto, 0 or 1");
    }
    if (a.contains("stabilizer")) {
      std::string v;
      read(a, "stabilizer", "adaptive", v);
      v = lower_key(v);
      if (v == "guaranteed") ap.stabilizer = StabilizerMode::Guaranteed;
      else if (v == "simple") ap.stabilizer = StabilizerMode::Simple;
      else throw ConfigError("bad value for 'adaptive.stabilizer': expected guaranteed or simple");
    }
    if (a.contains("q_update")) {
      std::string v;
      read(a, "q_update", "adaptive", v);
      v = lower_key(v);
      if (v == "explicit") ap.q_update = QUpdate::Explicit;
      else if (v == "linear_implicit") ap.q_update = QUpdate::LinearImplicit;
      else throw ConfigError("bad value for 'adaptive.q_update': expected explicit or linear_implicit");
    }
  }
  if (root.contains("noise") && !root["noise"].is_null()) {
    const json& n = root["noise"];
    reject_unknown(n, "noise", {"delta", "p", "seed", "sp_width", "ti_window", "check_halving"});
    NoiseParams np;
    np.config.seed = cfg.seed;
    read(n, "delta", "noise", np.config.delta);
    read(n, "p", "noise", np.config.p);
    if (n.contains("seed")) {
      read(n, "seed", "noise", np.config.seed);
    }
    read(n, "sp_width", "noise", np.config.sp_width);
    read(n, "ti_window", "noise", np.config.ti_window);
    read(n, "check_halving", "noise", np.check_halving);
    cfg.noise = np;
  }
  if (root.contains("analysis")) {
    const json& a = root["analysis"];
    reject_unknown(a, "analysis", {"samples", "sample_radius", "dual_diagnostics", "rate_window"});
    read(a, "samples", "analysis", cfg.analysis.samples);
    read(a, "sample_radius", "analysis", cfg.analysis.sample_radius);
    read(a, "dual_diagnostics", "analysis", cfg.analysis.dual_diagnostics);
    if (a.contains("rate_window")) {
      std::array<double, 2> w{};
      read(a, "rate_window", "analysis", w);
      cfg.analysis.rate_window_start = w[0];
      cfg.analysis.rate_window_end = w[1];
    }
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  return parse_config_text(text);
}

void set_seed(ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
  if (cfg.noise) cfg.noise->config.seed = seed;
}

void validate_config(const ExperimentConfig& cfg) {
  std::vector<std::string> errs;
  const auto& p = cfg.problem;
  if (p.preset != "c_cubic" && p.preset != "a_cubic") errs.push_back("unknown preset '" + p.preset + "'");
  if (!(p.b > p.a)) errs.push_back("domain needs b > a");
  if (p.n == 0) errs.push_back("grid needs n >= 1");
  if (!(cfg.T > 0.0)) errs.push_back("T must be positive");
  if (!(cfg.dt > 0.0)) errs.push_back("dt must be positive");
  if (cfg.dt > cfg.T) errs.push_back("dt exceeds horizon");
  if (p.c_lower && !(*p.c_lower > 0.0)) errs.push_back("c_lower must be positive");
  const auto& a = cfg.adaptive;
  if (!(a.M > 0.0)) errs.push_back("M must be positive");
  if (a.C_coe && !(*a.C_coe > 0.0)) errs.push_back("C_coe must be positive");
  if (a.lipschitz_mode == LipschitzMode::Constant && !(a.lipschitz_value >= 0.0))
    errs.push_back("constant Lipschitz value must be nonnegative");
  if (cfg.snapshot_stride == 0) errs.push_back("snapshot_stride must be at least 1");
  if (cfg.analysis.samples == 0) errs.push_back("analysis.samples must be at least 1");
  if (!(cfg.analysis.sample_radius > 0.0)) errs.push_back("analysis.sample_radius must be positive");
  if (!(cfg.analysis.rate_window_start >= 0.0 && cfg.analysis.rate_window_start < cfg.analysis.rate_window_end &&
        cfg.analysis.rate_window_end <= 1.0))
    errs.push_back("analysis.rate_window must satisfy 0 <= start < end <= 1");
  if (cfg.noise) {
    try {
      validate_noise_config(cfg.noise->config);
    } catch (const ConfigError& e) {
      std::string m = e.what();
      errs.push_back(m.substr(m.find('\n') == std::string::npos ? 0 : m.find('\n') + 5));
    }
    if (cfg.dt > 0 && cfg.T >= cfg.dt && cfg.noise->config.ti_window > step_count(cfg.T, cfg.dt) + 1)
      errs.push_back("ti_window exceeds the number of samples");
  }
  if (errs.empty()) {
    try {
      ProblemSpec spec = build_problem(p);
      parse_profile(a.q0, p.a, p.b);
      if (!a.q_lin.empty()) parse_profile(a.q_lin, p.a, p.b);
    } catch (const Error& e) {
      errs.push_back(e.what());
    }
  }
  if (!errs.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errs) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
}

std::string config_to_json(const ExperimentConfig& cfg, bool include_output_dir) {
  ProblemParams p = with_preset_defaults(cfg.problem);
  ojson root;
  ojson prob;
  prob["preset"] = p.preset;
  prob["nonlinearity"] = p.nonlinearity;
  prob["a"] = p.a;
  prob["b"] = p.b;
  prob["n"] = p.n;
  prob["q_star"] = p.q_star;
  prob["u0"] = p.u0;
  prob["g"] = p.g;
  prob["c_lower"] = *p.c_lower;
  prob["boundary"] = *p.boundary;
  root["problem"] = prob;
  root["T"] = cfg.T;
  root["dt"] = cfg.dt;
  ojson ad;
  const auto& a = cfg.adaptive;
  ad["q0"] = a.q0;
  ad["q_lin"] = a.q_lin.empty() ? a.q0 : a.q_lin;
  ad["M"] = a.M;
  ad["C_coe"] = a.C_coe ? *a.C_coe : *p.c_lower;
  if (a.lipschitz_mode == LipschitzMode::Formula) ad["lipschitz"] = "formula";
  else ad["lipschitz"] = a.lipschitz_value;
  ad["sigma"] = sigma_name(a.sigma);
  ad["stabilizer"] = stabilizer_name(a.stabilizer);
  ad["q_update"] = q_update_name(default_q_update(cfg));
  root["adaptive"] = ad;
  if (cfg.noise) {
    ojson n;
    n["delta"] = cfg.noise->config.delta;
    n["p"] = cfg.noise->config.p;
    n["seed"] = cfg.noise->config.seed;
    n["sp_width"] = cfg.noise->config.sp_width;
    n["ti_window"] = cfg.noise->config.ti_window;
    n["check_halving"] = cfg.noise->check_halving;
    root["noise"] = n;
  }
  ojson an;
  an["samples"] = cfg.analysis.samples;
  an["sample_radius"] = cfg.analysis.sample_radius;
  an["dual_diagnostics"] = cfg.analysis.dual_diagnostics;
  an["rate_window"] = {cfg.analysis.rate_window_start, cfg.analysis.rate_window_end};
  root["analysis"] = an;
  root["seed"] = cfg.seed;
  root["snapshot_stride"] = cfg.snapshot_stride;
  if (include_output_dir) root["output_dir"] = cfg.output_dir.string();
  return root.dump(2) + "\n";
}

namespace {

AdaptiveConfig make_adaptive(const ExperimentConfig& cfg, const ProblemSpec& spec) {
  const auto& a = cfg.adaptive;
  AdaptiveConfig ac;
  ac.q0 = ScalarField::sample(spec.grid, parse_profile(a.q0, spec.grid.a, spec.grid.b));
  ac.q_lin = a.q_lin.empty() ? ac.q0 : ScalarField::sample(spec.grid, parse_profile(a.q_lin, spec.grid.a, spec.grid.b));
  ac.M = a.M;
  ac.C_coe = a.C_coe ? *a.C_coe : spec.c_lower;
  ac.lipschitz_mode = a.lipschitz_mode;
  ac.lipschitz_value = a.lipschitz_value;
  ac.sigma = a.sigma;
  ac.dt = cfg.dt;
  ac.T = cfg.T;
  ac.stabilizer = a.stabilizer;
  ac.q_update = default_q_update(cfg);
  return ac;
}

Trajectory strided(const Trajectory& t, std::size_t stride) {
  if (stride <= 1) return t;
  Trajectory out;
  for (std::size_t k = 0; k < t.size(); k += stride) out.push_back(t.times[k], t.snapshots[k]);
  if ((t.size() - 1) % stride != 0) out.push_back(t.times.back(), t.snapshots.back());
  return out;
}

struct NoisyPipeline {
  SmoothedData smoothed;
  Trajectory noisy;
  std::vector<double> inflation;
  double L0 = 0.0;
};

NoisyPipeline prepare_noisy(const ExperimentConfig& cfg, const ProblemSpec& spec, const AdaptiveConfig& ac,
                            const Trajectory& data, const Trajectory& dz, const NoiseConfig& nc) {
  NoisyPipeline np;
  np.noisy = add_noise(data, nc);
  np.smoothed = smooth_temporal(np.noisy, nc, &data, &dz);
  SamplingOptions so;
  so.samples = cfg.analysis.samples;
  so.seed = cfg.seed;
  so.radius = cfg.analysis.sample_radius;
  np.L0 = estimate_noise_constants(spec, ac.q_lin, data, so).L0;
  np.inflation.resize(data.size());
  double sup = 0.0;
  for (std::size_t k = 0; k < data.size(); ++k) {
    sup = std::max(sup, np.smoothed.delta_sp[k]);
    np.inflation[k] = np.L0 * sup;
  }
  return np;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_outputs) {
  validate_config(cfg);
  const auto wall0 = std::chrono::steady_clock::now();
  ExperimentResult res;
  res.spec = homogenize(build_problem(cfg.problem));
  const ProblemSpec& spec = res.spec;
  res.adaptive = make_adaptive(cfg, spec);
  validate_adaptive_config(res.adaptive, spec);
  const AdaptiveConfig& ac = res.adaptive;

  res.data = solve_forward(spec, cfg.T, cfg.dt);
  const Trajectory dz = exact_data_derivative(spec, res.data);

  VerificationReport& rep = res.report;
  rep.append(validate_problem(spec, &res.data));
  rep.append(check_max_principle(res.data, spec.h_bar, spec.c_lower, spec.kind));

  ProofConstants pc;
  pc.C_coe = ac.C_coe;
  pc.M = ac.M;
  pc.C_VH = embedding_constant(spec.grid);
  res.C_VH = pc.C_VH;
  res.omega_pred = predicted_rate(pc);

  RunOptions ro;
  ro.extended_diagnostics = cfg.analysis.dual_diagnostics;
  ro.throw_on_blowup = false;
  std::optional<NoisyPipeline> noisy;
  if (cfg.noise) {
    noisy = prepare_noisy(cfg, spec, ac, res.data, dz, cfg.noise->config);
    ro.clean = &res.data;
    ro.inflation = noisy->inflation;
    res.latency = noisy->smoothed.lookahead;
    res.run = run_mras(spec, noisy->smoothed.z_reg, noisy->smoothed.dz_reg, ac, ro);
    res.smoothed = noisy->smoothed;
  } else {
    res.run = run_mras(spec, res.data, dz, ac, ro);
  }

  const auto times = res.run.diagnostics.column("t");
  const auto E = energy(res.run.diagnostics);
  res.plateau = plateau_energy(E);

  if (!res.run.blowup_step) {
    // streaming causality
    auto& c = rep.check("streaming causality: samples read beyond the current step", static_cast<double>(res.latency),
                        static_cast<double>(res.latency), Sense::AtMost);
    c.note = "max data index read " + std::to_string(res.run.max_data_index_read) + " of " +
             std::to_string(res.data.size() - 1) + ", declared lookahead " + std::to_string(res.latency);

    const double E0 = E.front();
    if (!cfg.noise) {
      VerificationReport mono = verify_monotone(E, 1e-10 * (1.0 + E0), times);
      double worst = -std::numeric_limits<double>::infinity();
      std::size_t wk = 0, fails = 0;
      for (std::size_t k = 0; k + 1 < E.size(); ++k) {
        if (E[k + 1] - E[k] > worst) worst = E[k + 1] - E[k], wk = k + 1;
        fails += mono.entries()[k].passed ? 0 : 1;
      }
      auto& m = rep.check("energy nonincreasing: max step increase", E.size() > 1 ? worst : 0.0, 1e-10 * (1.0 + E0),
                          Sense::AtMost);
      m.t = times[wk];
      m.note = std::to_string(fails) + " of " + std::to_string(E.size() - 1) + " steps violate";
      DualBoundInputs dual;
      if (cfg.analysis.dual_diagnostics && spec.kind == ProblemKind::CProblem)
        dual.dfdq_norm = max_dfdq_norm(spec, ac.q_lin, res.data, std::max<std::size_t>(1, res.data.size() / 50));
      rep.append(verify_bounds(res.run, pc,
                                     cfg.analysis.dual_diagnostics && spec.kind == ProblemKind::CProblem ? &dual : nullptr));
    }
    try {
      // samples at the roundoff floor carry no rate information
      double t_end = cfg.analysis.rate_window_end * cfg.T;
      for (std::size_t k = 0; k < E.size(); ++k)
        if (E[k] < 1e-13 * E0) {
          t_end = std::min(t_end, times[k > 0 ? k - 1 : 0]);
          break;
        }
      res.rate = fit_decay_rate(E, times, cfg.analysis.rate_window_start * cfg.T, t_end);
      auto& r = rep.check("decay rate omega_hat >= 0.5 omega_pred", res.rate.omega_hat, 0.5 * res.omega_pred,
                          Sense::AtLeast);
      r.note = "r^2 = " + std::to_string(res.rate.r_squared);
      if (cfg.noise) r.informational = true;
    } catch (const DomainError& e) {
      auto& r = rep.check("decay rate fit", 0.0, 0.0, Sense::AtLeast);
      r.informational = true;
      r.note = e.what();
    }

    SamplingOptions so;
    so.samples = cfg.analysis.samples;
    so.seed = cfg.seed;
    so.radius = cfg.analysis.sample_radius;
    rep.append(verify_coercivity(spec, res.data, ac.C_coe, so));
    rep.append(verify_lipschitz(spec, ac, res.data, so));

    if (noisy) {
      auto& l0 = rep.check("noise constant L0 (sampled)", noisy->L0, 0.0, Sense::AtLeast);
      l0.informational = true;
      rep.append(verify_noisy_bound(res.run, noisy->smoothed, pc, 0.9 * res.omega_pred, cfg.noise->config.p));
      if (cfg.noise->check_halving && cfg.noise->config.delta > 0) {
        ExperimentConfig half = cfg;
        half.noise->check_halving = false;
        half.noise->config.delta *= 0.5;
        half.analysis.dual_diagnostics = false;
        NoisyPipeline hp = prepare_noisy(half, spec, ac, res.data, dz, half.noise->config);
        RunOptions hro;
        hro.clean = &res.data;
        hro.inflation = hp.inflation;
        MrasRun hr = run_mras(spec, hp.smoothed.z_reg, hp.smoothed.dz_reg, ac, hro);
        const double hplat = plateau_energy(energy(hr.diagnostics));
        res.plateau_ratio = hplat > 0 ? res.plateau / hplat : std::numeric_limits<double>::infinity();
        rep.append(verify_plateau_ratio(res.plateau, hplat));
      }
    }
  }
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();

  if (write_outputs) {
    const auto& dir = cfg.output_dir;
    std::filesystem::create_directories(dir);
    ojson meta;
    meta["grid"] = {{"a", spec.grid.a}, {"b", spec.grid.b}, {"n", spec.grid.n}};
    meta["dt"] = cfg.dt;
    meta["T"] = cfg.T;
    meta["spec_hash"] = fnv1a_hex(config_to_json(cfg, false));
    meta["problem"] = to_string(spec.kind);
    meta["sigma"] = res.run.sigma;
    meta["omega_pred"] = res.omega_pred;
    meta["C_VH"] = res.C_VH;
    meta["online_latency_steps"] = res.latency;
    meta["snapshot_stride"] = cfg.snapshot_stride;
    if (res.smoothed) meta["delta_ti"] = res.smoothed->delta_ti;
    if (res.run.blowup_step) meta["blowup_step"] = *res.run.blowup_step;
    write_text_file(dir / "meta.json", meta.dump(2) + "\n");
    write_text_file(dir / "config.json", config_to_json(cfg, false));
    write_text_file(dir / "snapshots.csv", snapshots_csv(strided(res.data, cfg.snapshot_stride)));
    write_text_file(dir / "diagnostics.csv", table_csv(res.run.diagnostics, diagnostic_columns()));
    if (cfg.analysis.dual_diagnostics) {
      std::vector<std::string> cols = {"t"};
      cols.insert(cols.end(), extended_diagnostic_columns().begin(), extended_diagnostic_columns().end());
      write_text_file(dir / "diagnostics_ext.csv", table_csv(res.run.diagnostics, cols));
    }
    if (!res.run.q.empty()) write_text_file(dir / "q_final.csv", field_csv(res.run.q.snapshots.back()));
    if (noisy) {
      write_text_file(dir / "noisy_snapshots.csv", snapshots_csv(strided(noisy->noisy, cfg.snapshot_stride)));
      write_text_file(dir / "smoothed_snapshots.csv",
                      snapshots_csv(strided(noisy->smoothed.z_reg, cfg.snapshot_stride)));
      write_text_file(dir / "delta_sp.csv", series_csv(noisy->smoothed.z_reg.times, noisy->smoothed.delta_sp));
    }
    write_text_file(dir / "report.json", rep.to_json());
    write_text_file(dir / "report.txt", rep.to_text());
  }
  if (res.run.blowup_step) throw BlowUpError("adaptive system diverged", *res.run.blowup_step);
  return res;
}

VerificationReport validate_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  ProblemSpec spec = homogenize(build_problem(cfg.problem));
  VerificationReport rep = validate_problem(spec);
  for (auto& e : rep.entries()) e.name = "initial range: " + e.name;
  Trajectory z = solve_forward(spec, cfg.T, cfg.dt);
  rep.append(validate_problem(spec, &z));
  rep.append(check_max_principle(z, spec.h_bar, spec.c_lower, spec.kind));
  return rep;
}

ScanAxis parse_scan_axis(const std::string& name) {
  if (name == "delta") return ScanAxis::Delta;
  if (name == "sp_width") return ScanAxis::SpWidth;
  if (name == "ti_window") return ScanAxis::TiWindow;
  if (name == "n") return ScanAxis::N;
  if (name == "dt") return ScanAxis::Dt;
  throw ConfigError("unknown scan axis '" + name + "' (expected delta, sp_width, ti_window, n or dt)");
}

std::string to_string(ScanAxis axis) {
  switch (axis) {
    case ScanAxis::Delta: return "delta";
    case ScanAxis::SpWidth: return "sp_width";
    case ScanAxis::TiWindow: return "ti_window";
    case ScanAxis::N: return "n";
    case ScanAxis::Dt: return "dt";
  }
  return "";
}

namespace {

ExperimentConfig with_axis_value(const ExperimentConfig& base, ScanAxis axis, double v) {
  ExperimentConfig c = base;
  auto noise = [&]() -> NoiseConfig& {
    if (!c.noise) {
      c.noise = NoiseParams{};
      c.noise->config.seed = c.seed;
    }
    c.noise->check_halving = false;
    return c.noise->config;
  };
  switch (axis) {
    case ScanAxis::Delta: noise().delta = v; break;
    case ScanAxis::SpWidth: noise().sp_width = v; break;
    case ScanAxis::TiWindow:
      if (v < 1 || v != std::floor(v)) throw ConfigError("ti_window values must be positive integers");
      noise().ti_window = static_cast<std::size_t>(v);
      break;
    case ScanAxis::N:
      if (v < 1 || v != std::floor(v)) throw ConfigError("n values must be positive integers");
      c.problem.n = static_cast<std::size_t>(v);
      break;
    case ScanAxis::Dt: c.dt = v; break;
  }
  return c;
}

}  // namespace

std::vector<ScanRow> scan(const ExperimentConfig& base, ScanAxis axis, const std::vector<double>& values,
                          unsigned threads) {
  std::vector<ScanRow> rows(values.size());
  detail::parallel_for(values.size(), threads, [&](std::size_t i) {
    ScanRow& row = rows[i];
    row.value = values[i];
    try {
      ExperimentConfig c = with_axis_value(base, axis, values[i]);
      c.output_dir = base.output_dir / (to_string(axis) + "_" + std::to_string(i));
      ExperimentResult r = run_experiment(c, true);
      row.status = "ok";
      row.plateau = r.plateau;
      row.omega_hat = r.rate.omega_hat;
      for (const auto& e : r.report.entries())
        if (e.name.rfind("coercivity", 0) == 0) row.C_coe_empirical = e.measured;
      row.passed = r.report.passed_count();
      row.failed = r.report.failed_count();
    } catch (const BlowUpError&) {
      row.status = "blowup";
    } catch (const ConfigError&) {
      row.status = "config";
    } catch (const std::exception&) {
      row.status = "error";
    }
  });
  for (std::size_t i = 0; i + 1 < rows.size(); ++i)
    if (rows[i].status == "ok" && rows[i + 1].status == "ok" && rows[i + 1].plateau > 0)
      rows[i].plateau_ratio = rows[i].plateau / rows[i + 1].plateau;
  write_text_file(base.output_dir / "scan.csv", scan_csv(axis, rows));
  return rows;
}

std::string scan_csv(ScanAxis axis, const std::vector<ScanRow>& rows) {
  std::string s = to_string(axis) + ",status,E_plateau,omega_hat,C_coe_empirical,passed,failed,plateau_ratio\n";
  for (const auto& r : rows) {
    s += format_number(r.value) + "," + r.status + "," + format_number(r.plateau) + "," + format_number(r.omega_hat) +
         "," + format_number(r.C_coe_empirical) + "," + std::to_string(r.passed) + "," + std::to_string(r.failed) + "," +
         (r.plateau_ratio ? format_number(*r.plateau_ratio) : "") + "\n";
  }
  return s;
}

}  // namespace mras
