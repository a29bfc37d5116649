// Command-line front end over the C API.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mras/mras_c.h"

namespace {

int exit_code(mras_status s) {
  switch (s) {
    case MRAS_OK: return 0;
    case MRAS_ERR_CONFIG:
    case MRAS_ERR_INVALID_ARGUMENT: return 1;
    case MRAS_ERR_BLOWUP: return 2;
    case MRAS_ERR_VERIFICATION: return 3;
    default: return 4;
  }
}

struct Common {
  std::string config;
  std::string out;
  long long seed = -1;
  bool strict = false;
};

mras_experiment* open(const Common& c, mras_status& st) {
  mras_experiment* exp = nullptr;
  st = mras_experiment_load(c.config.c_str(), &exp);
  if (st != MRAS_OK) return nullptr;
  if (!c.out.empty()) mras_experiment_set_output_dir(exp, c.out.c_str());
  if (c.seed >= 0) mras_experiment_set_seed(exp, static_cast<uint64_t>(c.seed));
  return exp;
}

int report_failure(mras_status st) {
  std::fprintf(stderr, "error (%s): %s\n", mras_status_name(st), mras_last_error());
  return exit_code(st);
}

int finish(mras_experiment* exp, bool strict) {
  size_t passed = 0, failed = 0;
  mras_experiment_check_counts(exp, &passed, &failed);
  mras_experiment_destroy(exp);
  if (strict && failed > 0) {
    std::fprintf(stderr, "%zu verification checks failed\n", failed);
    return exit_code(MRAS_ERR_VERIFICATION);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online coefficient identification laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mras_version()));

  Common run_opts, scan_opts, val_opts;
  auto add_common = [](CLI::App* sub, Common& c) {
    sub->add_option("config", c.config, "experiment configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", c.out, "output directory (overrides the config)");
    sub->add_option("--seed", c.seed, "seed override")->check(CLI::NonNegativeNumber);
    sub->add_flag("--strict", c.strict, "exit with code 3 when any check fails");
  };

  auto* run = app.add_subcommand("run", "forward solve, optional noise, adaptive run, verification");
  add_common(run, run_opts);

  auto* scn = app.add_subcommand("scan", "one experiment per axis value, summary in scan.csv");
  add_common(scn, scan_opts);
  std::string axis;
  std::vector<double> values;
  scn->add_option("--axis", axis, "delta, sp_width, ti_window, n or dt")
      ->required()
      ->check(CLI::IsMember({"delta", "sp_width", "ti_window", "n", "dt"}));
  scn->add_option("--values", values, "axis values")->required()->delimiter(',');

  auto* val = app.add_subcommand("validate", "check the data conditions and the maximum principle");
  add_common(val, val_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; usage errors count as configuration errors
    return app.exit(e) == 0 ? 0 : 1;
  }

  mras_status st = MRAS_OK;
  if (*run) {
    mras_experiment* exp = open(run_opts, st);
    if (exp == nullptr) return report_failure(st);
    st = mras_experiment_run(exp);
    if (st != MRAS_OK) {
      int code = report_failure(st);
      mras_experiment_destroy(exp);
      return code;
    }
    std::fputs(mras_experiment_report_text(exp), stdout);
    double oh = 0, r2 = 0, op = 0, e0 = 0, e1 = 0, pl = 0;
    mras_experiment_rate(exp, &oh, &r2, &op);
    mras_experiment_energy(exp, &e0, &e1, &pl);
    std::printf("E(0)=%.6g E(T)=%.6g plateau=%.6g omega_hat=%.6g (r^2=%.6f) omega_pred=%.6g\n", e0, e1, pl, oh, r2, op);
    return finish(exp, run_opts.strict);
  }
  if (*scn) {
    mras_experiment* exp = open(scan_opts, st);
    if (exp == nullptr) return report_failure(st);
    st = mras_experiment_scan(exp, axis.c_str(), values.data(), values.size());
    if (st != MRAS_OK) {
      int code = report_failure(st);
      mras_experiment_destroy(exp);
      return code;
    }
    std::fputs(mras_experiment_scan_csv(exp), stdout);
    return finish(exp, scan_opts.strict);
  }
  mras_experiment* exp = open(val_opts, st);
  if (exp == nullptr) return report_failure(st);
  int ok = 0;
  st = mras_experiment_validate(exp, &ok);
  if (st != MRAS_OK) {
    int code = report_failure(st);
    mras_experiment_destroy(exp);
    return code;
  }
  std::fputs(mras_experiment_report_text(exp), stdout);
  return finish(exp, val_opts.strict);
}
