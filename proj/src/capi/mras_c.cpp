#include "mras/mras_c.h"

#include <memory>
#include <string>
#include <vector>

#include "mras/error.hpp"
#include "mras/experiment.hpp"

struct mras_experiment {
  mras::ExperimentConfig config;
  std::string config_json;
  std::string report_text;
  std::string report_json;
  std::string scan_csv;
  std::size_t passed = 0;
  std::size_t failed = 0;
  bool has_rate = false;
  double omega_hat = 0.0;
  double r_squared = 0.0;
  double omega_pred = 0.0;
  bool has_energy = false;
  double e_initial = 0.0;
  double e_final = 0.0;
  double plateau = 0.0;
};

namespace {

thread_local std::string last_error;

mras_status fail(mras_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

template <class F>
mras_status guarded(F&& fn) {
  last_error.clear();
  try {
    return fn();
  } catch (const mras::ConfigError& e) {
    return fail(MRAS_ERR_CONFIG, e.what());
  } catch (const mras::BlowUpError& e) {
    return fail(MRAS_ERR_BLOWUP, e.what());
  } catch (const mras::IoError& e) {
    return fail(MRAS_ERR_IO, e.what());
  } catch (const mras::DomainError& e) {
    return fail(MRAS_ERR_DOMAIN, e.what());
  } catch (const std::exception& e) {
    return fail(MRAS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MRAS_ERR_INTERNAL, "unknown error");
  }
}

void store_report(mras_experiment* exp, const mras::VerificationReport& rep) {
  exp->report_text = rep.to_text();
  exp->report_json = rep.to_json();
  exp->passed = rep.passed_count();
  exp->failed = rep.failed_count();
}

}  // namespace

extern "C" {

const char* mras_last_error(void) { return last_error.c_str(); }

const char* mras_version(void) { return "1.0.0"; }

const char* mras_status_name(mras_status status) {
  switch (status) {
    case MRAS_OK: return "ok";
    case MRAS_ERR_CONFIG: return "config error";
    case MRAS_ERR_BLOWUP: return "solver blow-up";
    case MRAS_ERR_VERIFICATION: return "verification failure";
    case MRAS_ERR_IO: return "i/o error";
    case MRAS_ERR_DOMAIN: return "domain error";
    case MRAS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MRAS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

mras_status mras_experiment_load(const char* path, mras_experiment** out) {
  if (path == nullptr || out == nullptr) return fail(MRAS_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto exp = std::make_unique<mras_experiment>();
    exp->config = mras::parse_config(path);
    *out = exp.release();
    return MRAS_OK;
  });
}

mras_status mras_experiment_from_json(const char* json, mras_experiment** out) {
  if (json == nullptr || out == nullptr) return fail(MRAS_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto exp = std::make_unique<mras_experiment>();
    exp->config = mras::parse_config_text(json);
    *out = exp.release();
    return MRAS_OK;
  });
}

void mras_experiment_destroy(mras_experiment* exp) { delete exp; }

mras_status mras_experiment_set_output_dir(mras_experiment* exp, const char* dir) {
  if (exp == nullptr || dir == nullptr) return fail(MRAS_ERR_INVALID_ARGUMENT, "null argument");
  exp->config.output_dir = dir;
  return MRAS_OK;
}

mras_status mras_experiment_set_seed(mras_experiment* exp, uint64_t seed) {
  if (exp == nullptr) return fail(MRAS_ERR_INVALID_ARGUMENT, "null handle");
  mras::set_seed(exp->config, seed);
  return MRAS_OK;
}

const char* mras_experiment_config_json(mras_experiment* exp) {
  if (exp == nullptr) return "";
  exp->config_json = mras::config_to_json(exp->config);
  return exp->config_json.c_str();
}

mras_status mras_experiment_validate(mras_experiment* exp, int* all_passed) {
  if (exp == nullptr) return fail(MRAS_ERR_INVALID_ARGUMENT, "null handle");
  return guarded([&] {
    mras::VerificationReport rep = mras::validate_experiment(exp->config);
    store_report(exp, rep);
    if (all_passed != nullptr) *all_passed = rep.all_passed() ? 1 : 0;
    return MRAS_OK;
  });
}

mras_status mras_experiment_run(mras_experiment* exp) {
  if (exp == nullptr) return fail(MRAS_ERR_INVALID_ARGUMENT, "null handle");
  return guarded([&] {
    mras::ExperimentResult r = mras::run_experiment(exp->config, true);
    store_report(exp, r.report);
    exp->has_rate = true;
    exp->omega_hat = r.rate.omega_hat;
    exp->r_squared = r.rate.r_squared;
    exp->omega_pred = r.omega_pred;
    auto E = mras::energy(r.run.diagnostics);
    exp->has_energy = !E.empty();
    if (!E.empty()) {
      exp->e_initial = E.front();
      exp->e_final = E.back();
    }
    exp->plateau = r.plateau;
    return MRAS_OK;
  });
}

mras_status mras_experiment_scan(mras_experiment* exp, const char* axis, const double* values, size_t count) {
  if (exp == nullptr || axis == nullptr || (values == nullptr && count > 0))
    return fail(MRAS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    mras::ScanAxis ax = mras::parse_scan_axis(axis);
    std::vector<double> v(values, values + count);
    auto rows = mras::scan(exp->config, ax, v);
    exp->scan_csv = mras::scan_csv(ax, rows);
    exp->passed = exp->failed = 0;
    for (const auto& r : rows) {
      exp->passed += r.passed;
      exp->failed += r.failed + (r.status == "ok" ? 0 : 1);
    }
    return MRAS_OK;
  });
}

mras_status mras_experiment_check_counts(const mras_experiment* exp, size_t* passed, size_t* failed) {
  if (exp == nullptr) return fail(MRAS_ERR_INVALID_ARGUMENT, "null handle");
  if (passed != nullptr) *passed = exp->passed;
  if (failed != nullptr) *failed = exp->failed;
  return MRAS_OK;
}

mras_status mras_experiment_rate(const mras_experiment* exp, double* omega_hat, double* r_squared,
                                 double* omega_pred) {
  if (exp == nullptr) return fail(MRAS_ERR_INVALID_ARGUMENT, "null handle");
  if (!exp->has_rate) return fail(MRAS_ERR_INVALID_ARGUMENT, "no completed run");
  if (omega_hat != nullptr) *omega_hat = exp->omega_hat;
  if (r_squared != nullptr) *r_squared = exp->r_squared;
  if (omega_pred != nullptr) *omega_pred = exp->omega_pred;
  return MRAS_OK;
}

mras_status mras_experiment_energy(const mras_experiment* exp, double* initial, double* final_value,
                                   double* plateau) {
  if (exp == nullptr) return fail(MRAS_ERR_INVALID_ARGUMENT, "null handle");
  if (!exp->has_energy) return fail(MRAS_ERR_INVALID_ARGUMENT, "no completed run");
  if (initial != nullptr) *initial = exp->e_initial;
  if (final_value != nullptr) *final_value = exp->e_final;
  if (plateau != nullptr) *plateau = exp->plateau;
  return MRAS_OK;
}

const char* mras_experiment_report_text(const mras_experiment* exp) {
  return exp == nullptr ? "" : exp->report_text.c_str();
}

const char* mras_experiment_report_json(const mras_experiment* exp) {
  return exp == nullptr ? "" : exp->report_json.c_str();
}

const char* mras_experiment_scan_csv(const mras_experiment* exp) {
  return exp == nullptr ? "" : exp->scan_csv.c_str();
}

}  // extern "C"
