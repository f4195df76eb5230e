#include "otoclab/otoclab.h"

#include <new>
#include <string>

#include "core/bounds.hpp"
#include "core/config.hpp"
#include "core/runner.hpp"

struct otoclab_run {
  otoclab::RunConfig config;
  bool config_ok = false;
  otoclab::RunOptions options;
  std::string report;
  std::string error;
};

namespace {

otoclab_status map_status(otoclab::RunStatus s) {
  using RS = otoclab::RunStatus;
  switch (s) {
    case RS::Ok: return OTOCLAB_OK;
    case RS::BoundViolation: return OTOCLAB_ERR_BOUND_VIOLATION;
    case RS::ConfigError: return OTOCLAB_ERR_CONFIG;
    case RS::IoError: return OTOCLAB_ERR_IO;
    case RS::InvalidArgument: return OTOCLAB_ERR_INVALID_ARGUMENT;
    case RS::ResourceLimit: return OTOCLAB_ERR_RESOURCE_LIMIT;
    case RS::InternalError: return OTOCLAB_ERR_INTERNAL;
  }
  return OTOCLAB_ERR_INTERNAL;
}

otoclab_status create_common(otoclab_run** out, const char* text, bool from_file) {
  if (!out) return OTOCLAB_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  if (!text) return OTOCLAB_ERR_INVALID_ARGUMENT;
  auto* run = new (std::nothrow) otoclab_run();
  if (!run) return OTOCLAB_ERR_INTERNAL;
  *out = run;
  try {
    run->config = from_file ? otoclab::load_config(text) : otoclab::parse_config(text);
    run->config_ok = true;
    return OTOCLAB_OK;
  } catch (const otoclab::config_error& e) {
    run->error = e.what();
    return OTOCLAB_ERR_CONFIG;
  } catch (const std::exception& e) {
    run->error = e.what();
    return OTOCLAB_ERR_IO;
  }
}

}  // namespace

extern "C" {

const char* otoclab_version(void) { return otoclab::tool_version(); }

const char* otoclab_status_name(otoclab_status status) {
  switch (status) {
    case OTOCLAB_OK: return "ok";
    case OTOCLAB_ERR_BOUND_VIOLATION: return "bound-violation";
    case OTOCLAB_ERR_CONFIG: return "config-error";
    case OTOCLAB_ERR_IO: return "io-error";
    case OTOCLAB_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case OTOCLAB_ERR_RESOURCE_LIMIT: return "resource-limit";
    case OTOCLAB_ERR_INTERNAL: return "internal-error";
  }
  return "unknown";
}

otoclab_status otoclab_run_create(const char* config_json, otoclab_run** out) {
  return create_common(out, config_json, /*from_file=*/false);
}

otoclab_status otoclab_run_create_from_file(const char* path, otoclab_run** out) {
  return create_common(out, path, /*from_file=*/true);
}

void otoclab_run_destroy(otoclab_run* run) { delete run; }

otoclab_status otoclab_run_set_option(otoclab_run* run, const char* key, const char* value) {
  if (!run || !key || !value) return OTOCLAB_ERR_INVALID_ARGUMENT;
  std::string k = key, v = value;
  try {
    if (k == "seed") {
      run->options.seed = std::stoull(v);
    } else if (k == "workers") {
      int w = std::stoi(v);
      if (w < 1) throw std::invalid_argument("workers must be >= 1");
      run->options.workers = w;
    } else if (k == "out-dir") {
      run->options.out_dir = v;
    } else if (k == "sensitivity") {
      run->options.sensitivity = (v == "1" || v == "true");
    } else if (k == "test-mode") {
      run->options.test_mode = (v == "1" || v == "true");
    } else {
      run->error = "unknown option '" + k + "'";
      return OTOCLAB_ERR_INVALID_ARGUMENT;
    }
  } catch (const std::exception& e) {
    run->error = std::string("bad option value: ") + e.what();
    return OTOCLAB_ERR_INVALID_ARGUMENT;
  }
  return OTOCLAB_OK;
}

otoclab_status otoclab_run_execute(otoclab_run* run, const char* command) {
  if (!run) return OTOCLAB_ERR_INVALID_ARGUMENT;
  if (!run->config_ok) {
    if (run->error.empty()) run->error = "run handle carries no valid config";
    return OTOCLAB_ERR_CONFIG;
  }
  otoclab::RunResult result =
      otoclab::execute_command(run->config, run->options, command ? command : "");
  run->report = result.report_json;
  run->error = result.message;
  return map_status(result.status);
}

const char* otoclab_run_report_json(const otoclab_run* run) {
  return run ? run->report.c_str() : "";
}

const char* otoclab_run_last_error(const otoclab_run* run) {
  return run ? run->error.c_str() : "";
}

otoclab_status otoclab_zeta(double alpha, int dimension, double* out) {
  if (!out) return OTOCLAB_ERR_INVALID_ARGUMENT;
  try {
    *out = otoclab::zeta(alpha, dimension);
    return OTOCLAB_OK;
  } catch (const std::exception&) {
    return OTOCLAB_ERR_INVALID_ARGUMENT;
  }
}

otoclab_status otoclab_scrambling_time(int n, double alpha, int dimension, double* out) {
  if (!out) return OTOCLAB_ERR_INVALID_ARGUMENT;
  try {
    *out = otoclab::scrambling_time(n, alpha, dimension);
    return OTOCLAB_OK;
  } catch (const std::exception&) {
    return OTOCLAB_ERR_INVALID_ARGUMENT;
  }
}

}  // extern "C"
