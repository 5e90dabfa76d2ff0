#include "tipwave/tipwave.h"

#include <exception>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "tipwave/errors.hpp"
#include "tipwave/scenarios.hpp"
#include "tipwave/spectral.hpp"

struct tw_config {
  tipwave::ParsedConfig parsed;
  std::string serialized;
  std::string mode;
};

struct tw_report {
  tipwave::RunResult result;
  bool has_thresholds = false;
};

struct tw_spectrum {
  tipwave::Spectrum spectrum;
  std::string csv;
};

namespace {

thread_local std::string last_error;

tw_status fail(tw_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

tw_status from_code(tipwave::ErrorCode code) {
  return static_cast<tw_status>(static_cast<int>(code));
}

// Runs body, translating exceptions to status codes.
template <class Body>
tw_status guarded(Body&& body) {
  last_error.clear();
  try {
    body();
    return TW_OK;
  } catch (const tipwave::ConfigError& e) {
    std::string joined;
    for (const auto& v : e.violations()) {
      if (!joined.empty()) joined += '\n';
      joined += v;
    }
    return fail(TW_ERR_CONFIG, joined.empty() ? e.what() : joined);
  } catch (const tipwave::Error& e) {
    return fail(from_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(TW_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TW_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(TW_ERR_INTERNAL, "unknown error");
  }
}

std::vector<std::string> collect(const char* const* overrides, size_t n) {
  std::vector<std::string> out;
  if (overrides == nullptr) return out;
  for (size_t i = 0; i < n; ++i) {
    if (overrides[i] != nullptr) out.emplace_back(overrides[i]);
  }
  return out;
}

tw_config* wrap(tipwave::ParsedConfig parsed) {
  auto c = std::make_unique<tw_config>(tw_config{std::move(parsed), {}, {}});
  c->serialized = tipwave::serialize(c->parsed.config);
  c->mode = tipwave::to_string(c->parsed.config.mode);
  return c.release();
}

const char* at(const std::vector<std::string>& v, size_t i) {
  return i < v.size() ? v[i].c_str() : nullptr;
}

}  // namespace

extern "C" {

const char* tw_version(void) { return "1.0.0"; }

const char* tw_last_error(void) { return last_error.c_str(); }

const char* tw_status_name(tw_status status) {
  switch (status) {
    case TW_OK: return "ok";
    case TW_ERR_CONFIG: return "config error";
    case TW_ERR_BLOW_UP: return "numerical blow-up";
    case TW_ERR_THRESHOLD: return "threshold failure";
    case TW_ERR_IO: return "i/o error";
    case TW_ERR_PARAMETER: return "parameter error";
    case TW_ERR_STRUCTURAL: return "structural error";
    case TW_ERR_HYPOTHESIS: return "hypothesis violated";
    case TW_ERR_NUMERICAL: return "numerical error";
    case TW_ERR_INTERNAL: return "internal error";
    case TW_ERR_ARGUMENT: return "invalid argument";
  }
  return "unknown status";
}

tw_status tw_config_parse(const char* text, const char* const* overrides, size_t n_overrides,
                          tw_config** out) {
  if (text == nullptr || out == nullptr) return fail(TW_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = wrap(tipwave::parse_config(text, collect(overrides, n_overrides)));
  });
}

tw_status tw_config_load(const char* path, const char* const* overrides, size_t n_overrides,
                         tw_config** out) {
  if (path == nullptr || out == nullptr) return fail(TW_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = wrap(tipwave::load_config(path, collect(overrides, n_overrides)));
  });
}

void tw_config_free(tw_config* config) { delete config; }

size_t tw_config_warning_count(const tw_config* config) {
  return config ? config->parsed.warnings.size() : 0;
}

const char* tw_config_warning(const tw_config* config, size_t index) {
  return config ? at(config->parsed.warnings, index) : nullptr;
}

const char* tw_config_serialize(const tw_config* config) {
  return config ? config->serialized.c_str() : nullptr;
}

const char* tw_config_mode(const tw_config* config) {
  return config ? config->mode.c_str() : nullptr;
}

const char* tw_config_out_dir(const tw_config* config) {
  return config ? config->parsed.config.out_dir.c_str() : nullptr;
}

tw_status tw_run(const tw_config* config, const char* out_dir, tw_report** out) {
  if (config == nullptr || out == nullptr) return fail(TW_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const auto& c = config->parsed.config;
    auto result = out_dir ? tipwave::run_scenario(c, out_dir) : tipwave::run_scenario(c);
    *out = new tw_report{std::move(result), c.thresholds.any()};
  });
}

tw_status tw_report_from_dir(const char* dir, tw_report** out) {
  if (dir == nullptr || out == nullptr) return fail(TW_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto text = tipwave::report_from_dir(dir);
    auto* r = new tw_report{};
    r->result.summary = std::move(text);
    *out = r;
  });
}

void tw_report_free(tw_report* report) { delete report; }

const char* tw_report_summary(const tw_report* report) {
  return report ? report->result.summary.c_str() : nullptr;
}

int tw_report_has_thresholds(const tw_report* report) {
  return report && report->has_thresholds ? 1 : 0;
}

int tw_report_thresholds_passed(const tw_report* report) {
  return report && report->result.thresholds_passed ? 1 : 0;
}

int tw_report_abscissa(const tw_report* report, double* value) {
  if (report == nullptr || !report->result.abscissa) return 0;
  if (value) *value = *report->result.abscissa;
  return 1;
}

size_t tw_report_warning_count(const tw_report* report) {
  return report ? report->result.warnings.size() : 0;
}

const char* tw_report_warning(const tw_report* report, size_t index) {
  return report ? at(report->result.warnings, index) : nullptr;
}

tw_status tw_report_energy(const tw_report* report, const char* name, double* initial,
                           double* final_value) {
  if (report == nullptr || name == nullptr) return fail(TW_ERR_ARGUMENT, "null argument");
  const auto* trace = report->result.energy(name);
  if (trace == nullptr || trace->empty()) {
    return fail(TW_ERR_ARGUMENT, std::string("no energy trace named ") + name);
  }
  if (initial) *initial = trace->samples().front().value;
  if (final_value) *final_value = trace->samples().back().value;
  return TW_OK;
}

tw_status tw_spectrum_compute(const tw_config* config, const char* family, int n_max,
                              tw_spectrum** out) {
  if (config == nullptr || family == nullptr || out == nullptr) {
    return fail(TW_ERR_ARGUMENT, "null argument");
  }
  *out = nullptr;
  return guarded([&] {
    const auto f = tipwave::parse_family(family);
    auto s = std::make_unique<tw_spectrum>(
        tw_spectrum{tipwave::compute_spectrum(f, config->parsed.config.params, n_max), {}});
    std::ostringstream csv;
    tipwave::write_csv(csv, s->spectrum);
    s->csv = csv.str();
    *out = s.release();
  });
}

void tw_spectrum_free(tw_spectrum* spectrum) { delete spectrum; }

size_t tw_spectrum_size(const tw_spectrum* spectrum) {
  return spectrum ? spectrum->spectrum.eigenvalues.size() : 0;
}

tw_status tw_spectrum_eigenvalue(const tw_spectrum* spectrum, size_t index, int* n, double* re,
                                 double* im, double* residual) {
  if (spectrum == nullptr) return fail(TW_ERR_ARGUMENT, "null argument");
  const auto& ev = spectrum->spectrum.eigenvalues;
  if (index >= ev.size()) return fail(TW_ERR_ARGUMENT, "eigenvalue index out of range");
  if (n) *n = ev[index].n;
  if (re) *re = ev[index].refined.real();
  if (im) *im = ev[index].refined.imag();
  if (residual) *residual = ev[index].residual;
  return TW_OK;
}

tw_status tw_spectrum_abscissa(const tw_spectrum* spectrum, double* value) {
  if (spectrum == nullptr || value == nullptr) return fail(TW_ERR_ARGUMENT, "null argument");
  return guarded([&] { *value = tipwave::spectral_abscissa(spectrum->spectrum); });
}

const char* tw_spectrum_csv(const tw_spectrum* spectrum) {
  return spectrum ? spectrum->csv.c_str() : nullptr;
}

}  // extern "C"
