// tipwave command line. Talks to the library through the C API only.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tipwave/tipwave.h"

namespace {

// Exit codes: 0 ok, 1 config, 2 blow-up, 3 threshold, 4 i/o.
int exit_code(tw_status status) {
  switch (status) {
    case TW_OK: return 0;
    case TW_ERR_BLOW_UP:
    case TW_ERR_NUMERICAL: return 2;
    case TW_ERR_THRESHOLD: return 3;
    case TW_ERR_IO:
    case TW_ERR_INTERNAL: return 4;
    default: return 1;
  }
}

int report_failure(tw_status status) {
  std::fprintf(stderr, "error (%s):\n%s\n", tw_status_name(status), tw_last_error());
  return exit_code(status);
}

struct ConfigHandle {
  tw_config* ptr = nullptr;
  ~ConfigHandle() { tw_config_free(ptr); }
};

struct ReportHandle {
  tw_report* ptr = nullptr;
  ~ReportHandle() { tw_report_free(ptr); }
};

tw_status load(const std::string& path, const std::vector<std::string>& overrides,
               ConfigHandle& config) {
  std::vector<const char*> raw;
  for (const auto& o : overrides) raw.push_back(o.c_str());
  const auto status = tw_config_load(path.c_str(), raw.data(), raw.size(), &config.ptr);
  if (status != TW_OK) return status;
  for (size_t i = 0; i < tw_config_warning_count(config.ptr); ++i) {
    std::fprintf(stderr, "warning: %s\n", tw_config_warning(config.ptr, i));
  }
  return TW_OK;
}

int run(const std::string& path, std::vector<std::string> overrides, const std::string& out) {
  ConfigHandle config;
  if (const auto s = load(path, overrides, config); s != TW_OK) return report_failure(s);
  ReportHandle report;
  const char* dir = out.empty() ? nullptr : out.c_str();
  if (const auto s = tw_run(config.ptr, dir, &report.ptr); s != TW_OK) return report_failure(s);
  std::fputs(tw_report_summary(report.ptr), stdout);
  if (tw_report_has_thresholds(report.ptr) && !tw_report_thresholds_passed(report.ptr)) {
    std::fprintf(stderr, "threshold check failed\n");
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tip-mass wave equation: closed-loop simulation and spectra"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write its artifacts");
  simulate->add_option("config", config_path, "Scenario config file")->required();
  simulate->add_option("--out", out_dir, "Output directory (overrides out_dir)");
  simulate->add_option("--override", overrides, "key=value applied after the file");

  std::string family;
  int n_max = 100;
  std::string spec_path;
  std::string spec_out;
  bool print_csv = false;
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of one characteristic equation");
  spectrum->add_option("--family", family, "A2, A or Abb")
      ->required()
      ->check(CLI::IsMember({"A2", "A", "Abb"}));
  spectrum->add_option("--n-max", n_max, "Largest branch index")->check(CLI::NonNegativeNumber);
  spectrum->add_option("config", spec_path, "Scenario config file (parameters)")->required();
  spectrum->add_option("--out", spec_out, "Directory for spectrum_<family>.csv");
  spectrum->add_flag("--csv", print_csv, "Print the eigenvalue table instead of the summary");

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Re-fit decay rates from a run directory");
  report->add_option("out-dir", report_dir, "Directory written by simulate")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*simulate) {
    if (!out_dir.empty()) overrides.push_back("out_dir=" + out_dir);
    return run(config_path, overrides, out_dir);
  }

  if (*spectrum) {
    std::vector<std::string> o{"mode=spectrum", "family=" + family,
                               "n_max=" + std::to_string(n_max)};
    if (print_csv) {
      ConfigHandle config;
      if (const auto s = load(spec_path, o, config); s != TW_OK) return report_failure(s);
      tw_spectrum* sp = nullptr;
      if (const auto s = tw_spectrum_compute(config.ptr, family.c_str(), n_max, &sp); s != TW_OK) {
        return report_failure(s);
      }
      std::fputs(tw_spectrum_csv(sp), stdout);
      tw_spectrum_free(sp);
      return 0;
    }
    return run(spec_path, o, spec_out);
  }

  ReportHandle r;
  if (const auto s = tw_report_from_dir(report_dir.c_str(), &r.ptr); s != TW_OK) {
    return report_failure(s);
  }
  std::fputs(tw_report_summary(r.ptr), stdout);
  return 0;
}
