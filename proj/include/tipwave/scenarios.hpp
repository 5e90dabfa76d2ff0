#pragma once

// Scenario configuration and the runner behind the command line.
//
// Config files are flat `key = value` lines with `#` comments. A `preset`
// line (or a preset-named mode) expands first; every other line then
// overrides. Polynomials are comma-separated coefficients in ascending
// powers, so `u0 = 0, 0, -3, 1` is x^3 - 3x^2.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tipwave/energy.hpp"
#include "tipwave/params.hpp"
#include "tipwave/signals.hpp"
#include "tipwave/spectral.hpp"

namespace tipwave {

enum class Mode {
  open_plant,
  observer_loop,
  eso_loop,
  spectrum,
  reproduce_sec4,       // ESO loop with the published parameters
  counterexample_sec3,  // observer loop held at its constant-disturbance equilibrium
};

std::string to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view name);

struct Thresholds {
  std::optional<double> max_final_energy_ratio;
  std::optional<double> min_final_energy_ratio;
  std::optional<double> max_fitted_rate;
  bool any() const {
    return max_final_energy_ratio || min_final_energy_ratio || max_fitted_rate;
  }
  bool operator==(const Thresholds&) const = default;
};

struct ScenarioConfig {
  Mode mode = Mode::eso_loop;
  std::string preset;
  SystemParams params;
  int n_cells = 100;
  double r = 0.5;
  double horizon = 20.0;
  std::vector<double> u0{0.0, 0.0, -3.0, 1.0};
  std::vector<double> u0_t;
  std::vector<double> uhat0;
  std::vector<double> uhat0_t;
  std::vector<double> v0{0.0, 0.0, 0.0, -2.0};
  std::vector<double> v0_t;
  std::vector<double> q0;
  std::vector<double> q0_t;
  DisturbanceSpec disturbance;
  Family family = Family::A;
  int n_max = 100;
  std::string out_dir;
  int stride = 20;
  double fit_tail = 0.5;
  double fit_skip = 2.0;
  Thresholds thresholds;

  bool operator==(const ScenarioConfig&) const = default;
};

struct ParsedConfig {
  ScenarioConfig config;
  std::vector<std::string> warnings;  // hypothesis violations and the like
};

/// Throws ConfigError listing every violation found.
ParsedConfig parse_config(std::string_view text);

/// Applies `key = value` overrides on top of already parsed text.
ParsedConfig parse_config(std::string_view text, const std::vector<std::string>& overrides);

/// Reads and parses a file. Throws IoError if it cannot be read.
ParsedConfig load_config(const std::string& path,
                         const std::vector<std::string>& overrides = {});

/// Every key written explicitly; parse_config(serialize(c)).config == c.
std::string serialize(const ScenarioConfig& config);

ScenarioConfig preset_config(std::string_view name);

/// Horner evaluation, ascending coefficients.
double eval_polynomial(const std::vector<double>& coefficients, double x);

struct NamedFit {
  std::string name;
  std::optional<DecayFit> fit;
};

struct RunResult {
  Mode mode = Mode::eso_loop;
  std::size_t steps = 0;
  double t_final = 0.0;
  std::vector<EnergyTrace> energies;
  std::vector<NamedFit> fits;
  std::optional<double> abscissa;
  std::optional<Spectrum> spectrum;
  bool thresholds_passed = true;
  std::vector<std::string> threshold_report;
  std::vector<std::string> warnings;
  std::string summary;

  const EnergyTrace* energy(std::string_view name) const;
};

/// Runs the scenario. Files are written only when `out_dir` is non-empty
/// (the config's own out_dir is used when the argument is omitted).
/// Throws BlowUpError when any value exceeds 1e12 in magnitude.
RunResult run_scenario(const ScenarioConfig& config);
RunResult run_scenario(const ScenarioConfig& config, const std::string& out_dir);

/// Re-fits every energy_*.csv in a finished run directory.
std::string report_from_dir(const std::string& dir);

}  // namespace tipwave
