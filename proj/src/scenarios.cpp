#include "tipwave/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

#include "tipwave/errors.hpp"
#include "tipwave/format.hpp"
#include "tipwave/systems.hpp"

namespace tipwave {

namespace fs = std::filesystem;

// -- names ---------------------------------------------------------------------

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::open_plant: return "open_plant";
    case Mode::observer_loop: return "observer_loop";
    case Mode::eso_loop: return "eso_loop";
    case Mode::spectrum: return "spectrum";
    case Mode::reproduce_sec4: return "reproduce_sec4";
    case Mode::counterexample_sec3: return "counterexample_sec3";
  }
  return "eso_loop";
}

std::optional<Mode> parse_mode(std::string_view name) {
  for (const Mode m : {Mode::open_plant, Mode::observer_loop, Mode::eso_loop, Mode::spectrum,
                       Mode::reproduce_sec4, Mode::counterexample_sec3}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

namespace {

std::optional<DisturbanceKind> parse_d_kind(std::string_view name) {
  for (const auto k : {DisturbanceKind::zero, DisturbanceKind::constant, DisturbanceKind::cosine,
                       DisturbanceKind::exp_decay, DisturbanceKind::table}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::optional<UncertaintyKind> parse_f_kind(std::string_view name) {
  for (const auto k : {UncertaintyKind::zero, UncertaintyKind::sin_of_tip,
                       UncertaintyKind::lipschitz_linear}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

bool is_preset(std::string_view name) {
  return name == "reproduce_sec4" || name == "counterexample_sec3";
}

// -- config parsing --------------------------------------------------------------

struct Entry {
  std::string key;
  std::string value;
  std::string where;
};

using Violations = std::vector<std::string>;
using Setter = std::function<void(ScenarioConfig&, std::string_view, const std::string&, Violations&)>;

std::string in_quotes(std::string_view s) { return "'" + std::string(s) + "'"; }

Setter real(double ScenarioConfig::*field) {
  return [field](ScenarioConfig& c, std::string_view v, const std::string& where, Violations& out) {
    if (const auto x = parse_double(v)) {
      c.*field = *x;
    } else {
      out.push_back(where + ": expected a number, got " + in_quotes(v));
    }
  };
}

Setter param(double SystemParams::*field) {
  return [field](ScenarioConfig& c, std::string_view v, const std::string& where, Violations& out) {
    if (const auto x = parse_double(v)) {
      c.params.*field = *x;
    } else {
      out.push_back(where + ": expected a number, got " + in_quotes(v));
    }
  };
}

Setter disturbance_real(double DisturbanceSpec::*field) {
  return [field](ScenarioConfig& c, std::string_view v, const std::string& where, Violations& out) {
    if (const auto x = parse_double(v)) {
      c.disturbance.*field = *x;
    } else {
      out.push_back(where + ": expected a number, got " + in_quotes(v));
    }
  };
}

Setter integer(int ScenarioConfig::*field) {
  return [field](ScenarioConfig& c, std::string_view v, const std::string& where, Violations& out) {
    const auto x = parse_integer(v);
    if (x && *x >= -1'000'000'000LL && *x <= 1'000'000'000LL) {
      c.*field = static_cast<int>(*x);
    } else {
      out.push_back(where + ": expected an integer, got " + in_quotes(v));
    }
  };
}

Setter polynomial(std::vector<double> ScenarioConfig::*field) {
  return [field](ScenarioConfig& c, std::string_view v, const std::string& where, Violations& out) {
    std::vector<double> coeffs;
    if (!trim(v).empty()) {
      for (const auto part : split(v, ',')) {
        const auto x = parse_double(part);
        if (!x) {
          out.push_back(where + ": bad polynomial coefficient " + in_quotes(trim(part)));
          return;
        }
        coeffs.push_back(*x);
      }
    }
    c.*field = std::move(coeffs);
  };
}

Setter threshold(std::optional<double> Thresholds::*field) {
  return [field](ScenarioConfig& c, std::string_view v, const std::string& where, Violations& out) {
    if (trim(v).empty()) {
      c.thresholds.*field = std::nullopt;
    } else if (const auto x = parse_double(v)) {
      c.thresholds.*field = *x;
    } else {
      out.push_back(where + ": expected a number or nothing, got " + in_quotes(v));
    }
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> t;
    t["mode"] = [](ScenarioConfig& c, std::string_view v, const std::string& where, Violations& out) {
      if (const auto m = parse_mode(v)) {
        c.mode = *m;
      } else {
        out.push_back(where + ": unknown mode " + in_quotes(v));
      }
    };
    t["m"] = param(&SystemParams::m);
    t["alpha"] = param(&SystemParams::alpha);
    t["a"] = param(&SystemParams::a);
    t["beta"] = param(&SystemParams::beta);
    t["gamma"] = param(&SystemParams::gamma);
    t["n_cells"] = integer(&ScenarioConfig::n_cells);
    t["r"] = real(&ScenarioConfig::r);
    t["T"] = real(&ScenarioConfig::horizon);
    t["u0"] = polynomial(&ScenarioConfig::u0);
    t["u0_t"] = polynomial(&ScenarioConfig::u0_t);
    t["uhat0"] = polynomial(&ScenarioConfig::uhat0);
    t["uhat0_t"] = polynomial(&ScenarioConfig::uhat0_t);
    t["v0"] = polynomial(&ScenarioConfig::v0);
    t["v0_t"] = polynomial(&ScenarioConfig::v0_t);
    t["q0"] = polynomial(&ScenarioConfig::q0);
    t["q0_t"] = polynomial(&ScenarioConfig::q0_t);
    t["d_kind"] = [](ScenarioConfig& c, std::string_view v, const std::string& where, Violations& out) {
      if (const auto k = parse_d_kind(v)) {
        c.disturbance.d_kind = *k;
      } else {
        out.push_back(where + ": unknown d_kind " + in_quotes(v));
      }
    };
    t["d_constant"] = disturbance_real(&DisturbanceSpec::constant);
    t["d_amplitude"] = disturbance_real(&DisturbanceSpec::amplitude);
    t["d_frequency"] = disturbance_real(&DisturbanceSpec::frequency);
    t["d_rate"] = disturbance_real(&DisturbanceSpec::rate);
    t["d_table"] = [](ScenarioConfig& c, std::string_view v, const std::string& where, Violations& out) {
      std::vector<std::pair<double, double>> table;
      if (!trim(v).empty()) {
        for (const auto part : split(v, ',')) {
          const auto pair = split(trim(part), ':');
          const auto t = pair.size() == 2 ? parse_double(pair[0]) : std::nullopt;
          const auto d = pair.size() == 2 ? parse_double(pair[1]) : std::nullopt;
          if (!t || !d) {
            out.push_back(where + ": table entries are t:d pairs, got " + in_quotes(trim(part)));
            return;
          }
          table.emplace_back(*t, *d);
        }
      }
      c.disturbance.table = std::move(table);
    };
    t["f_kind"] = [](ScenarioConfig& c, std::string_view v, const std::string& where, Violations& out) {
      if (const auto k = parse_f_kind(v)) {
        c.disturbance.f_kind = *k;
      } else {
        out.push_back(where + ": unknown f_kind " + in_quotes(v));
      }
    };
    t["f_gain"] = disturbance_real(&DisturbanceSpec::f_gain);
    t["family"] = [](ScenarioConfig& c, std::string_view v, const std::string& where, Violations& out) {
      try {
        c.family = parse_family(v);
      } catch (const ParameterError&) {
        out.push_back(where + ": unknown family " + in_quotes(v) + " (expected A2, A or Abb)");
      }
    };
    t["n_max"] = integer(&ScenarioConfig::n_max);
    t["out_dir"] = [](ScenarioConfig& c, std::string_view v, const std::string&, Violations&) {
      c.out_dir = std::string(v);
    };
    t["stride"] = integer(&ScenarioConfig::stride);
    t["fit_tail"] = real(&ScenarioConfig::fit_tail);
    t["fit_skip"] = real(&ScenarioConfig::fit_skip);
    t["max_final_energy_ratio"] = threshold(&Thresholds::max_final_energy_ratio);
    t["min_final_energy_ratio"] = threshold(&Thresholds::min_final_energy_ratio);
    t["max_fitted_rate"] = threshold(&Thresholds::max_fitted_rate);
    return t;
  }();
  return table;
}

bool uses_plant(Mode mode) { return mode != Mode::spectrum; }
bool uses_eso(Mode mode) { return mode == Mode::eso_loop || mode == Mode::reproduce_sec4; }

void check_config(const ScenarioConfig& c, Violations& out, std::vector<std::string>& warnings) {
  try {
    validate(c.params);
  } catch (const ParameterError& e) {
    out.emplace_back(e.what());
  }
  if (c.n_cells < 10) out.push_back("n_cells must be at least 10");
  if (!(c.r > 0.0 && c.r <= 1.0)) {
    out.push_back("r = " + format_double(c.r) + " violates the CFL condition 0 < r <= 1");
  }
  if (!(c.horizon > 0.0 && std::isfinite(c.horizon))) out.push_back("T must be positive");
  if (c.stride < 1) out.push_back("stride must be at least 1");
  if (c.n_max < 0) out.push_back("n_max must be non-negative");
  if (!(c.fit_tail > 0.0 && c.fit_tail <= 1.0)) out.push_back("fit_tail must lie in (0, 1]");
  if (!(c.fit_skip >= 0.0)) out.push_back("fit_skip must be non-negative");
  try {
    validate(c.disturbance);
  } catch (const ParameterError& e) {
    out.emplace_back(e.what());
  }
  if (uses_plant(c.mode) && std::abs(eval_polynomial(c.u0, 0.0)) > 1e-12) {
    out.push_back("u0(0) must be 0 (the plant is clamped at x = 0)");
  }
  if (uses_eso(c.mode)) {
    const double gap = eval_polynomial(c.q0, 1.0) -
                       (eval_polynomial(c.v0, 1.0) - eval_polynomial(c.u0, 1.0));
    if (std::abs(gap) > 1e-12) {
      out.push_back("q0(1) must equal v0(1) - u0(1) (off by " + format_double(gap) + ")");
    }
  }
  for (auto& w : check_hypotheses(c.params).violations()) warnings.push_back(std::move(w));
}

std::vector<Entry> read_entries(std::string_view text, Violations& out) {
  std::vector<Entry> entries;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no);
    if (eq == std::string_view::npos) {
      out.push_back(where + ": expected 'key = value', got " + in_quotes(line));
      continue;
    }
    entries.push_back({std::string(trim(line.substr(0, eq))),
                       std::string(trim(line.substr(eq + 1))), where});
  }
  return entries;
}

ParsedConfig build(const std::vector<Entry>& entries, Violations violations) {
  std::string preset;
  for (const auto& e : entries) {
    if (e.key == "preset") preset = e.value;
  }
  if (preset.empty()) {
    for (const auto& e : entries) {
      if (e.key == "mode" && is_preset(e.value)) preset = e.value;
    }
  }

  ParsedConfig parsed;
  if (!preset.empty()) {
    if (is_preset(preset)) {
      parsed.config = preset_config(preset);
    } else {
      violations.push_back("unknown preset " + in_quotes(preset));
    }
  }
  const auto& table = setters();
  for (const auto& e : entries) {
    if (e.key == "preset") continue;
    const auto it = table.find(e.key);
    if (it == table.end()) {
      violations.push_back(e.where + ": unknown key " + in_quotes(e.key));
      continue;
    }
    it->second(parsed.config, e.value, e.where + " (" + e.key + ")", violations);
  }
  check_config(parsed.config, violations, parsed.warnings);
  if (!violations.empty()) throw ConfigError(std::move(violations));
  return parsed;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_double(values[i]);
  }
  return out;
}

std::string optional_number(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

ScenarioConfig preset_config(std::string_view name) {
  ScenarioConfig c;
  c.params = SystemParams{5.0, 2.0, 2.0, 1.5, 1.5};
  c.n_cells = 100;
  c.r = 0.5;
  if (name == "reproduce_sec4") {
    c.mode = Mode::reproduce_sec4;
    c.preset = "reproduce_sec4";
    c.horizon = 40.0;
    c.u0 = {0.0, 0.0, -3.0, 1.0};
    c.v0 = {0.0, 0.0, 0.0, -2.0};
    c.q0 = {};
    c.disturbance.d_kind = DisturbanceKind::cosine;
    c.disturbance.amplitude = 1.0;
    c.disturbance.frequency = 2.0;
    c.disturbance.f_kind = UncertaintyKind::sin_of_tip;
    return c;
  }
  if (name == "counterexample_sec3") {
    // u = F x, uhat = -F / beta is an equilibrium for constant F.
    c.mode = Mode::counterexample_sec3;
    c.preset = "counterexample_sec3";
    c.horizon = 20.0;
    c.u0 = {0.0, 1.0};
    c.uhat0 = {-1.0 / c.params.beta};
    c.v0 = {};
    c.disturbance.d_kind = DisturbanceKind::constant;
    c.disturbance.constant = 1.0;
    c.disturbance.f_kind = UncertaintyKind::zero;
    return c;
  }
  throw ParameterError("unknown preset " + in_quotes(name));
}

ParsedConfig parse_config(std::string_view text) { return parse_config(text, {}); }

ParsedConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
  Violations violations;
  auto entries = read_entries(text, violations);
  for (std::size_t i = 0; i < overrides.size(); ++i) {
    const std::string_view o = overrides[i];
    const auto eq = o.find('=');
    const std::string where = "override " + std::to_string(i + 1);
    if (eq == std::string_view::npos) {
      violations.push_back(where + ": expected key=value, got " + in_quotes(o));
      continue;
    }
    entries.push_back({std::string(trim(o.substr(0, eq))), std::string(trim(o.substr(eq + 1))),
                       where});
  }
  return build(entries, std::move(violations));
}

ParsedConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + in_quotes(path));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), overrides);
}

std::string serialize(const ScenarioConfig& c) {
  std::ostringstream out;
  if (!c.preset.empty()) out << "preset = " << c.preset << '\n';
  out << "mode = " << to_string(c.mode) << '\n';
  out << "m = " << format_double(c.params.m) << '\n';
  out << "alpha = " << format_double(c.params.alpha) << '\n';
  out << "a = " << format_double(c.params.a) << '\n';
  out << "beta = " << format_double(c.params.beta) << '\n';
  out << "gamma = " << format_double(c.params.gamma) << '\n';
  out << "n_cells = " << c.n_cells << '\n';
  out << "r = " << format_double(c.r) << '\n';
  out << "T = " << format_double(c.horizon) << '\n';
  out << "u0 = " << join(c.u0) << '\n';
  out << "u0_t = " << join(c.u0_t) << '\n';
  out << "uhat0 = " << join(c.uhat0) << '\n';
  out << "uhat0_t = " << join(c.uhat0_t) << '\n';
  out << "v0 = " << join(c.v0) << '\n';
  out << "v0_t = " << join(c.v0_t) << '\n';
  out << "q0 = " << join(c.q0) << '\n';
  out << "q0_t = " << join(c.q0_t) << '\n';
  const auto& d = c.disturbance;
  out << "d_kind = " << to_string(d.d_kind) << '\n';
  out << "d_constant = " << format_double(d.constant) << '\n';
  out << "d_amplitude = " << format_double(d.amplitude) << '\n';
  out << "d_frequency = " << format_double(d.frequency) << '\n';
  out << "d_rate = " << format_double(d.rate) << '\n';
  out << "d_table = ";
  for (std::size_t i = 0; i < d.table.size(); ++i) {
    if (i > 0) out << ", ";
    out << format_double(d.table[i].first) << ':' << format_double(d.table[i].second);
  }
  out << '\n';
  out << "f_kind = " << to_string(d.f_kind) << '\n';
  out << "f_gain = " << format_double(d.f_gain) << '\n';
  out << "family = " << to_string(c.family) << '\n';
  out << "n_max = " << c.n_max << '\n';
  out << "out_dir = " << c.out_dir << '\n';
  out << "stride = " << c.stride << '\n';
  out << "fit_tail = " << format_double(c.fit_tail) << '\n';
  out << "fit_skip = " << format_double(c.fit_skip) << '\n';
  out << "max_final_energy_ratio = " << optional_number(c.thresholds.max_final_energy_ratio) << '\n';
  out << "min_final_energy_ratio = " << optional_number(c.thresholds.min_final_energy_ratio) << '\n';
  out << "max_fitted_rate = " << optional_number(c.thresholds.max_fitted_rate) << '\n';
  return out.str();
}

double eval_polynomial(const std::vector<double>& coefficients, double x) {
  double v = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) v = v * x + *it;
  return v;
}

const EnergyTrace* RunResult::energy(std::string_view name) const {
  for (const auto& e : energies) {
    if (e.name() == name) return &e;
  }
  return nullptr;
}

// -- running ---------------------------------------------------------------------

namespace {

constexpr double blow_up_limit = 1e12;

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

InitialData initial(const std::vector<double>& value, const std::vector<double>& velocity,
                    const Grid& grid) {
  auto data = InitialData::zero(grid);
  for (int j = 0; j < grid.nodes(); ++j) {
    data.value[static_cast<std::size_t>(j)] = eval_polynomial(value, grid.x(j));
    data.velocity[static_cast<std::size_t>(j)] = eval_polynomial(velocity, grid.x(j));
  }
  return data;
}

// Streams snapshots and boundary states; energies are written at the end.
class Recorder {
 public:
  Recorder(const std::string& dir, const Grid& grid, int stride,
           const std::vector<std::string>& fields, bool boundary)
      : grid_(grid), stride_(stride) {
    if (dir.empty()) return;
    dir_ = dir;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
    for (const auto& name : fields) {
      snapshots_.push_back(std::make_unique<std::ofstream>(
          open_output(dir_ / ("snapshots_" + name + ".csv"))));
      *snapshots_.back() << "t,x,value\n";
    }
    if (boundary) {
      boundary_ = std::make_unique<std::ofstream>(open_output(dir_ / "boundary.csv"));
      *boundary_ << "t,eta,psi\n";
    }
  }

  bool active() const { return !dir_.empty(); }
  const fs::path& dir() const { return dir_; }

  void snapshot(std::size_t step, const std::vector<const FieldHistory*>& fields) {
    if (!active() || step % static_cast<std::size_t>(stride_) != 0) return;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      auto& out = *snapshots_[i];
      const auto values = fields[i]->cur();
      const std::string t = format_double(fields[i]->time());
      for (int j = 0; j < grid_.nodes(); ++j) {
        out << t << ',' << format_double(grid_.x(j)) << ','
            << format_double(values[static_cast<std::size_t>(j)]) << '\n';
      }
    }
  }

  void boundary(double t, const BoundaryOdeStates& s) {
    if (!boundary_) return;
    *boundary_ << format_double(t) << ',' << format_double(s.eta) << ','
               << format_double(s.psi) << '\n';
  }

  void finish() {
    for (auto& s : snapshots_) {
      s->flush();
      if (!*s) throw IoError("write failed in " + dir_.string());
    }
    if (boundary_) {
      boundary_->flush();
      if (!*boundary_) throw IoError("write failed in " + dir_.string());
    }
  }

 private:
  Grid grid_;
  int stride_;
  fs::path dir_;
  std::vector<std::unique_ptr<std::ofstream>> snapshots_;
  std::unique_ptr<std::ofstream> boundary_;
};

void check_blow_up(std::size_t step, const std::vector<const FieldHistory*>& fields) {
  for (const auto* f : fields) {
    if (!(max_abs(f->cur()) <= blow_up_limit)) {
      throw BlowUpError(step, "numerical blow-up at step " + std::to_string(step) + " (t = " +
                                  format_double(f->time()) + "): |value| exceeded 1e12");
    }
  }
}

std::size_t step_count(const ScenarioConfig& c, const Grid& grid) {
  return static_cast<std::size_t>(std::llround(c.horizon / grid.dt));
}

// Collects table-clamp warnings without repeating them every step.
struct WarningSink {
  std::vector<std::string> raw;
  void drain(std::vector<std::string>& into) {
    if (raw.empty()) return;
    into.push_back(raw.front() + (raw.size() > 1
                                      ? " (and " + std::to_string(raw.size() - 1) + " more)"
                                      : std::string()));
    raw.clear();
  }
};

void run_open_plant(const ScenarioConfig& c, const Grid& grid, Recorder& rec, RunResult& out) {
  const auto& p = c.params;
  const auto u0 = initial(c.u0, c.u0_t, grid);
  WarningSink sink;
  const std::size_t n = u0.value.size() - 1;
  const double f0 = eval_f(c.disturbance, u0.value[n]) + eval_d(c.disturbance, 0.0, &sink.raw);
  auto u = start_field(u0.value, u0.velocity, DirichletLeft{}, TipMassRight{f0}, p, grid);
  EnergyTrace plant(SpaceTag::H1, "plant");
  rec.snapshot(0, {&u});
  const std::size_t steps = step_count(c, grid);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double total = eval_f(c.disturbance, u.cur()[n]) +
                         eval_d(c.disturbance, u.time(), &sink.raw);
    step_interior(u, grid);
    apply_dirichlet_zero_left(u);
    apply_tip_mass_right(u, 0.0, total, p, grid);
    u.rotate(grid.dt);
    check_blow_up(k, {&u});
    plant.push(energy_time(u, grid), energy(SpaceTag::H1, u, tip_momentum(u, p, grid), p, grid));
    rec.snapshot(k, {&u});
  }
  sink.drain(out.warnings);
  out.steps = steps;
  out.t_final = u.time();
  out.energies.push_back(std::move(plant));
}

void run_observer(const ScenarioConfig& c, const Grid& grid, Recorder& rec, RunResult& out) {
  const auto& p = c.params;
  const auto u0 = initial(c.u0, c.u0_t, grid);
  WarningSink sink;
  const std::size_t n = u0.value.size() - 1;
  const double f0 = eval_f(c.disturbance, u0.value[n]) + eval_d(c.disturbance, 0.0, &sink.raw);
  auto s = make_observer_loop(p, grid, u0, initial(c.uhat0, c.uhat0_t, grid), f0);
  EnergyTrace plant(SpaceTag::H1, "plant");
  EnergyTrace closed(SpaceTag::H, "closed");
  EnergyTrace error(SpaceTag::H2, "error");
  rec.snapshot(0, {&s.u, &s.uhat});
  const std::size_t steps = step_count(c, grid);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double total = eval_f(c.disturbance, s.u.cur()[n]) +
                         eval_d(c.disturbance, s.time(), &sink.raw);
    step_observer_loop(s, total);
    check_blow_up(k, {&s.u, &s.uhat});
    const double t = energy_time(s.u, grid);
    const auto b = boundary_ode_states(s);
    const auto err = difference(s.uhat, s.u);
    plant.push(t, energy(SpaceTag::H1, s.u, tip_momentum(s.u, p, grid), p, grid));
    closed.push(t, energy(SpaceTag::H, s.u, b.eta, p, grid));
    error.push(t, energy(SpaceTag::H2, err, tip_momentum(err, p, grid), p, grid));
    rec.boundary(s.time(), b);
    rec.snapshot(k, {&s.u, &s.uhat});
  }
  sink.drain(out.warnings);
  out.steps = steps;
  out.t_final = s.time();
  out.energies.push_back(std::move(plant));
  out.energies.push_back(std::move(closed));
  out.energies.push_back(std::move(error));
}

void run_eso(const ScenarioConfig& c, const Grid& grid, Recorder& rec, RunResult& out) {
  const auto& p = c.params;
  auto s = make_eso_loop(p, grid, c.disturbance, initial(c.u0, c.u0_t, grid),
                         initial(c.v0, c.v0_t, grid), initial(c.q0, c.q0_t, grid));
  EnergyTrace plant(SpaceTag::H1, "plant");
  EnergyTrace v(SpaceTag::Hbb1, "v");
  EnergyTrace q(SpaceTag::Hbb1, "q");
  EnergyTrace psi(SpaceTag::Hbb, "psi_squared");
  WarningSink sink;
  rec.snapshot(0, {&s.u, &s.v, &s.q});
  const std::size_t steps = step_count(c, grid);
  for (std::size_t k = 1; k <= steps; ++k) {
    advance_eso_loop(s, &sink.raw);
    check_blow_up(k, {&s.u, &s.v, &s.q});
    const double t = energy_time(s.u, grid);
    const auto b = boundary_ode_states(s);
    plant.push(t, energy(SpaceTag::H1, s.u, b.eta, p, grid));
    v.push(t, energy(SpaceTag::Hbb1, s.v, 0.0, p, grid));
    q.push(t, energy(SpaceTag::Hbb1, s.q, 0.0, p, grid));
    psi.push(t, b.psi * b.psi);
    rec.boundary(s.time(), b);
    rec.snapshot(k, {&s.u, &s.v, &s.q});
  }
  sink.drain(out.warnings);
  out.steps = steps;
  out.t_final = s.time();
  out.energies.push_back(std::move(plant));
  out.energies.push_back(std::move(v));
  out.energies.push_back(std::move(q));
  out.energies.push_back(std::move(psi));
}

std::optional<double> loop_abscissa(const SystemParams& p, Loop loop, int n_max,
                                    std::vector<std::string>& warnings) {
  try {
    std::vector<Spectrum> spectra;
    for (const auto f : loop_families(loop)) spectra.push_back(compute_spectrum(f, p, n_max));
    return combined_abscissa(spectra);
  } catch (const Error& e) {
    warnings.push_back(std::string("spectral abscissa unavailable: ") + e.what());
    return std::nullopt;
  }
}

void evaluate_thresholds(const ScenarioConfig& c, RunResult& out) {
  const auto& th = c.thresholds;
  if (!th.any()) return;
  const EnergyTrace* plant = out.energy("plant");
  if (plant == nullptr || plant->empty()) {
    out.warnings.push_back("thresholds ignored: no plant energy in this mode");
    return;
  }
  const double e0 = plant->samples().front().value;
  const double ratio = e0 > 0.0 ? plant->samples().back().value / e0 : 0.0;
  auto record = [&](const std::string& name, double measured, double limit, bool ok) {
    out.threshold_report.push_back(name + " = " + format_double(limit) + " measured " +
                                   format_double(measured) + (ok ? " pass" : " FAIL"));
    out.thresholds_passed = out.thresholds_passed && ok;
  };
  if (th.max_final_energy_ratio) {
    record("max_final_energy_ratio", ratio, *th.max_final_energy_ratio,
           ratio <= *th.max_final_energy_ratio);
  }
  if (th.min_final_energy_ratio) {
    record("min_final_energy_ratio", ratio, *th.min_final_energy_ratio,
           ratio >= *th.min_final_energy_ratio);
  }
  if (th.max_fitted_rate) {
    const auto& fit = out.fits.front().fit;
    if (fit) {
      record("max_fitted_rate", fit->rate, *th.max_fitted_rate, fit->rate <= *th.max_fitted_rate);
    } else {
      out.threshold_report.push_back("max_fitted_rate: no fit available FAIL");
      out.thresholds_passed = false;
    }
  }
}

std::string make_summary(const ScenarioConfig& c, const RunResult& r) {
  std::ostringstream s;
  s << "mode = " << to_string(c.mode) << '\n';
  if (r.mode != Mode::spectrum) {
    s << "steps = " << r.steps << '\n';
    s << "t_final = " << format_double(r.t_final) << '\n';
  }
  for (std::size_t i = 0; i < r.energies.size(); ++i) {
    const auto& e = r.energies[i];
    if (e.empty()) continue;
    const std::string k = "energy." + e.name();
    const double e0 = e.samples().front().value;
    const double e1 = e.samples().back().value;
    s << k << ".space = " << to_string(e.tag()) << '\n';
    s << k << ".initial = " << format_double(e0) << '\n';
    s << k << ".final = " << format_double(e1) << '\n';
    s << k << ".max = " << format_double(e.max_between(e.samples().front().t, e.samples().back().t))
      << '\n';
    const auto& fit = r.fits[i].fit;
    s << k << ".fitted_rate = " << (fit ? format_double(fit->rate) : std::string("n/a")) << '\n';
  }
  if (r.spectrum) {
    s << "spectrum.family = " << to_string(r.spectrum->family) << '\n';
    s << "spectrum.eigenvalues = " << r.spectrum->eigenvalues.size() << '\n';
  }
  if (r.abscissa) s << "spectral_abscissa = " << format_double(*r.abscissa) << '\n';
  for (const auto& line : r.threshold_report) s << "threshold." << line << '\n';
  if (c.thresholds.any()) s << "result = " << (r.thresholds_passed ? "pass" : "fail") << '\n';
  for (const auto& w : r.warnings) s << "warning = " << w << '\n';
  return s.str();
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config) {
  return run_scenario(config, config.out_dir);
}

RunResult run_scenario(const ScenarioConfig& c, const std::string& out_dir) {
  {
    Violations violations;
    std::vector<std::string> ignored;
    check_config(c, violations, ignored);
    if (!violations.empty()) throw ConfigError(std::move(violations));
  }
  RunResult out;
  out.mode = c.mode;
  for (auto& w : check_hypotheses(c.params).violations()) out.warnings.push_back(std::move(w));
  const Grid grid = Grid::make(c.n_cells, c.r);

  if (c.mode == Mode::spectrum) {
    auto spectrum = compute_spectrum(c.family, c.params, c.n_max);
    out.abscissa = spectral_abscissa(spectrum);
    for (const auto& w : spectrum.warnings) out.warnings.push_back(w);
    if (!out_dir.empty()) {
      std::error_code ec;
      fs::create_directories(out_dir, ec);
      if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());
      auto csv = open_output(fs::path(out_dir) / ("spectrum_" + to_string(c.family) + ".csv"));
      write_csv(csv, spectrum);
      if (!csv) throw IoError("write failed in " + out_dir);
    }
    out.spectrum = std::move(spectrum);
    if (c.thresholds.any()) out.warnings.push_back("thresholds ignored in spectrum mode");
  } else {
    const bool observer = c.mode == Mode::observer_loop || c.mode == Mode::counterexample_sec3;
    const bool eso = uses_eso(c.mode);
    std::vector<std::string> fields{"u"};
    if (observer) fields.push_back("uhat");
    if (eso) {
      fields.push_back("v");
      fields.push_back("q");
    }
    Recorder rec(out_dir, grid, c.stride, fields, observer || eso);
    if (observer) {
      run_observer(c, grid, rec, out);
      out.abscissa = loop_abscissa(c.params, Loop::observer, c.n_max, out.warnings);
    } else if (eso) {
      run_eso(c, grid, rec, out);
      out.abscissa = loop_abscissa(c.params, Loop::eso, c.n_max, out.warnings);
    } else {
      run_open_plant(c, grid, rec, out);
    }
    rec.finish();
    for (const auto& e : out.energies) {
      NamedFit nf{e.name(), std::nullopt};
      try {
        nf.fit = fit_decay_rate(e, c.fit_tail, c.fit_skip);
      } catch (const NumericalError&) {
      }
      out.fits.push_back(std::move(nf));
    }
    evaluate_thresholds(c, out);
    if (rec.active()) {
      for (const auto& e : out.energies) {
        auto csv = open_output(rec.dir() / ("energy_" + e.name() + ".csv"));
        write_csv(csv, e);
        if (!csv) throw IoError("write failed in " + out_dir);
      }
    }
  }

  out.summary = make_summary(c, out);
  if (!out_dir.empty()) {
    auto cfg = open_output(fs::path(out_dir) / "config.txt");
    cfg << serialize(c);
    auto sum = open_output(fs::path(out_dir) / "summary.txt");
    sum << out.summary;
    if (!cfg || !sum) throw IoError("write failed in " + out_dir);
  }
  return out;
}

std::string report_from_dir(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir);
  double tail = 0.5, skip = 2.0;
  const fs::path cfg = fs::path(dir) / "config.txt";
  if (fs::exists(cfg, ec)) {
    try {
      const auto parsed = load_config(cfg.string());
      tail = parsed.config.fit_tail;
      skip = parsed.config.fit_skip;
    } catch (const Error&) {
      // fall back to the default window
    }
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("energy_", 0) == 0 && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  if (ec) throw IoError("cannot list " + dir + ": " + ec.message());
  if (files.empty()) throw IoError("no energy_*.csv traces in " + dir);
  std::sort(files.begin(), files.end());

  std::ostringstream s;
  s << "fit_tail = " << format_double(tail) << '\n';
  s << "fit_skip = " << format_double(skip) << '\n';
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::string name = path.stem().string().substr(7);
    const auto trace = read_energy_csv(in, name);
    const std::string k = "energy." + name;
    s << k << ".samples = " << trace.size() << '\n';
    if (trace.empty()) continue;
    s << k << ".space = " << to_string(trace.tag()) << '\n';
    s << k << ".initial = " << format_double(trace.samples().front().value) << '\n';
    s << k << ".final = " << format_double(trace.samples().back().value) << '\n';
    try {
      const auto fit = fit_decay_rate(trace, tail, skip);
      s << k << ".fitted_rate = " << format_double(fit.rate) << '\n';
      s << k << ".state_rate = " << format_double(0.5 * fit.rate) << '\n';
    } catch (const NumericalError& e) {
      s << k << ".fitted_rate = n/a (" << e.what() << ")\n";
    }
  }
  return s.str();
}

}  // namespace tipwave
