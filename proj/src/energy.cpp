#include "tipwave/energy.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "tipwave/errors.hpp"
#include "tipwave/format.hpp"

namespace tipwave {

std::string to_string(SpaceTag tag) {
  switch (tag) {
    case SpaceTag::H1: return "H1";
    case SpaceTag::H2: return "H2";
    case SpaceTag::H: return "H";
    case SpaceTag::Hbb: return "Hbb";
    case SpaceTag::Hbb1: return "Hbb1";
  }
  return "Hbb";
}

SpaceTag parse_space_tag(std::string_view name) {
  if (name == "H1") return SpaceTag::H1;
  if (name == "H2") return SpaceTag::H2;
  if (name == "H") return SpaceTag::H;
  if (name == "Hbb") return SpaceTag::Hbb;
  if (name == "Hbb1") return SpaceTag::Hbb1;
  throw ParameterError("unknown energy space tag '" + std::string(name) + "'");
}

double energy(SpaceTag tag, const FieldHistory& field, double eta,
              const SystemParams& params, const Grid& grid) {
  const auto prev = field.prev();
  const auto cur = field.cur();
  const std::size_t nodes = cur.size();
  if (nodes != static_cast<std::size_t>(grid.nodes())) {
    throw StructuralError("field does not match grid");
  }
  if (nodes < 3) throw StructuralError("energy needs at least three nodes");

  std::vector<double> f(nodes);
  for (std::size_t j = 0; j < nodes; ++j) f[j] = 0.5 * (prev[j] + cur[j]);

  const double dx = grid.dx;
  const double inv_dt = 1.0 / grid.dt;
  const std::size_t n = nodes - 1;
  auto slope = [&](std::size_t j) {
    if (j == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
    if (j == n) return (3.0 * f[n] - 4.0 * f[n - 1] + f[n - 2]) / (2.0 * dx);
    return (f[j + 1] - f[j - 1]) / (2.0 * dx);
  };

  double integral = 0.0;
  for (std::size_t j = 0; j < nodes; ++j) {
    const double fx = slope(j);
    const double g = (cur[j] - prev[j]) * inv_dt;
    const double weight = (j == 0 || j == n) ? 0.5 * dx : dx;
    integral += weight * (fx * fx + g * g);
  }

  switch (tag) {
    case SpaceTag::H1:
      return integral + eta * eta / params.m;
    case SpaceTag::H2:
      return integral + params.beta * f[0] * f[0] + eta * eta / params.m;
    case SpaceTag::H:
      return integral + eta * eta / (params.m + params.alpha * params.a);
    case SpaceTag::Hbb:
      return integral;
    case SpaceTag::Hbb1:
      return integral + params.beta * f[0] * f[0];
  }
  throw ParameterError("unknown energy space tag");
}

double tip_momentum(const FieldHistory& field, const SystemParams& params,
                    const Grid& grid) {
  const std::size_t n = field.size() - 1;
  return params.m * (field.cur()[n] - field.prev()[n]) / grid.dt;
}

void EnergyTrace::push(double t, double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw NumericalError("energy sample must be finite and non-negative");
  }
  if (!samples_.empty() && !(t > samples_.back().t)) {
    throw StructuralError("energy trace times must be strictly increasing");
  }
  samples_.push_back({t, value});
}

double EnergyTrace::at_time(double t) const {
  if (samples_.empty()) throw NumericalError("empty energy trace");
  if (t <= samples_.front().t) return samples_.front().value;
  if (t >= samples_.back().t) return samples_.back().value;
  const auto upper = std::upper_bound(
      samples_.begin(), samples_.end(), t,
      [](double value, const EnergySample& s) { return value < s.t; });
  const auto lower = upper - 1;
  const double w = (t - lower->t) / (upper->t - lower->t);
  return (1.0 - w) * lower->value + w * upper->value;
}

double EnergyTrace::max_between(double t0, double t1) const {
  double best = 0.0;
  bool any = false;
  for (const auto& s : samples_) {
    if (s.t < t0 || s.t > t1) continue;
    best = any ? std::max(best, s.value) : s.value;
    any = true;
  }
  if (!any) throw NumericalError("no energy samples in requested interval");
  return best;
}

namespace {

DecayFit least_squares_log(const std::vector<EnergySample>& samples,
                           std::size_t first, std::size_t last) {
  double sum_t = 0.0, sum_y = 0.0, sum_tt = 0.0, sum_ty = 0.0;
  std::size_t count = 0;
  for (std::size_t i = first; i < last; ++i) {
    const auto& s = samples[i];
    if (!(s.value >= 1e-300)) continue;
    const double y = std::log(s.value);
    sum_t += s.t;
    sum_y += y;
    sum_tt += s.t * s.t;
    sum_ty += s.t * y;
    ++count;
  }
  if (count == 0) throw NumericalError("decay fit: every sample was excluded");
  if (count < 20) {
    throw NumericalError("decay fit: fewer than 20 usable samples in window");
  }
  const double nn = static_cast<double>(count);
  const double mean_t = sum_t / nn;
  const double mean_y = sum_y / nn;
  const double stt = sum_tt - nn * mean_t * mean_t;
  const double sty = sum_ty - nn * mean_t * mean_y;
  if (!(stt > 0.0)) throw NumericalError("decay fit: degenerate time window");
  DecayFit fit;
  fit.rate = sty / stt;
  fit.log_amplitude = mean_y - fit.rate * mean_t;
  fit.samples = count;
  return fit;
}

}  // namespace

DecayFit fit_decay_rate(const EnergyTrace& trace, double tail_fraction,
                        double skip_time) {
  const auto& samples = trace.samples();
  if (samples.empty()) throw NumericalError("decay fit: empty trace");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw ParameterError("tail fraction must lie in (0, 1]");
  }
  const std::size_t total = samples.size();
  const auto tail = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(total)));
  std::size_t first = total - std::min(total, tail);
  const double t_skip = samples.front().t + skip_time;
  while (first < total && samples[first].t < t_skip) ++first;
  return least_squares_log(samples, first, total);
}

DecayFit fit_decay_rate_between(const EnergyTrace& trace, double t0, double t1) {
  const auto& samples = trace.samples();
  std::size_t first = 0;
  while (first < samples.size() && samples[first].t < t0) ++first;
  std::size_t last = first;
  while (last < samples.size() && samples[last].t <= t1) ++last;
  return least_squares_log(samples, first, last);
}

EnergyTrace peak_envelope(const EnergyTrace& trace, double period) {
  if (!(period > 0.0)) throw ParameterError("envelope period must be positive");
  EnergyTrace out(trace.tag(), trace.name() + "_envelope");
  const auto& samples = trace.samples();
  if (samples.empty()) return out;
  const double t0 = samples.front().t;
  std::size_t i = 0;
  while (i < samples.size()) {
    const auto block = std::floor((samples[i].t - t0) / period);
    EnergySample best = samples[i];
    std::size_t j = i;
    while (j < samples.size() && std::floor((samples[j].t - t0) / period) == block) {
      if (samples[j].value > best.value) best = samples[j];
      ++j;
    }
    out.push(best.t, best.value);
    i = j;
  }
  return out;
}

void write_csv(std::ostream& out, const EnergyTrace& trace) {
  out << "t,E,tag\n";
  const auto tag = to_string(trace.tag());
  for (const auto& s : trace.samples()) {
    out << format_double(s.t) << ',' << format_double(s.value) << ',' << tag << '\n';
  }
}

EnergyTrace read_energy_csv(std::istream& in, std::string name) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "t,E,tag") {
    throw IoError("energy CSV: missing header 't,E,tag'");
  }
  EnergyTrace trace;
  bool first = true;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cols = split(trim(line), ',');
    if (cols.size() != 3) {
      throw IoError("energy CSV line " + std::to_string(line_no) + ": expected 3 columns");
    }
    const auto t = parse_double(cols[0]);
    const auto e = parse_double(cols[1]);
    if (!t || !e) {
      throw IoError("energy CSV line " + std::to_string(line_no) + ": bad number");
    }
    if (first) {
      trace = EnergyTrace(parse_space_tag(trim(cols[2])), name);
      first = false;
    }
    trace.push(*t, *e);
  }
  if (first) trace = EnergyTrace(SpaceTag::Hbb, std::move(name));
  return trace;
}

}  // namespace tipwave
