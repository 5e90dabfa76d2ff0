#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tipwave/params.hpp"
#include "tipwave/wave_core.hpp"

namespace tipwave {

/// Energy norms of the state spaces:
///   H1   int |f'|^2 + |g|^2 + |eta|^2 / m
///   H2   int |f'|^2 + |g|^2 + beta |f(0)|^2 + |eta|^2 / m
///   H    int |f'|^2 + |g|^2 + |eta|^2 / (m + alpha a)
///   Hbb  int |f'|^2 + |g|^2
///   Hbb1 int |f'|^2 + |g|^2 + beta |f(0)|^2
enum class SpaceTag { H1, H2, H, Hbb, Hbb1 };

std::string to_string(SpaceTag tag);
/// Throws ParameterError for unknown names.
SpaceTag parse_space_tag(std::string_view name);

/// Squared norm of the field state using its two most recent levels.
///
/// The velocity g is the backward difference (cur - prev)/dt; the
/// displacement entering f' and f(0) is the average of the two levels, so
/// the result is a second-order approximation at time t - dt/2 (see
/// energy_time). f' uses centred differences inside and second-order
/// one-sided differences at the ends; integrals use the trapezoidal rule.
double energy(SpaceTag tag, const FieldHistory& field, double eta,
              const SystemParams& params, const Grid& grid);

/// Time at which energy() is centred.
inline double energy_time(const FieldHistory& field, const Grid& grid) {
  return field.time() - 0.5 * grid.dt;
}

/// m * (u_N^n - u_N^{n-1}) / dt, the natural tip state of H1.
double tip_momentum(const FieldHistory& field, const SystemParams& params,
                    const Grid& grid);

struct EnergySample {
  double t = 0.0;
  double value = 0.0;
};

/// Time series of a named energy. push() enforces value >= 0 and strictly
/// increasing t.
class EnergyTrace {
 public:
  EnergyTrace() = default;
  EnergyTrace(SpaceTag tag, std::string name)
      : tag_(tag), name_(std::move(name)) {}

  void push(double t, double value);

  SpaceTag tag() const noexcept { return tag_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<EnergySample>& samples() const noexcept { return samples_; }
  bool empty() const noexcept { return samples_.empty(); }
  std::size_t size() const noexcept { return samples_.size(); }

  /// Linear interpolation; clamps outside the sampled range.
  double at_time(double t) const;
  /// Largest value with t0 <= t <= t1.
  double max_between(double t0, double t1) const;

 private:
  SpaceTag tag_ = SpaceTag::Hbb;
  std::string name_;
  std::vector<EnergySample> samples_;
};

struct DecayFit {
  double rate = 0.0;           // slope of ln E against t
  double log_amplitude = 0.0;  // intercept
  std::size_t samples = 0;     // points used
};

/// Least-squares line through (t, ln E) over the trailing `tail_fraction`
/// of the samples, ignoring samples before t_first + skip_time and values
/// below 1e-300. Energies are quadratic in the state, so the state decays
/// at rate / 2. Throws NumericalError when fewer than 20 samples remain.
DecayFit fit_decay_rate(const EnergyTrace& trace, double tail_fraction = 0.5,
                        double skip_time = 0.0);

/// Same fit restricted to t0 <= t <= t1.
DecayFit fit_decay_rate_between(const EnergyTrace& trace, double t0, double t1);

/// Per-block maxima over consecutive blocks of length `period`, one sample
/// per block located at the block's argmax. Used to fit oscillating
/// signals through their envelope.
EnergyTrace peak_envelope(const EnergyTrace& trace, double period);

/// CSV with header `t,E,tag`.
void write_csv(std::ostream& out, const EnergyTrace& trace);
/// Reads what write_csv produced. Throws IoError on malformed input.
EnergyTrace read_energy_csv(std::istream& in, std::string name);

}  // namespace tipwave
