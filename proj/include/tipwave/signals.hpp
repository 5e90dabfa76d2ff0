#pragma once

#include <string>
#include <utility>
#include <vector>

namespace tipwave {

enum class DisturbanceKind { zero, constant, cosine, exp_decay, table };
enum class UncertaintyKind { zero, sin_of_tip, lipschitz_linear };

/// Declarative description of the total disturbance F = f(u) + d(t).
///
/// d(t):  zero | constant(c) | amplitude*cos(frequency*t)
///        | amplitude*exp(-rate*t) | piecewise-linear table on [t0, tn]
/// f(u):  zero | sin(u(1,t)) | k*u(1,t)
struct DisturbanceSpec {
  DisturbanceKind d_kind = DisturbanceKind::zero;
  double constant = 0.0;
  double amplitude = 1.0;
  double frequency = 1.0;
  double rate = 1.0;
  std::vector<std::pair<double, double>> table;  // (t, d), t increasing

  UncertaintyKind f_kind = UncertaintyKind::zero;
  double f_gain = 1.0;  // k for lipschitz_linear

  bool operator==(const DisturbanceSpec&) const = default;
};

/// Throws ParameterError on malformed tables (fewer than two points or
/// non-increasing abscissae).
void validate(const DisturbanceSpec& spec);

/// External disturbance at time t. Table lookups outside the tabulated
/// range clamp to the end values and, when `warnings` is given, append a
/// message.
double eval_d(const DisturbanceSpec& spec, double t,
              std::vector<std::string>* warnings = nullptr);

/// Internal uncertainty evaluated on the tip displacement u(1, t).
double eval_f(const DisturbanceSpec& spec, double tip_value);

std::string to_string(DisturbanceKind kind);
std::string to_string(UncertaintyKind kind);

}  // namespace tipwave
