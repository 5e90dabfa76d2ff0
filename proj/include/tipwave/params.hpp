#pragma once

#include <string>
#include <vector>

namespace tipwave {

/// Physical and gain constants of the tip-mass wave plant and its
/// observers.
struct SystemParams {
  double m = 5.0;      // tip mass
  double alpha = 2.0;  // velocity gain
  double a = 2.0;      // angular-velocity gain
  double beta = 1.5;   // observer position gain
  double gamma = 1.5;  // observer velocity gain

  bool operator==(const SystemParams&) const = default;
};

/// Throws ParameterError unless every constant is strictly positive and
/// finite.
void validate(const SystemParams& params);

/// The three non-degeneracy conditions used by the stability results.
/// Reported rather than enforced so that failure scenarios stay
/// expressible.
struct HypothesisReport {
  bool gamma_ne_one = true;
  bool m_ne_a = true;
  bool m_ne_a_gamma = true;

  bool all() const { return gamma_ne_one && m_ne_a && m_ne_a_gamma; }
  std::vector<std::string> violations() const;
};

HypothesisReport check_hypotheses(const SystemParams& params);

/// Uniform grid on [0, 1] with Courant ratio r = dt/dx.
struct Grid {
  int n_cells = 100;
  double dx = 0.01;
  double dt = 0.005;
  double r = 0.5;

  /// Throws ParameterError for n_cells < 1 or r outside (0, 1].
  static Grid make(int n_cells, double r);

  int nodes() const { return n_cells + 1; }
  double x(int j) const { return j * dx; }

  bool operator==(const Grid&) const = default;
};

}  // namespace tipwave
