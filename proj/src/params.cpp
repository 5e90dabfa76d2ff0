#include "tipwave/params.hpp"

#include <cmath>

#include "tipwave/errors.hpp"

namespace tipwave {

namespace {

std::string join_violations(const std::vector<std::string>& items) {
  std::string out = "invalid configuration";
  for (const auto& item : items) {
    out += "\n  - ";
    out += item;
  }
  return out;
}

bool nearly_equal(double x, double y) {
  return std::abs(x - y) <= 1e-12 * std::max(1.0, std::max(std::abs(x), std::abs(y)));
}

void require_positive(double value, const char* name) {
  if (!(std::isfinite(value) && value > 0.0)) {
    throw ParameterError(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error(ErrorCode::config, join_violations(violations)),
      violations_(std::move(violations)) {}

void validate(const SystemParams& params) {
  require_positive(params.m, "m");
  require_positive(params.alpha, "alpha");
  require_positive(params.a, "a");
  require_positive(params.beta, "beta");
  require_positive(params.gamma, "gamma");
}

std::vector<std::string> HypothesisReport::violations() const {
  std::vector<std::string> out;
  if (!gamma_ne_one) out.emplace_back("gamma = 1 violates stability hypothesis");
  if (!m_ne_a) out.emplace_back("m = a violates Theorem hypothesis");
  if (!m_ne_a_gamma) out.emplace_back("m = a*gamma violates Theorem hypothesis");
  return out;
}

HypothesisReport check_hypotheses(const SystemParams& params) {
  HypothesisReport report;
  report.gamma_ne_one = !nearly_equal(params.gamma, 1.0);
  report.m_ne_a = !nearly_equal(params.m, params.a);
  report.m_ne_a_gamma = !nearly_equal(params.m, params.a * params.gamma);
  return report;
}

Grid Grid::make(int n_cells, double r) {
  if (n_cells < 1) throw ParameterError("n_cells must be at least 1");
  if (!(r > 0.0 && r <= 1.0)) {
    throw ParameterError("Courant ratio r must lie in (0, 1]");
  }
  Grid grid;
  grid.n_cells = n_cells;
  grid.dx = 1.0 / n_cells;
  grid.r = r;
  grid.dt = r * grid.dx;
  return grid;
}

}  // namespace tipwave
