#include "tipwave/signals.hpp"

#include <algorithm>
#include <cmath>

#include "tipwave/errors.hpp"

namespace tipwave {

void validate(const DisturbanceSpec& spec) {
  if (spec.d_kind != DisturbanceKind::table) return;
  if (spec.table.size() < 2) {
    throw ParameterError("disturbance table needs at least two points");
  }
  for (std::size_t i = 1; i < spec.table.size(); ++i) {
    if (!(spec.table[i].first > spec.table[i - 1].first)) {
      throw ParameterError("disturbance table times must be strictly increasing");
    }
  }
}

double eval_d(const DisturbanceSpec& spec, double t,
              std::vector<std::string>* warnings) {
  switch (spec.d_kind) {
    case DisturbanceKind::zero:
      return 0.0;
    case DisturbanceKind::constant:
      return spec.constant;
    case DisturbanceKind::cosine:
      return spec.amplitude * std::cos(spec.frequency * t);
    case DisturbanceKind::exp_decay:
      return spec.amplitude * std::exp(-spec.rate * t);
    case DisturbanceKind::table: {
      const auto& tab = spec.table;
      if (tab.empty()) return 0.0;
      if (t <= tab.front().first || t >= tab.back().first) {
        const bool outside = t < tab.front().first || t > tab.back().first;
        if (outside && warnings != nullptr) {
          warnings->push_back("d(t) evaluated outside its table at t = " +
                              std::to_string(t) + "; clamped");
        }
        return t <= tab.front().first ? tab.front().second : tab.back().second;
      }
      const auto upper = std::upper_bound(
          tab.begin(), tab.end(), t,
          [](double value, const auto& point) { return value < point.first; });
      const auto lower = upper - 1;
      const double w = (t - lower->first) / (upper->first - lower->first);
      return (1.0 - w) * lower->second + w * upper->second;
    }
  }
  return 0.0;
}

double eval_f(const DisturbanceSpec& spec, double tip_value) {
  switch (spec.f_kind) {
    case UncertaintyKind::zero: return 0.0;
    case UncertaintyKind::sin_of_tip: return std::sin(tip_value);
    case UncertaintyKind::lipschitz_linear: return spec.f_gain * tip_value;
  }
  return 0.0;
}

std::string to_string(DisturbanceKind kind) {
  switch (kind) {
    case DisturbanceKind::zero: return "zero";
    case DisturbanceKind::constant: return "constant";
    case DisturbanceKind::cosine: return "cosine";
    case DisturbanceKind::exp_decay: return "exp_decay";
    case DisturbanceKind::table: return "table";
  }
  return "zero";
}

std::string to_string(UncertaintyKind kind) {
  switch (kind) {
    case UncertaintyKind::zero: return "zero";
    case UncertaintyKind::sin_of_tip: return "sin_of_tip";
    case UncertaintyKind::lipschitz_linear: return "lipschitz_linear";
  }
  return "zero";
}

}  // namespace tipwave
