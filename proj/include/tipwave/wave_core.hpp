#pragma once

// Uniform-grid leapfrog representation of a single scalar field obeying
// u_tt = u_xx on [0, 1], together with the boundary closures used by the
// plant, the observers and the disturbance estimator.
//
// A step is assembled by the caller:
//
//   step_interior(field, grid);
//   apply_<left condition>(field, ...);
//   apply_<right condition>(field, ...);
//   field.rotate(grid.dt);
//
// Neumann-type closures (tip mass, Robin) eliminate a ghost node between
// the interior stencil at the boundary node and the centred boundary
// relation, so both hold simultaneously.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "tipwave/params.hpp"

namespace tipwave {

/// Three time levels of one field: t - dt, t, and the level being built.
class FieldHistory {
 public:
  explicit FieldHistory(int nodes, double t = 0.0);

  /// Levels given explicitly (prev at t - dt, cur at t). Throws
  /// StructuralError if lengths differ.
  static FieldHistory from_levels(std::vector<double> prev,
                                  std::vector<double> cur, double t);

  std::size_t size() const noexcept { return cur_.size(); }
  double time() const noexcept { return t_; }

  std::span<const double> prev() const noexcept { return prev_; }
  std::span<const double> cur() const noexcept { return cur_; }
  std::span<const double> next() const noexcept { return next_; }

  std::span<double> prev_mut() noexcept { return prev_; }
  std::span<double> cur_mut() noexcept { return cur_; }
  std::span<double> next_mut() noexcept { return next_; }

  /// prev <- cur, cur <- next, t += dt. The old prev buffer becomes the
  /// scratch level.
  void rotate(double dt) noexcept;

 private:
  std::vector<double> prev_;
  std::vector<double> cur_;
  std::vector<double> next_;
  double t_;
};

/// Level-wise a - b (prev and cur), timed like `a`.
FieldHistory difference(const FieldHistory& a, const FieldHistory& b);

// -- interior -----------------------------------------------------------

/// next_j = 2 cur_j - prev_j + r^2 (cur_{j+1} - 2 cur_j + cur_{j-1}) for
/// j = 1..N-1. Boundary nodes of `next` are left untouched.
void step_interior(FieldHistory& field, const Grid& grid);

// -- boundary closures ----------------------------------------------------

/// u(0, t) = 0.
void apply_dirichlet_zero_left(FieldHistory& field);

/// Tip mass at x = 1: u_x(1) + m u_tt(1) = control + disturbance, with the
/// forcing taken at the current time level.
void apply_tip_mass_right(FieldHistory& field, double control,
                          double disturbance, const SystemParams& params,
                          const Grid& grid);

/// Robin condition v_x(0) = gamma v_t(0) + beta v(0) + external_input with
/// a centred time derivative and v(0) averaged over the outer levels;
/// solved in closed form for the new value.
void apply_robin_left(FieldHistory& field, double external_input,
                      const SystemParams& params, const Grid& grid);

/// Pins the right node of the new level to `value`.
void apply_dirichlet_trace_right(FieldHistory& field, double value);

// -- start-up ---------------------------------------------------------------

struct DirichletLeft {};
struct RobinLeft {
  double external_input = 0.0;
};
struct TipMassRight {
  double input = 0.0;  // control + disturbance at t = 0
};
struct DirichletRight {};

using LeftBoundary = std::variant<DirichletLeft, RobinLeft>;
using RightBoundary = std::variant<TipMassRight, DirichletRight>;

/// Acceleration of the semi-discrete system (continuous in time) at the
/// given state. Pinned nodes get zero.
std::vector<double> semi_discrete_acceleration(std::span<const double> values,
                                               std::span<const double> velocity,
                                               const LeftBoundary& left,
                                               const RightBoundary& right,
                                               const SystemParams& params,
                                               const Grid& grid);

/// Builds a history at t0 whose previous level is the second-order Taylor
/// back-step u - dt v + dt^2/2 a.
FieldHistory start_field(std::span<const double> values,
                         std::span<const double> velocity,
                         const LeftBoundary& left, const RightBoundary& right,
                         const SystemParams& params, const Grid& grid,
                         double t0 = 0.0);

// -- boundary traces -------------------------------------------------------

struct TraceSample {
  double t = 0.0;
  double left_value = 0.0;
  double right_value = 0.0;
  double left_slope = 0.0;   // u_x(0), one-sided second order
  double right_slope = 0.0;  // u_x(1), one-sided second order
};

enum class TraceQuantity { left_value, right_value, left_slope, right_slope };

double value_of(const TraceSample& sample, TraceQuantity quantity) noexcept;

/// Samples the current level. Throws StructuralError for n_cells < 3.
TraceSample sample_traces(const FieldHistory& field, const Grid& grid);

/// Ring buffer of the three most recent trace samples.
class BoundaryTraces {
 public:
  static constexpr std::size_t depth = 3;

  explicit BoundaryTraces(double dt) : dt_(dt) {}

  void push(const TraceSample& sample) noexcept;
  void clear() noexcept { count_ = 0; }

  std::size_t size() const noexcept { return count_; }
  double dt() const noexcept { return dt_; }

  /// lag 0 is the newest sample. Precondition: lag < size().
  const TraceSample& at(std::size_t lag) const noexcept;
  const TraceSample& latest() const noexcept { return at(0); }

 private:
  std::array<TraceSample, depth> ring_{};
  std::size_t head_ = 0;  // slot of the newest sample
  std::size_t count_ = 0;
  double dt_;
};

/// Backward differences of a traced quantity. std::nullopt while the
/// buffer holds fewer than order + 1 samples (warm-up).
std::optional<double> backward_time_derivative(const BoundaryTraces& traces,
                                               TraceQuantity quantity,
                                               int order);

/// Warm-up rule used by the control laws: missing history counts as zero.
inline double derivative_or_zero(const BoundaryTraces& traces,
                                 TraceQuantity quantity, int order) {
  return backward_time_derivative(traces, quantity, order).value_or(0.0);
}

}  // namespace tipwave
