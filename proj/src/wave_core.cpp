#include "tipwave/wave_core.hpp"

#include <string>
#include <utility>

#include "tipwave/errors.hpp"

namespace tipwave {

namespace {

void require_matching(const FieldHistory& field, const Grid& grid) {
  if (field.size() != static_cast<std::size_t>(grid.nodes())) {
    throw StructuralError("field has " + std::to_string(field.size()) +
                          " nodes but grid has " +
                          std::to_string(grid.nodes()));
  }
}

}  // namespace

FieldHistory::FieldHistory(int nodes, double t)
    : prev_(static_cast<std::size_t>(nodes), 0.0),
      cur_(static_cast<std::size_t>(nodes), 0.0),
      next_(static_cast<std::size_t>(nodes), 0.0),
      t_(t) {
  if (nodes < 2) throw StructuralError("a field needs at least two nodes");
}

FieldHistory FieldHistory::from_levels(std::vector<double> prev,
                                       std::vector<double> cur, double t) {
  if (prev.size() != cur.size()) {
    throw StructuralError("time levels have different lengths");
  }
  FieldHistory field(static_cast<int>(cur.size()), t);
  field.prev_ = std::move(prev);
  field.cur_ = std::move(cur);
  return field;
}

void FieldHistory::rotate(double dt) noexcept {
  std::swap(prev_, cur_);
  std::swap(cur_, next_);
  t_ += dt;
}

FieldHistory difference(const FieldHistory& a, const FieldHistory& b) {
  if (a.size() != b.size()) throw StructuralError("fields have different lengths");
  std::vector<double> prev(a.size()), cur(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    prev[j] = a.prev()[j] - b.prev()[j];
    cur[j] = a.cur()[j] - b.cur()[j];
  }
  return FieldHistory::from_levels(std::move(prev), std::move(cur), a.time());
}

void step_interior(FieldHistory& field, const Grid& grid) {
  require_matching(field, grid);
  const auto prev = field.prev();
  const auto cur = field.cur();
  auto next = field.next_mut();
  const double r2 = grid.r * grid.r;
  const std::size_t last = field.size() - 1;
  for (std::size_t j = 1; j < last; ++j) {
    next[j] = 2.0 * cur[j] - prev[j] + r2 * (cur[j + 1] - 2.0 * cur[j] + cur[j - 1]);
  }
}

void apply_dirichlet_zero_left(FieldHistory& field) { field.next_mut()[0] = 0.0; }

void apply_tip_mass_right(FieldHistory& field, double control,
                          double disturbance, const SystemParams& params,
                          const Grid& grid) {
  require_matching(field, grid);
  if (!(params.m > 0.0)) throw ParameterError("tip mass m must be positive");
  const auto prev = field.prev();
  const auto cur = field.cur();
  const std::size_t n = field.size() - 1;
  // Eliminating the ghost value leaves the tip with an extra half cell of
  // string mass: (m + dx/2) u_tt = S - (u_N - u_{N-1}) / dx.
  const double forcing = control + disturbance - (cur[n] - cur[n - 1]) / grid.dx;
  const double second_difference =
      grid.dt * grid.dt * forcing / (params.m + 0.5 * grid.dx);
  field.next_mut()[n] = 2.0 * cur[n] - prev[n] + second_difference;
}

void apply_robin_left(FieldHistory& field, double external_input,
                      const SystemParams& params, const Grid& grid) {
  require_matching(field, grid);
  const auto prev = field.prev();
  const auto cur = field.cur();
  const double r = grid.r;
  const double r2 = r * r;
  const double damping = r * params.gamma;
  // The spring term is averaged over t^{n+1} and t^{n-1}. Taking it at t^n
  // instead gives the Nyquist mode negative boundary energy, which grows
  // once r = 1 leaves the interior no margin to absorb it.
  const double spring = r2 * grid.dx * params.beta;
  const double lead = 1.0 + damping + spring;
  const double rhs = 2.0 * cur[0] - (1.0 - damping + spring) * prev[0] +
                     2.0 * r2 * (cur[1] - cur[0]) - 2.0 * r2 * grid.dx * external_input;
  field.next_mut()[0] = rhs / lead;
}

void apply_dirichlet_trace_right(FieldHistory& field, double value) {
  field.next_mut()[field.size() - 1] = value;
}

std::vector<double> semi_discrete_acceleration(std::span<const double> values,
                                               std::span<const double> velocity,
                                               const LeftBoundary& left,
                                               const RightBoundary& right,
                                               const SystemParams& params,
                                               const Grid& grid) {
  const auto nodes = static_cast<std::size_t>(grid.nodes());
  if (values.size() != nodes || velocity.size() != nodes) {
    throw StructuralError("initial data does not match the grid");
  }
  const double dx = grid.dx;
  const double inv_dx2 = 1.0 / (dx * dx);
  std::vector<double> accel(nodes, 0.0);
  for (std::size_t j = 1; j + 1 < nodes; ++j) {
    accel[j] = (values[j + 1] - 2.0 * values[j] + values[j - 1]) * inv_dx2;
  }

  if (const auto* robin = std::get_if<RobinLeft>(&left)) {
    const double flux =
        params.gamma * velocity[0] + params.beta * values[0] + robin->external_input;
    accel[0] = 2.0 * (values[1] - values[0]) * inv_dx2 - 2.0 * flux / dx;
  }

  const std::size_t n = nodes - 1;
  if (const auto* tip = std::get_if<TipMassRight>(&right)) {
    accel[n] = (tip->input - (values[n] - values[n - 1]) / dx) / (params.m + 0.5 * dx);
  }
  return accel;
}

FieldHistory start_field(std::span<const double> values,
                         std::span<const double> velocity,
                         const LeftBoundary& left, const RightBoundary& right,
                         const SystemParams& params, const Grid& grid,
                         double t0) {
  const auto accel = semi_discrete_acceleration(values, velocity, left, right, params, grid);
  const double dt = grid.dt;
  std::vector<double> prev(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    prev[j] = values[j] - dt * velocity[j] + 0.5 * dt * dt * accel[j];
  }
  if (std::holds_alternative<DirichletLeft>(left)) prev.front() = values.front();
  if (std::holds_alternative<DirichletRight>(right)) prev.back() = values.back();
  return FieldHistory::from_levels(std::move(prev),
                                   std::vector<double>(values.begin(), values.end()), t0);
}

double value_of(const TraceSample& sample, TraceQuantity quantity) noexcept {
  switch (quantity) {
    case TraceQuantity::left_value: return sample.left_value;
    case TraceQuantity::right_value: return sample.right_value;
    case TraceQuantity::left_slope: return sample.left_slope;
    case TraceQuantity::right_slope: return sample.right_slope;
  }
  return 0.0;
}

TraceSample sample_traces(const FieldHistory& field, const Grid& grid) {
  require_matching(field, grid);
  if (grid.n_cells < 3) {
    throw StructuralError("grid too coarse for one-sided boundary slopes");
  }
  const auto u = field.cur();
  const std::size_t n = u.size() - 1;
  TraceSample s;
  s.t = field.time();
  s.left_value = u[0];
  s.right_value = u[n];
  s.left_slope = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * grid.dx);
  s.right_slope = (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * grid.dx);
  return s;
}

void BoundaryTraces::push(const TraceSample& sample) noexcept {
  head_ = (head_ + 1) % depth;
  ring_[head_] = sample;
  if (count_ < depth) ++count_;
}

const TraceSample& BoundaryTraces::at(std::size_t lag) const noexcept {
  return ring_[(head_ + depth - lag) % depth];
}

std::optional<double> backward_time_derivative(const BoundaryTraces& traces,
                                               TraceQuantity quantity,
                                               int order) {
  if (order != 1 && order != 2) {
    throw ParameterError("backward difference order must be 1 or 2");
  }
  if (traces.size() < static_cast<std::size_t>(order) + 1) return std::nullopt;
  const double dt = traces.dt();
  const double s0 = value_of(traces.at(0), quantity);
  const double s1 = value_of(traces.at(1), quantity);
  if (order == 1) return (s0 - s1) / dt;
  const double s2 = value_of(traces.at(2), quantity);
  return (s0 - 2.0 * s1 + s2) / (dt * dt);
}

}  // namespace tipwave
