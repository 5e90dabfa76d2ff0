#include "tipwave/systems.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tipwave/errors.hpp"

namespace tipwave {

namespace {

using Q = TraceQuantity;

void require_on_grid(const InitialData& data, const Grid& grid, const char* what) {
  const auto nodes = static_cast<std::size_t>(grid.nodes());
  if (data.value.size() != nodes || data.velocity.size() != nodes) {
    throw StructuralError(std::string(what) + ": initial data has " +
                          std::to_string(data.value.size()) + " nodes, grid has " +
                          std::to_string(nodes));
  }
}

// Traces of an initial profile before any field exists.
TraceSample traces_of(const std::vector<double>& values, const Grid& grid) {
  return sample_traces(FieldHistory::from_levels(values, values, 0.0), grid);
}

}  // namespace

InitialData InitialData::zero(const Grid& grid) {
  const auto nodes = static_cast<std::size_t>(grid.nodes());
  return {std::vector<double>(nodes, 0.0), std::vector<double>(nodes, 0.0)};
}

double control_observer(const BoundaryTraces& observer, const SystemParams& params) {
  return -params.alpha * derivative_or_zero(observer, Q::right_value, 1) -
         params.a * derivative_or_zero(observer, Q::right_slope, 1);
}

double control_eso(const BoundaryTraces& v, const BoundaryTraces& q,
                   const SystemParams& params) {
  const double qx = q.size() > 0 ? q.latest().right_slope : 0.0;
  const double q_tt = derivative_or_zero(q, Q::right_value, 2);
  const double v_t = derivative_or_zero(v, Q::right_value, 1);
  const double q_t = derivative_or_zero(q, Q::right_value, 1);
  const double v_xt = derivative_or_zero(v, Q::right_slope, 1);
  const double q_xt = derivative_or_zero(q, Q::right_slope, 1);
  return qx + params.m * q_tt - params.alpha * (v_t - q_t) - params.a * (v_xt - q_xt);
}

BoundaryOdeStates boundary_ode_states(const BoundaryTraces& u,
                                      const BoundaryTraces& v,
                                      const BoundaryTraces& q,
                                      const SystemParams& params) {
  const double vx = v.size() > 0 ? v.latest().right_slope : 0.0;
  const double qx = q.size() > 0 ? q.latest().right_slope : 0.0;
  BoundaryOdeStates s;
  s.eta = params.m * derivative_or_zero(u, Q::right_value, 1) + params.a * (vx - qx);
  s.psi = s.eta - params.m * derivative_or_zero(q, Q::right_value, 1);
  return s;
}

// -- observer loop ------------------------------------------------------------

ObserverLoopState make_observer_loop(const SystemParams& params, const Grid& grid,
                                     const InitialData& plant,
                                     const InitialData& observer,
                                     double disturbance0) {
  validate(params);
  require_on_grid(plant, grid, "plant");
  require_on_grid(observer, grid, "observer");
  // With a single trace sample the control is zero by the warm-up rule.
  const double ux0 = traces_of(plant.value, grid).left_slope;
  ObserverLoopState s{
      params,
      grid,
      start_field(plant.value, plant.velocity, DirichletLeft{},
                  TipMassRight{disturbance0}, params, grid),
      start_field(observer.value, observer.velocity, RobinLeft{ux0},
                  TipMassRight{0.0}, params, grid),
      BoundaryTraces(grid.dt),
      BoundaryTraces(grid.dt),
  };
  s.u_traces.push(sample_traces(s.u, grid));
  s.uhat_traces.push(sample_traces(s.uhat, grid));
  return s;
}

void step_observer_loop(ObserverLoopState& s, double disturbance) {
  const double control = control_observer(s.uhat_traces, s.params);
  const double ux0 = s.u_traces.latest().left_slope;

  step_interior(s.u, s.grid);
  apply_dirichlet_zero_left(s.u);
  apply_tip_mass_right(s.u, control, disturbance, s.params, s.grid);

  step_interior(s.uhat, s.grid);
  apply_robin_left(s.uhat, ux0, s.params, s.grid);
  apply_tip_mass_right(s.uhat, control, 0.0, s.params, s.grid);

  s.u.rotate(s.grid.dt);
  s.uhat.rotate(s.grid.dt);
  s.u_traces.push(sample_traces(s.u, s.grid));
  s.uhat_traces.push(sample_traces(s.uhat, s.grid));
  ++s.steps;
}

BoundaryOdeStates boundary_ode_states(const ObserverLoopState& s) {
  const double uhat_x = s.uhat_traces.latest().right_slope;
  BoundaryOdeStates out;
  out.eta = s.params.m * derivative_or_zero(s.u_traces, Q::right_value, 1) +
            s.params.a * uhat_x;
  out.psi = s.params.m * derivative_or_zero(s.uhat_traces, Q::right_value, 1) +
            s.params.a * uhat_x;
  return out;
}

// -- ESO loop -----------------------------------------------------------------

EsoLoopState make_eso_loop(const SystemParams& params, const Grid& grid,
                           const DisturbanceSpec& disturbance,
                           const InitialData& u, const InitialData& v,
                           const InitialData& q) {
  validate(params);
  validate(disturbance);
  require_on_grid(u, grid, "u");
  require_on_grid(v, grid, "v");
  require_on_grid(q, grid, "q");
  const std::size_t n = u.value.size() - 1;
  const double mismatch = q.value[n] - (v.value[n] - u.value[n]);
  if (std::abs(mismatch) > 1e-12) {
    throw ParameterError("initial data violates q(1) = v(1) - u(1) (off by " +
                         std::to_string(mismatch) + ")");
  }
  if (std::abs(u.value[0]) > 1e-12) {
    throw ParameterError("initial plant data violates u(0) = 0");
  }

  const TraceSample u0 = traces_of(u.value, grid);
  BoundaryTraces v_warm(grid.dt), q_warm(grid.dt);
  v_warm.push(traces_of(v.value, grid));
  q_warm.push(traces_of(q.value, grid));
  const double control0 = control_eso(v_warm, q_warm, params);
  const double total0 = eval_f(disturbance, u.value[n]) + eval_d(disturbance, 0.0);

  EsoLoopState s{
      params,
      grid,
      disturbance,
      start_field(u.value, u.velocity, DirichletLeft{}, TipMassRight{control0 + total0},
                  params, grid),
      start_field(v.value, v.velocity, RobinLeft{u0.left_slope}, TipMassRight{control0},
                  params, grid),
      start_field(q.value, q.velocity, RobinLeft{0.0}, DirichletRight{}, params, grid),
      BoundaryTraces(grid.dt),
      BoundaryTraces(grid.dt),
      BoundaryTraces(grid.dt),
  };
  // The Taylor back-steps of u and v do not respect the coupling exactly;
  // pin q's previous level so the identity holds at t = -dt as well.
  s.q.prev_mut()[n] = s.v.prev()[n] - s.u.prev()[n];
  s.u_traces.push(u0);
  s.v_traces.push(sample_traces(s.v, grid));
  s.q_traces.push(sample_traces(s.q, grid));
  return s;
}

void step_eso_loop(EsoLoopState& s, double f_value, double d_value) {
  const double control = control_eso(s.v_traces, s.q_traces, s.params);
  const double ux0 = s.u_traces.latest().left_slope;
  const double total = f_value + d_value;

  step_interior(s.u, s.grid);
  apply_dirichlet_zero_left(s.u);
  apply_tip_mass_right(s.u, control, total, s.params, s.grid);

  step_interior(s.v, s.grid);
  apply_robin_left(s.v, ux0, s.params, s.grid);
  apply_tip_mass_right(s.v, control, 0.0, s.params, s.grid);

  step_interior(s.q, s.grid);
  apply_robin_left(s.q, 0.0, s.params, s.grid);
  const std::size_t n = s.q.size() - 1;
  apply_dirichlet_trace_right(s.q, s.v.next()[n] - s.u.next()[n]);

  s.u.rotate(s.grid.dt);
  s.v.rotate(s.grid.dt);
  s.q.rotate(s.grid.dt);
  s.u_traces.push(sample_traces(s.u, s.grid));
  s.v_traces.push(sample_traces(s.v, s.grid));
  s.q_traces.push(sample_traces(s.q, s.grid));
  s.last_control = control;
  s.last_total_disturbance = total;
  ++s.steps;
}

void advance_eso_loop(EsoLoopState& s, std::vector<std::string>* warnings) {
  const double tip = s.u.cur()[s.u.size() - 1];
  step_eso_loop(s, eval_f(s.disturbance, tip), eval_d(s.disturbance, s.time(), warnings));
}

BoundaryOdeStates boundary_ode_states(const EsoLoopState& s) {
  return boundary_ode_states(s.u_traces, s.v_traces, s.q_traces, s.params);
}

// -- error systems ----------------------------------------------------------

FieldHistory start_qhat(const InitialData& qhat, const SystemParams& params,
                        const Grid& grid) {
  require_on_grid(qhat, grid, "qhat");
  return start_field(qhat.value, qhat.velocity, RobinLeft{0.0}, DirichletRight{},
                     params, grid);
}

void step_qhat(FieldHistory& qhat, const SystemParams& params, const Grid& grid) {
  step_interior(qhat, grid);
  apply_robin_left(qhat, 0.0, params, grid);
  apply_dirichlet_trace_right(qhat, 0.0);
  qhat.rotate(grid.dt);
}

ErrorSystemsState make_error_systems(const SystemParams& params, const Grid& grid,
                                     const InitialData& vhat, const InitialData& qhat,
                                     double total_disturbance0) {
  validate(params);
  require_on_grid(vhat, grid, "vhat");
  return ErrorSystemsState{
      params,
      grid,
      start_field(vhat.value, vhat.velocity, RobinLeft{0.0},
                  TipMassRight{-total_disturbance0}, params, grid),
      start_qhat(qhat, params, grid),
  };
}

void step_error_systems(ErrorSystemsState& s, double total_disturbance) {
  step_interior(s.vhat, s.grid);
  apply_robin_left(s.vhat, 0.0, s.params, s.grid);
  apply_tip_mass_right(s.vhat, 0.0, -total_disturbance, s.params, s.grid);
  s.vhat.rotate(s.grid.dt);
  step_qhat(s.qhat, s.params, s.grid);
  ++s.steps;
}

double max_abs(std::span<const double> values) noexcept {
  double best = 0.0;
  for (const double v : values) {
    const double a = std::abs(v);
    if (std::isnan(a)) return a;
    best = std::max(best, a);
  }
  return best;
}

}  // namespace tipwave
