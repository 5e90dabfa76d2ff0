#pragma once

// Coupled closed loops built from wave_core fields.
//
// Observer loop: plant u with an observer uhat whose Robin end is driven by
// the measured u_x(0, t); the tip is actuated from the observer's boundary
// velocities.
//
// ESO loop: plant u, extended state observer v and the auxiliary field q
// with q(1, t) = v(1, t) - u(1, t). The control cancels the estimated total
// disturbance.
//
// Controls use traces up to t^n only, so every step is explicit.

#include <cstddef>
#include <span>
#include <vector>

#include "tipwave/params.hpp"
#include "tipwave/signals.hpp"
#include "tipwave/wave_core.hpp"

namespace tipwave {

/// Position and velocity of one field at t = 0.
struct InitialData {
  std::vector<double> value;
  std::vector<double> velocity;

  /// All zeros on `grid`.
  static InitialData zero(const Grid& grid);
};

// -- control laws -----------------------------------------------------------

/// U = -alpha D1[uhat(1)] - a D1[uhat_x(1)].
double control_observer(const BoundaryTraces& observer, const SystemParams& params);

/// U = q_x(1) + m D2[q(1)] - alpha (D1[v(1)] - D1[q(1)])
///     - a (D1[v_x(1)] - D1[q_x(1)]).
double control_eso(const BoundaryTraces& v, const BoundaryTraces& q,
                   const SystemParams& params);

struct BoundaryOdeStates {
  double eta = 0.0;
  double psi = 0.0;
};

/// eta = m D1[u(1)] + a (v_x(1) - q_x(1)),  psi = eta - m D1[q(1)].
BoundaryOdeStates boundary_ode_states(const BoundaryTraces& u,
                                      const BoundaryTraces& v,
                                      const BoundaryTraces& q,
                                      const SystemParams& params);

// -- observer loop ------------------------------------------------------------

struct ObserverLoopState {
  SystemParams params;
  Grid grid;
  FieldHistory u;
  FieldHistory uhat;
  BoundaryTraces u_traces;
  BoundaryTraces uhat_traces;
  std::size_t steps = 0;

  double time() const noexcept { return u.time(); }
};

/// Starts both fields at t = 0. `disturbance0` is F(0), used only for the
/// plant's start-up acceleration.
ObserverLoopState make_observer_loop(const SystemParams& params, const Grid& grid,
                                     const InitialData& plant,
                                     const InitialData& observer,
                                     double disturbance0 = 0.0);

/// Advances by one dt with total disturbance F entering the plant tip.
void step_observer_loop(ObserverLoopState& state, double disturbance);

/// (eta, psi) for the observer loop: eta = m u_t(1) + a uhat_x(1) and
/// psi = m uhat_t(1) + a uhat_x(1).
BoundaryOdeStates boundary_ode_states(const ObserverLoopState& state);

// -- ESO loop -----------------------------------------------------------------

struct EsoLoopState {
  SystemParams params;
  Grid grid;
  DisturbanceSpec disturbance;
  FieldHistory u;
  FieldHistory v;
  FieldHistory q;
  BoundaryTraces u_traces;
  BoundaryTraces v_traces;
  BoundaryTraces q_traces;
  std::size_t steps = 0;
  double last_control = 0.0;
  double last_total_disturbance = 0.0;  // f + d applied in the last step

  double time() const noexcept { return u.time(); }
};

/// Starts all three fields at t = 0. Throws ParameterError unless
/// q(1, 0) = v(1, 0) - u(1, 0) and u(0, 0) = 0 hold to 1e-12.
EsoLoopState make_eso_loop(const SystemParams& params, const Grid& grid,
                           const DisturbanceSpec& disturbance,
                           const InitialData& u, const InitialData& v,
                           const InitialData& q);

/// One dt with the given f(u(1, t^n)) and d(t^n).
void step_eso_loop(EsoLoopState& state, double f_value, double d_value);

/// One dt with f and d evaluated from the state's disturbance spec.
void advance_eso_loop(EsoLoopState& state,
                      std::vector<std::string>* warnings = nullptr);

BoundaryOdeStates boundary_ode_states(const EsoLoopState& state);

// -- error systems ----------------------------------------------------------

/// The two error systems of the ESO loop, simulated on their own:
///   vhat = v - u:  Robin (homogeneous) at 0, tip driven by -F
///   qhat = q - vhat: Robin (homogeneous) at 0, Dirichlet zero at 1
/// qhat does not see the disturbance at all.
struct ErrorSystemsState {
  SystemParams params;
  Grid grid;
  FieldHistory vhat;
  FieldHistory qhat;
  std::size_t steps = 0;

  double time() const noexcept { return vhat.time(); }
};

ErrorSystemsState make_error_systems(const SystemParams& params, const Grid& grid,
                                     const InitialData& vhat, const InitialData& qhat,
                                     double total_disturbance0 = 0.0);

/// Advances with the total disturbance F(t^n) = f + d.
void step_error_systems(ErrorSystemsState& state, double total_disturbance);

/// Autonomous qhat alone (Robin at 0, u = 0 at 1).
FieldHistory start_qhat(const InitialData& qhat, const SystemParams& params,
                        const Grid& grid);
void step_qhat(FieldHistory& qhat, const SystemParams& params, const Grid& grid);

/// Largest |value| across the current levels; used for blow-up checks.
double max_abs(std::span<const double> values) noexcept;

}  // namespace tipwave
