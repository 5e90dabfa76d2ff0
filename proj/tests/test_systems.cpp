#include <doctest.h>

#include <cmath>
#include <vector>

#include "tipwave/energy.hpp"
#include "tipwave/errors.hpp"
#include "tipwave/systems.hpp"

using namespace tipwave;

namespace {

const SystemParams ref_gains{5.0, 2.0, 2.0, 1.5, 1.5};
constexpr double dt = 0.005;

// Three samples at t = 0, dt, 2 dt with the right-end trace set by `fill`.
template <class Fill>
BoundaryTraces traces(Fill fill) {
  BoundaryTraces tr(dt);
  for (int k = 0; k < 3; ++k) {
    TraceSample s;
    s.t = k * dt;
    fill(s);
    tr.push(s);
  }
  return tr;
}

InitialData poly(const Grid& g, double (*f)(double)) {
  auto d = InitialData::zero(g);
  for (int j = 0; j < g.nodes(); ++j) d.value[static_cast<std::size_t>(j)] = f(g.x(j));
  return d;
}

}  // namespace

TEST_CASE("observer control law") {
  CHECK(control_observer(traces([](TraceSample&) {}), ref_gains) == 0.0);
  CHECK(control_observer(traces([](TraceSample& s) { s.right_value = 0.7; }), ref_gains) == 0.0);
  const auto linear = traces([](TraceSample& s) { s.right_value = s.t; });
  CHECK(control_observer(linear, ref_gains) == doctest::Approx(-2.0).epsilon(1e-12));
  const auto both = traces([](TraceSample& s) {
    s.right_value = s.t;
    s.right_slope = s.t;
  });
  // -alpha * 1 - a * 1, independently
  CHECK(control_observer(both, ref_gains) == doctest::Approx(-ref_gains.alpha - ref_gains.a).epsilon(1e-12));
}

TEST_CASE("ESO control law") {
  const auto zero = traces([](TraceSample&) {});
  CHECK(control_eso(zero, zero, ref_gains) == 0.0);
  const auto q = traces([](TraceSample& s) { s.right_value = s.t * s.t; });
  // m q_tt = 10 plus alpha times the one-sided slope (4 - 1) dt^2 / dt
  CHECK(control_eso(zero, q, ref_gains) == doctest::Approx(10.0 + 2.0 * 3 * dt).epsilon(1e-10));
  CHECK(control_eso(zero, q, ref_gains) == doctest::Approx(10.0).epsilon(1e-2));
  const auto v = traces([](TraceSample& s) { s.right_value = s.t; });
  CHECK(control_eso(v, zero, ref_gains) == doctest::Approx(-2.0).epsilon(1e-12));
  const auto qx = traces([](TraceSample& s) { s.right_slope = 0.25; });
  CHECK(control_eso(zero, qx, ref_gains) == 0.25);
}

TEST_CASE("boundary ODE states") {
  const auto zero = traces([](TraceSample&) {});
  const auto z = boundary_ode_states(zero, zero, zero, ref_gains);
  CHECK(z.eta == 0.0);
  CHECK(z.psi == 0.0);
  const auto u = traces([](TraceSample& s) { s.right_value = s.t; });
  const auto b = boundary_ode_states(u, zero, zero, ref_gains);
  CHECK(b.eta == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(b.psi == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("zero data stays zero") {
  const Grid g = Grid::make(40, 0.5);
  const auto z = InitialData::zero(g);

  auto obs = make_observer_loop(ref_gains, g, z, z);
  for (int k = 0; k < 200; ++k) step_observer_loop(obs, 0.0);
  CHECK(max_abs(obs.u.cur()) == 0.0);
  CHECK(max_abs(obs.uhat.cur()) == 0.0);

  auto eso = make_eso_loop(ref_gains, g, DisturbanceSpec{}, z, z, z);
  for (int k = 0; k < 200; ++k) advance_eso_loop(eso);
  CHECK(max_abs(eso.u.cur()) == 0.0);
  CHECK(max_abs(eso.v.cur()) == 0.0);
  CHECK(max_abs(eso.q.cur()) == 0.0);
}

TEST_CASE("ESO loop keeps the coupling at x = 1") {
  const Grid g = Grid::make(50, 0.5);
  DisturbanceSpec d;
  d.d_kind = DisturbanceKind::cosine;
  d.frequency = 2.0;
  d.f_kind = UncertaintyKind::sin_of_tip;
  auto s = make_eso_loop(ref_gains, g, d, poly(g, [](double x) { return x * x * x - 3 * x * x; }),
                         poly(g, [](double x) { return -2 * x * x * x; }), InitialData::zero(g));
  const std::size_t n = 50;
  for (int k = 0; k < 400; ++k) {
    advance_eso_loop(s);
    CHECK(s.q.cur()[n] == s.v.cur()[n] - s.u.cur()[n]);
    CHECK(s.u.cur()[0] == 0.0);
  }
}

TEST_CASE("ESO loop rejects inconsistent data") {
  const Grid g = Grid::make(20, 0.5);
  const auto z = InitialData::zero(g);
  CHECK_THROWS_AS(make_eso_loop(ref_gains, g, DisturbanceSpec{}, z,
                                poly(g, [](double x) { return x; }), z),
                  ParameterError);
  CHECK_THROWS_AS(make_eso_loop(ref_gains, g, DisturbanceSpec{},
                                poly(g, [](double) { return 1.0; }), z, z),
                  ParameterError);
}

TEST_CASE("counterexample equilibrium holds") {
  const Grid g = Grid::make(100, 0.5);
  auto s = make_observer_loop(ref_gains, g, poly(g, [](double x) { return x; }),
                              poly(g, [](double) { return -1.0 / 1.5; }), 1.0);
  const int steps = static_cast<int>(std::lround(20.0 / g.dt));
  double worst = 0.0;
  for (int k = 0; k < steps; ++k) {
    step_observer_loop(s, 1.0);
    for (int j = 0; j < g.nodes(); ++j) {
      const auto i = static_cast<std::size_t>(j);
      worst = std::max(worst, std::abs(s.u.cur()[i] - g.x(j)));
      worst = std::max(worst, std::abs(s.uhat.cur()[i] + 1.0 / 1.5));
    }
  }
  CHECK(worst <= 0.05);
}

TEST_CASE("qhat ignores the disturbance") {
  const Grid g = Grid::make(50, 0.5);
  const auto vhat = poly(g, [](double x) { return 0.3 * x * x; });
  const auto qhat = poly(g, [](double x) { return x * (1 - x) * (1 - x); });
  auto a = make_error_systems(ref_gains, g, vhat, qhat, 0.0);
  auto b = make_error_systems(ref_gains, g, vhat, qhat, 1.0);
  for (int k = 0; k < 500; ++k) {
    step_error_systems(a, 0.0);
    step_error_systems(b, std::sin(0.37 * k) + 2.0);
  }
  for (std::size_t j = 0; j < a.qhat.size(); ++j) CHECK(a.qhat.cur()[j] == b.qhat.cur()[j]);
  CHECK(max_abs(difference(a.vhat, b.vhat).cur()) > 1e-3);

  auto alone = start_qhat(qhat, ref_gains, g);
  for (int k = 0; k < 500; ++k) step_qhat(alone, ref_gains, g);
  for (std::size_t j = 0; j < a.qhat.size(); ++j) CHECK(alone.cur()[j] == a.qhat.cur()[j]);
}

TEST_CASE("observer error energy does not grow") {
  // F = 0: the error uhat - u is dissipative; any growth is discretisation
  // noise that shrinks with the grid.
  auto growth = [](int n_cells) {
    const Grid g = Grid::make(n_cells, 0.5);
    auto s = make_observer_loop(ref_gains, g, poly(g, [](double x) { return x * x * x - 3 * x * x; }),
                                InitialData::zero(g));
    double prev = -1.0, e0 = 0.0, worst = 0.0;
    const int steps = static_cast<int>(std::lround(10.0 / g.dt));
    for (int k = 0; k < steps; ++k) {
      step_observer_loop(s, 0.0);
      const auto err = difference(s.uhat, s.u);
      const double e = energy(SpaceTag::H2, err, tip_momentum(err, ref_gains, g), ref_gains, g);
      if (prev >= 0.0) worst = std::max(worst, e - prev);
      else e0 = e;
      prev = e;
    }
    return worst / e0;
  };
  const double g100 = growth(100);
  const double g200 = growth(200);
  CHECK(g100 <= 1e-3);
  CHECK(g200 <= g100);
}

TEST_CASE("max_abs propagates NaN") {
  std::vector<double> v{1.0, std::nan(""), -3.0};
  CHECK(std::isnan(max_abs(v)));
  std::vector<double> w{1.0, -3.0};
  CHECK(max_abs(w) == 3.0);
}
