#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "tipwave/energy.hpp"
#include "tipwave/errors.hpp"
#include "tipwave/wave_core.hpp"

using namespace tipwave;

namespace {

std::vector<double> sample(const Grid& g, double (*f)(double)) {
  std::vector<double> v(static_cast<std::size_t>(g.nodes()));
  for (int j = 0; j < g.nodes(); ++j) v[static_cast<std::size_t>(j)] = f(g.x(j));
  return v;
}

// Cramer's rule for [a b; c d] [x; y] = [e; f], returns x.
double solve_first(double a, double b, double c, double d, double e, double f) {
  return (e * d - b * f) / (a * d - b * c);
}

const SystemParams ref_gains{5.0, 2.0, 2.0, 1.5, 1.5};

}  // namespace

TEST_CASE("interior stencil") {
  const Grid g = Grid::make(100, 1.0);

  SUBCASE("zero field stays zero") {
    FieldHistory f(g.nodes());
    step_interior(f, g);
    for (std::size_t j = 1; j + 1 < f.size(); ++j) CHECK(f.next()[j] == 0.0);
  }

  SUBCASE("standing sine at r = 1") {
    auto s = sample(g, [](double x) { return std::sin(std::numbers::pi * x); });
    auto f = FieldHistory::from_levels(s, s, 0.0);
    step_interior(f, g);
    const double c = std::cos(std::numbers::pi * g.dx);
    for (std::size_t j = 1; j + 1 < f.size(); ++j) {
      // straight-line stencil: 2u - u + (u_{j+1} - 2u + u_{j-1})
      const double direct = 2 * s[j] - s[j] + (s[j + 1] - 2 * s[j] + s[j - 1]);
      CHECK(f.next()[j] == doctest::Approx(direct).epsilon(1e-14));
      CHECK(f.next()[j] == doctest::Approx(2 * c * s[j] - s[j]).epsilon(1e-12));
    }
  }

  SUBCASE("r = 1 moves a pulse one cell per step") {
    auto bump = [](double x) {
      const double z = (x - 0.3) / 0.1;
      return std::abs(z) < 1 ? std::pow(1 - z * z, 4) : 0.0;
    };
    std::vector<double> prev(static_cast<std::size_t>(g.nodes()));
    std::vector<double> cur(prev.size());
    for (int j = 0; j < g.nodes(); ++j) {
      prev[static_cast<std::size_t>(j)] = bump(g.x(j) + g.dt);  // phi(x - t) at t = -dt
      cur[static_cast<std::size_t>(j)] = bump(g.x(j));
    }
    auto f = FieldHistory::from_levels(prev, cur, 0.0);
    for (int step = 0; step < 20; ++step) {
      step_interior(f, g);
      apply_dirichlet_zero_left(f);
      f.next_mut()[f.size() - 1] = 0.0;
      f.rotate(g.dt);
    }
    for (int j = 20; j < g.nodes(); ++j) {
      CHECK(f.cur()[static_cast<std::size_t>(j)] ==
            doctest::Approx(cur[static_cast<std::size_t>(j - 20)]).epsilon(1e-13));
    }
  }
}

TEST_CASE("dirichlet left") {
  const Grid g = Grid::make(20, 0.5);
  auto s = sample(g, [](double x) { return 1.0 + x; });
  auto f = FieldHistory::from_levels(s, s, 0.0);
  step_interior(f, g);
  apply_dirichlet_zero_left(f);
  CHECK(f.next()[0] == 0.0);
  apply_dirichlet_zero_left(f);
  CHECK(f.next()[0] == 0.0);
}

TEST_CASE("tip mass closure") {
  const Grid g = Grid::make(100, 0.5);
  const std::size_t n = 100;

  SUBCASE("zero forcing keeps rest") {
    FieldHistory f(g.nodes());
    step_interior(f, g);
    apply_tip_mass_right(f, 0.0, 0.0, ref_gains, g);
    CHECK(f.next()[n] == 0.0);
  }

  SUBCASE("one step from rest under unit forcing") {
    FieldHistory f(g.nodes());
    step_interior(f, g);
    apply_tip_mass_right(f, 0.25, 0.75, ref_gains, g);
    // Unknowns (next, ghost):
    //   next - r^2 ghost = 0                     (interior stencil at N, rest)
    //   m next / dt^2 + ghost / (2 dx) = 1       (centred tip relation)
    const double r2 = g.r * g.r;
    const double oracle =
        solve_first(1.0, -r2, ref_gains.m / (g.dt * g.dt), 1.0 / (2 * g.dx), 0.0, 1.0);
    CHECK(oracle == doctest::Approx(4.995004995004995e-6).epsilon(1e-12));
    CHECK(f.next()[n] == doctest::Approx(oracle).epsilon(1e-13));
  }
}

TEST_CASE("robin closure") {
  const Grid g = Grid::make(100, 0.5);

  SUBCASE("homogeneous input keeps rest") {
    FieldHistory f(g.nodes());
    step_interior(f, g);
    apply_robin_left(f, 0.0, ref_gains, g);
    CHECK(f.next()[0] == 0.0);
  }

  SUBCASE("one step from rest under unit input") {
    FieldHistory f(g.nodes());
    step_interior(f, g);
    apply_robin_left(f, 1.0, ref_gains, g);
    // Unknowns (next, ghost) with v^n = v^{n-1} = 0:
    //   next - r^2 ghost = 0
    //   -ghost / (2 dx) = gamma next / (2 dt) + beta next / 2 + 1
    const double r2 = g.r * g.r;
    const double oracle = solve_first(1.0, -r2, ref_gains.gamma / (2 * g.dt) + ref_gains.beta / 2,
                                      1.0 / (2 * g.dx), 0.0, -1.0);
    CHECK(oracle == doctest::Approx(-0.005 / 1.75375).epsilon(1e-12));
    CHECK(f.next()[0] == doctest::Approx(oracle).epsilon(1e-13));
  }
}

TEST_CASE("dirichlet trace right pins the node") {
  const Grid g = Grid::make(20, 0.5);
  FieldHistory f(g.nodes());
  for (int k = 0; k < 5; ++k) {
    step_interior(f, g);
    apply_dirichlet_zero_left(f);
    apply_dirichlet_trace_right(f, 0.75);
    f.rotate(g.dt);
    CHECK(f.cur()[20] == 0.75);
  }
}

TEST_CASE("closures commute with negation") {
  const Grid g = Grid::make(40, 0.5);
  auto a = sample(g, [](double x) { return x * x * (1 - x) + 0.2 * x; });
  auto b = sample(g, [](double x) { return x * x * (1 - x) + 0.21 * x; });
  auto f = FieldHistory::from_levels(a, b, 0.0);
  std::vector<double> na(a.size()), nb(b.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    na[j] = -a[j];
    nb[j] = -b[j];
  }
  auto h = FieldHistory::from_levels(na, nb, 0.0);
  for (int k = 0; k < 30; ++k) {
    for (auto* x : {&f, &h}) {
      step_interior(*x, g);
      apply_robin_left(*x, 0.0, ref_gains, g);
      apply_tip_mass_right(*x, 0.0, 0.0, ref_gains, g);
      x->rotate(g.dt);
    }
  }
  for (std::size_t j = 0; j < f.size(); ++j) CHECK(h.cur()[j] == -f.cur()[j]);
}

TEST_CASE("boundary traces") {
  const Grid g = Grid::make(50, 0.5);

  SUBCASE("linear field") {
    auto s = sample(g, [](double x) { return x; });
    const auto t = sample_traces(FieldHistory::from_levels(s, s, 0.0), g);
    CHECK(t.left_slope == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(t.right_slope == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(t.right_value == 1.0);
  }

  SUBCASE("quadratic field") {
    auto s = sample(g, [](double x) { return x * x; });
    const auto t = sample_traces(FieldHistory::from_levels(s, s, 0.0), g);
    CHECK(std::abs(t.left_slope) < 1e-12);
    CHECK(t.right_slope == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("zero field") {
    FieldHistory f(g.nodes());
    const auto t = sample_traces(f, g);
    CHECK(t.left_value == 0.0);
    CHECK(t.right_value == 0.0);
    CHECK(t.left_slope == 0.0);
    CHECK(t.right_slope == 0.0);
  }

  SUBCASE("too coarse") {
    CHECK_THROWS_AS(sample_traces(FieldHistory(3), Grid::make(2, 0.5)), StructuralError);
  }
}

TEST_CASE("backward time differences") {
  const double dt = 0.01;
  BoundaryTraces tr(dt);
  CHECK_FALSE(backward_time_derivative(tr, TraceQuantity::right_value, 1).has_value());
  for (int k = 0; k < 3; ++k) {
    TraceSample s;
    s.t = k * dt;
    s.right_value = s.t;
    s.left_value = s.t * s.t;
    s.right_slope = 4.0;
    tr.push(s);
  }
  CHECK(*backward_time_derivative(tr, TraceQuantity::right_value, 1) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*backward_time_derivative(tr, TraceQuantity::left_value, 2) ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(*backward_time_derivative(tr, TraceQuantity::right_slope, 1) == 0.0);
  CHECK(*backward_time_derivative(tr, TraceQuantity::right_slope, 2) == 0.0);

  BoundaryTraces warm(dt);
  warm.push(TraceSample{});
  CHECK(derivative_or_zero(warm, TraceQuantity::right_value, 1) == 0.0);
}

TEST_CASE("start-up back-step is second order") {
  // u = sin(pi x) cos(pi t) satisfies the interior equation; check prev level.
  const Grid g = Grid::make(100, 0.5);
  auto s = sample(g, [](double x) { return std::sin(std::numbers::pi * x); });
  std::vector<double> zero(s.size(), 0.0);
  const auto f = start_field(s, zero, DirichletLeft{}, DirichletRight{}, ref_gains, g);
  const double c = std::cos(std::numbers::pi * g.dt);
  for (std::size_t j = 1; j + 1 < s.size(); ++j) {
    CHECK(std::abs(f.prev()[j] - c * s[j]) < 1e-8);
  }
}

TEST_CASE("plant energy drift shrinks with the grid") {
  auto drift = [](int n_cells) {
    const Grid g = Grid::make(n_cells, 0.5);
    std::vector<double> u(static_cast<std::size_t>(g.nodes()));
    for (int j = 0; j < g.nodes(); ++j) {
      const double x = g.x(j);
      u[static_cast<std::size_t>(j)] = x * x * x - 3 * x * x;
    }
    std::vector<double> v(u.size(), 0.0);
    auto f = start_field(u, v, DirichletLeft{}, TipMassRight{0.0}, ref_gains, g);
    double e0 = -1, worst = 0;
    const int steps = static_cast<int>(std::lround(10.0 / g.dt));
    for (int k = 0; k < steps; ++k) {
      step_interior(f, g);
      apply_dirichlet_zero_left(f);
      apply_tip_mass_right(f, 0.0, 0.0, ref_gains, g);
      f.rotate(g.dt);
      const double e = energy(SpaceTag::H1, f, tip_momentum(f, ref_gains, g), ref_gains, g);
      if (e0 < 0) e0 = e;
      worst = std::max(worst, std::abs(e - e0) / e0);
    }
    return worst;
  };
  const double d100 = drift(100);
  const double d200 = drift(200);
  CHECK(d100 < 0.01);
  CHECK(d100 / d200 >= 3.0);
}
