#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tipwave/errors.hpp"
#include "tipwave/signals.hpp"

using namespace tipwave;

TEST_CASE("external disturbance") {
  DisturbanceSpec s;
  CHECK(eval_d(s, 3.7) == 0.0);

  s.d_kind = DisturbanceKind::constant;
  s.constant = 1.25;
  CHECK(eval_d(s, 100.0) == 1.25);

  s.d_kind = DisturbanceKind::cosine;
  s.amplitude = 1.0;
  s.frequency = 2.0;
  CHECK(std::abs(eval_d(s, std::numbers::pi / 4)) < 1e-15);
  CHECK(eval_d(s, 0.0) == 1.0);

  s.d_kind = DisturbanceKind::exp_decay;
  s.rate = 1.0;
  CHECK(eval_d(s, std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("tabulated disturbance") {
  DisturbanceSpec s;
  s.d_kind = DisturbanceKind::table;
  s.table = {{0.0, 0.0}, {1.0, 2.0}, {3.0, -2.0}};
  CHECK_NOTHROW(validate(s));
  std::vector<std::string> w;
  CHECK(eval_d(s, 0.5, &w) == doctest::Approx(1.0));
  CHECK(eval_d(s, 2.0, &w) == doctest::Approx(0.0));
  CHECK(w.empty());
  CHECK(eval_d(s, 5.0, &w) == -2.0);
  CHECK(eval_d(s, -1.0, &w) == 0.0);
  CHECK(w.size() == 2);

  s.table = {{0.0, 1.0}};
  CHECK_THROWS_AS(validate(s), ParameterError);
  s.table = {{0.0, 1.0}, {0.0, 2.0}};
  CHECK_THROWS_AS(validate(s), ParameterError);
}

TEST_CASE("internal uncertainty") {
  DisturbanceSpec s;
  CHECK(eval_f(s, 12.0) == 0.0);
  s.f_kind = UncertaintyKind::sin_of_tip;
  CHECK(eval_f(s, 0.0) == 0.0);
  CHECK(eval_f(s, std::numbers::pi / 2) == doctest::Approx(1.0));
  s.f_kind = UncertaintyKind::lipschitz_linear;
  s.f_gain = -0.5;
  CHECK(eval_f(s, 4.0) == -2.0);
}

TEST_CASE("uncertainties are Lipschitz with their constant") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> pick(-20.0, 20.0);
  DisturbanceSpec sin_tip;
  sin_tip.f_kind = UncertaintyKind::sin_of_tip;
  DisturbanceSpec linear;
  linear.f_kind = UncertaintyKind::lipschitz_linear;
  linear.f_gain = 3.0;
  for (int i = 0; i < 2000; ++i) {
    const double a = pick(rng), b = pick(rng);
    CHECK(std::abs(eval_f(sin_tip, a) - eval_f(sin_tip, b)) <= std::abs(a - b) * (1 + 1e-12));
    CHECK(std::abs(eval_f(linear, a) - eval_f(linear, b)) <= 3.0 * std::abs(a - b) * (1 + 1e-12));
  }
}
