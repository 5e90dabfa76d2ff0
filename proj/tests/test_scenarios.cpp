#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tipwave/errors.hpp"
#include "tipwave/scenarios.hpp"

using namespace tipwave;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("tipwave_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::vector<std::string> violations_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.violations();
  }
  return {};
}

}  // namespace

TEST_CASE("preset expansion") {
  const auto parsed = parse_config("preset = reproduce_sec4\n");
  const auto& c = parsed.config;
  CHECK(parsed.warnings.empty());
  CHECK(c.mode == Mode::reproduce_sec4);
  CHECK(c.params == SystemParams{5.0, 2.0, 2.0, 1.5, 1.5});
  CHECK(c.n_cells == 100);
  CHECK(c.r == 0.5);
  CHECK(c.u0 == std::vector<double>{0, 0, -3, 1});
  CHECK(c.v0 == std::vector<double>{0, 0, 0, -2});
  CHECK(c.u0_t.empty());
  CHECK(c.q0.empty());
  CHECK(c.disturbance.f_kind == UncertaintyKind::sin_of_tip);
  CHECK(c.disturbance.d_kind == DisturbanceKind::cosine);
  CHECK(c.disturbance.amplitude == 1.0);
  CHECK(c.disturbance.frequency == 2.0);

  const auto over = parse_config("# tweak\npreset = reproduce_sec4\nT = 5   # short\nm = 4\n");
  CHECK(over.config.horizon == 5.0);
  CHECK(over.config.params.m == 4.0);
  CHECK(over.config.mode == Mode::reproduce_sec4);

  const auto by_mode = parse_config("mode = counterexample_sec3\n");
  CHECK(by_mode.config.preset == "counterexample_sec3");
  CHECK(by_mode.config.uhat0 == std::vector<double>{-1.0 / 1.5});
}

TEST_CASE("hypothesis problems are warnings") {
  const auto p = parse_config("m = 2\na = 2\n");
  REQUIRE(p.warnings.size() == 1);
  CHECK(p.warnings[0] == "m = a violates Theorem hypothesis");
  CHECK(parse_config("gamma = 1\n").warnings.size() == 1);
}

TEST_CASE("config errors are collected") {
  CHECK(violations_of("r = 1.5\n").size() == 1);
  const auto v = violations_of("r = 1.5\nbogus = 1\nn_cells = 5\nT = -1\nm = x\nno equals sign\n");
  CHECK(v.size() == 6);
  CHECK(violations_of("preset = nonsense\n").size() == 1);
  CHECK(violations_of("mode = open_plant\nu0 = 1, 1\n").size() == 1);
  CHECK(violations_of("mode = eso_loop\nq0 = 1\n").size() == 1);
  CHECK(violations_of("d_kind = table\nd_table = 0:1\n").size() == 1);
  CHECK(violations_of("d_table = 0:1, 1\n").size() == 1);
}

TEST_CASE("overrides apply last") {
  const auto p = parse_config("m = 3\n", {"m=7", "out_dir = somewhere"});
  CHECK(p.config.params.m == 7.0);
  CHECK(p.config.out_dir == "somewhere");
  CHECK_THROWS_AS(parse_config("", {"m"}), ConfigError);
}

TEST_CASE("serialize round-trip") {
  for (const char* text :
       {"preset = reproduce_sec4\n", "mode = counterexample_sec3\n",
        "mode = spectrum\nfamily = Abb\nn_max = 7\nmax_fitted_rate = -0.1\n",
        "mode = open_plant\nd_kind = table\nd_table = 0:1, 0.5:-2.25, 3:0.1\nf_kind = "
        "lipschitz_linear\nf_gain = 0.3\nu0 = 0, 0.1, 1e-7\nu0_t = 0, 2\nT = 1.75\nr = 0.9\n"
        "max_final_energy_ratio = 1.5\nmin_final_energy_ratio = 0.25\nfit_tail = 0.3\n"}) {
    const auto c = parse_config(text).config;
    const auto again = parse_config(serialize(c)).config;
    CHECK(again == c);
    CHECK(serialize(again) == serialize(c));
  }
}

TEST_CASE("polynomial evaluation") {
  CHECK(eval_polynomial({}, 3.0) == 0.0);
  CHECK(eval_polynomial({0, 0, -3, 1}, 1.0) == -2.0);
  CHECK(eval_polynomial({1, 2}, 0.5) == 2.0);
}

TEST_CASE("runs are deterministic") {
  auto c = parse_config("preset = reproduce_sec4\nT = 2\nn_cells = 20\nstride = 5\n").config;
  const auto a = scratch("det_a"), b = scratch("det_b");
  run_scenario(c, a.string());
  run_scenario(c, b.string());
  int files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    ++files;
    CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
  }
  CHECK(files == 10);
  const auto snap = slurp(a / "snapshots_u.csv");
  CHECK(snap.rfind("t,x,value\n", 0) == 0);
  // stride 5 over 80 steps: 17 snapshots of 21 nodes
  CHECK(std::count(snap.begin(), snap.end(), '\n') == 1 + 17 * 21);
  const auto report = report_from_dir(a.string());
  CHECK(report.find("energy.plant.fitted_rate") != std::string::npos);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("scenario outcomes") {
  SUBCASE("reference ESO run decays") {
    const auto r = run_scenario(parse_config("preset = reproduce_sec4\nT = 20\n").config, "");
    const auto* plant = r.energy("plant");
    REQUIRE(plant != nullptr);
    CHECK(plant->samples().back().value / plant->samples().front().value <= 1e-3);
    REQUIRE(r.abscissa.has_value());
    CHECK(*r.abscissa == doctest::Approx(-0.402636).epsilon(1e-5));
  }

  SUBCASE("counterexample does not decay") {
    const auto r = run_scenario(parse_config("preset = counterexample_sec3\n").config, "");
    const auto* plant = r.energy("plant");
    REQUIRE(plant != nullptr);
    CHECK(plant->samples().back().value >= 0.5 * plant->samples().front().value);
  }

  SUBCASE("spectrum mode") {
    const auto r =
        run_scenario(parse_config("mode = spectrum\nfamily = A\nn_max = 20\n").config, "");
    REQUIRE(r.spectrum.has_value());
    CHECK(*r.abscissa == doctest::Approx(-0.402636).epsilon(1e-5));
    CHECK(r.summary.find("spectral_abscissa") != std::string::npos);
  }

  SUBCASE("thresholds") {
    auto c = parse_config("mode = open_plant\nT = 2\nmax_final_energy_ratio = 0.5\n").config;
    auto r = run_scenario(c, "");
    CHECK_FALSE(r.thresholds_passed);
    c.thresholds.max_final_energy_ratio = 1.1;
    c.thresholds.min_final_energy_ratio = 0.9;
    r = run_scenario(c, "");
    CHECK(r.thresholds_passed);
  }

  SUBCASE("blow-up reports the step") {
    const auto c = parse_config("mode = open_plant\nu0 = 0, 2e12\nT = 1\n").config;
    try {
      run_scenario(c, "");
      FAIL("expected a blow-up");
    } catch (const BlowUpError& e) {
      CHECK(e.step() >= 1);
      CHECK(std::string(e.what()).find("step") != std::string::npos);
    }
  }

  SUBCASE("unwritable output") {
    const auto c = parse_config("mode = open_plant\nT = 0.1\n").config;
    CHECK_THROWS_AS(run_scenario(c, "/proc/tipwave/nope"), IoError);
    CHECK_THROWS_AS(report_from_dir("/nonexistent/dir"), IoError);
  }
}
