// Exercises the shared library through its C interface only.
#include <doctest.h>

#include <cstring>
#include <string>

#include "tipwave/tipwave.h"

TEST_CASE("config through the C API") {
  tw_config* c = nullptr;
  REQUIRE(tw_config_parse("preset = reproduce_sec4\nT = 1\n", nullptr, 0, &c) == TW_OK);
  CHECK(std::string(tw_config_mode(c)) == "reproduce_sec4");
  CHECK(tw_config_warning_count(c) == 0);
  CHECK(std::string(tw_config_serialize(c)).find("m = 5") != std::string::npos);
  tw_config_free(c);

  const char* over[] = {"a=5"};
  REQUIRE(tw_config_parse("m = 5\n", over, 1, &c) == TW_OK);
  REQUIRE(tw_config_warning_count(c) == 1);
  CHECK(std::string(tw_config_warning(c, 0)) == "m = a violates Theorem hypothesis");
  CHECK(tw_config_warning(c, 1) == nullptr);
  tw_config_free(c);

  CHECK(tw_config_parse("r = 1.5\nzzz = 1\n", nullptr, 0, &c) == TW_ERR_CONFIG);
  CHECK(c == nullptr);
  const std::string msg = tw_last_error();
  CHECK(msg.find('\n') != std::string::npos);
  CHECK(msg.find("zzz") != std::string::npos);

  CHECK(tw_config_load("/nonexistent.cfg", nullptr, 0, &c) == TW_ERR_IO);
  CHECK(tw_config_parse(nullptr, nullptr, 0, &c) == TW_ERR_ARGUMENT);
}

TEST_CASE("runs through the C API") {
  tw_config* c = nullptr;
  REQUIRE(tw_config_parse("preset = counterexample_sec3\nT = 2\n", nullptr, 0, &c) == TW_OK);
  tw_report* r = nullptr;
  REQUIRE(tw_run(c, "", &r) == TW_OK);
  double e0 = 0, e1 = 0, abscissa = 0;
  CHECK(tw_report_energy(r, "plant", &e0, &e1) == TW_OK);
  CHECK(e1 >= 0.5 * e0);
  CHECK(tw_report_energy(r, "nothing", &e0, &e1) == TW_ERR_ARGUMENT);
  CHECK(tw_report_abscissa(r, &abscissa) == 1);
  CHECK(abscissa < 0);
  CHECK(tw_report_has_thresholds(r) == 0);
  CHECK(std::strstr(tw_report_summary(r), "energy.closed") != nullptr);
  tw_report_free(r);
  tw_config_free(c);

  REQUIRE(tw_config_parse("mode = open_plant\nu0 = 0, 1e13\n", nullptr, 0, &c) == TW_OK);
  CHECK(tw_run(c, "", &r) == TW_ERR_BLOW_UP);
  CHECK(r == nullptr);
  CHECK(std::string(tw_last_error()).find("step 1") != std::string::npos);
  tw_config_free(c);
}

TEST_CASE("spectra through the C API") {
  tw_config* c = nullptr;
  REQUIRE(tw_config_parse("", nullptr, 0, &c) == TW_OK);
  tw_spectrum* s = nullptr;
  REQUIRE(tw_spectrum_compute(c, "Abb", 5, &s) == TW_OK);
  CHECK(tw_spectrum_size(s) == 11);
  double x = 0;
  CHECK(tw_spectrum_abscissa(s, &x) == TW_OK);
  CHECK(x == doctest::Approx(-0.672056).epsilon(1e-5));
  int n = 0;
  double re = 0, im = 0, res = 1;
  CHECK(tw_spectrum_eigenvalue(s, 0, &n, &re, &im, &res) == TW_OK);
  CHECK(n == -5);
  CHECK(res <= 1e-10);
  CHECK(tw_spectrum_eigenvalue(s, 99, &n, &re, &im, &res) == TW_ERR_ARGUMENT);
  CHECK(std::string(tw_spectrum_csv(s)).rfind("n,seed_re", 0) == 0);
  tw_spectrum_free(s);
  CHECK(tw_spectrum_compute(c, "Q", 5, &s) == TW_ERR_PARAMETER);
  tw_config_free(c);
}
