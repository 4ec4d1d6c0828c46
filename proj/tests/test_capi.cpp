#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "tllsta/tllsta.h"

namespace fs = std::filesystem;

TEST_CASE("status strings and version") {
  CHECK(std::strlen(tll_version()) > 0);
  CHECK(std::string(tll_status_string(TLL_OK)) == "ok");
  CHECK(std::strlen(tll_status_string(TLL_E_CONFIG)) > 0);
  CHECK(std::strlen(tll_status_string(static_cast<tll_status>(55))) > 0);
}

TEST_CASE("special functions and closed forms") {
  double ai[4];
  REQUIRE(tll_airy(0.0, ai) == TLL_OK);
  CHECK(ai[0] == doctest::Approx(0.3550280538878172));
  CHECK(ai[2] == doctest::Approx(0.6149266274460007));
  CHECK(tll_airy(2e4, ai) == TLL_E_DOMAIN);
  CHECK(std::strstr(tll_last_error(), "airy") != nullptr);
  CHECK(tll_airy(150.0, ai) == TLL_E_OVERFLOW);
  CHECK(tll_last_error_detail() == doctest::Approx(2.0 / 3.0 * std::pow(150.0, 1.5)));
  CHECK(tll_airy(1.0, nullptr) == TLL_E_NULL_ARGUMENT);

  double e = 0.0;
  REQUIRE(tll_gamma0(2.0 * M_PI / 100.0, &e) == TLL_OK);
  CHECK(e == doctest::Approx(2.2519359671457993).epsilon(1e-14));
  CHECK(tll_gamma0(0.0, &e) == TLL_E_DOMAIN);
  CHECK(std::isnan(tll_last_error_detail()));

  double ad = 0.0, su = 0.0;
  REQUIRE(tll_adiabatic_energy(0.5, 1.0, 1.0, 100.0, &ad) == TLL_OK);
  REQUIRE(tll_sudden_energy(0.5, 1.0, 1.0, 100.0, &su) == TLL_OK);
  CHECK(su - ad == doctest::Approx(1.3653335598566486).epsilon(1e-13));
  CHECK(tll_adiabatic_energy(-0.7, 1.0, 1.0, 100.0, &ad) == TLL_E_INSTABILITY);
  double r = 0.0;
  REQUIRE(tll_perturbative_residual_linear(0.1, 0.5, 1.0, 1.0, 100.0, &r) == TLL_OK);
  CHECK(r == doctest::Approx(100.0 / (2 * M_PI) * 0.005 * std::log(2.0)));
  REQUIRE(tll_residual_inverse_poly(0.1, 1.0, 1.0, 100.0, &r) == TLL_OK);
  CHECK(r == doctest::Approx(0.17920337034884).epsilon(1e-12));
}

TEST_CASE("trajectory handles") {
  std::vector<double> times;
  for (int i = 0; i <= 50; ++i) times.push_back(0.1 * i);
  tll_trajectory* numeric = nullptr;
  tll_trajectory* airy = nullptr;
  REQUIRE(tll_linear_ramp_solve(1.3, 0.4, 5.0, 1.0, 1.0, times.data(), times.size(), TLL_METHOD_NUMERIC, 1e-12,
                                &numeric) == TLL_OK);
  REQUIRE(tll_linear_ramp_solve(1.3, 0.4, 5.0, 1.0, 1.0, times.data(), times.size(), TLL_METHOD_AIRY, 0.0,
                                &airy) == TLL_OK);
  REQUIRE(tll_trajectory_size(numeric) == times.size());
  REQUIRE(tll_trajectory_size(airy) == times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    double t1, g1, d1, dd1, t2, g2, d2, dd2;
    REQUIRE(tll_trajectory_sample(numeric, i, &t1, &g1, &d1, &dd1) == TLL_OK);
    REQUIRE(tll_trajectory_sample(airy, i, &t2, &g2, &d2, &dd2) == TLL_OK);
    CHECK(t1 == times[i]);
    CHECK(std::fabs(g1 - g2) < 1e-8);
    CHECK(std::fabs(d1 - d2) < 1e-8);
  }
  double t, g;
  CHECK(tll_trajectory_sample(numeric, times.size(), &t, &g, nullptr, nullptr) == TLL_E_DOMAIN);
  CHECK(tll_trajectory_size(nullptr) == 0);
  tll_trajectory_free(numeric);
  tll_trajectory_free(airy);
  tll_trajectory_free(nullptr);

  tll_trajectory* bad = nullptr;
  CHECK(tll_linear_ramp_solve(1.0, 0.4, 5.0, 1.0, 1.0, times.data(), times.size(), TLL_METHOD_NUMERIC, 0.0,
                              nullptr) == TLL_E_NULL_ARGUMENT);
  CHECK(tll_linear_ramp_solve(1.0, 0.0, 5.0, 1.0, 1.0, times.data(), times.size(), TLL_METHOD_AIRY, 0.0, &bad) !=
        TLL_OK);
  CHECK(bad == nullptr);
}

TEST_CASE("configuration round trip") {
  tll_config* def = nullptr;
  REQUIRE(tll_config_default(&def) == TLL_OK);
  char* text = nullptr;
  REQUIRE(tll_config_emit(def, &text) == TLL_OK);
  tll_config* back = nullptr;
  REQUIRE(tll_config_parse(text, &back) == TLL_OK);
  char* again = nullptr;
  REQUIRE(tll_config_emit(back, &again) == TLL_OK);
  CHECK(std::string(text) == std::string(again));
  tll_string_free(text);
  tll_string_free(again);
  tll_config_free(back);
  tll_config_free(def);

  tll_config* bad = nullptr;
  CHECK(tll_config_parse("[grid]\nr0 = -1\n", &bad) == TLL_E_CONFIG);
  CHECK(bad == nullptr);
  CHECK(std::string(tll_last_error()).rfind("grid.r0:", 0) == 0);
  CHECK(tll_config_parse(nullptr, &bad) == TLL_E_NULL_ARGUMENT);
  CHECK(tll_config_load("/nonexistent.toml", &bad) == TLL_E_CONFIG);
}

TEST_CASE("presets") {
  REQUIRE(tll_preset_count() == 8);
  for (std::size_t i = 0; i < tll_preset_count(); ++i) {
    const char* id = tll_preset_id(i);
    REQUIRE(id != nullptr);
    REQUIRE(tll_preset_description(id) != nullptr);
  }
  CHECK(tll_preset_id(8) == nullptr);
  CHECK(tll_preset_description("nope") == nullptr);
}

TEST_CASE("runs through the C interface") {
  const fs::path dir = fs::temp_directory_path() / "tllsta_test_capi";
  fs::remove_all(dir);
  tll_config* config = nullptr;
  REQUIRE(tll_config_parse("[protocol]\nalpha = 0.2\ntau_q = 2\n[grid]\nlength = 20\n", &config) == TLL_OK);
  tll_run_options options;
  tll_run_options_init(&options);
  CHECK(options.format == TLL_FORMAT_CONFIG);
  const std::string solve_dir = (dir / "solve").string();
  options.out_dir = solve_dir.c_str();
  options.format = TLL_FORMAT_JSON;
  tll_result* result = nullptr;
  REQUIRE(tll_run(config, nullptr, &options, &result) == TLL_OK);
  CHECK(tll_result_exit_code(result) == 0);
  CHECK(std::strlen(tll_result_summary(result)) > 0);
  REQUIRE(tll_result_file_count(result) >= 2);
  for (std::size_t i = 0; i < tll_result_file_count(result); ++i) CHECK(fs::exists(tll_result_file(result, i)));
  CHECK(fs::exists(dir / "solve" / "report.json"));
  CHECK(tll_result_file(result, 99) == nullptr);
  tll_result_free(result);

  result = nullptr;
  CHECK(tll_run(config, "sweep", &options, &result) == TLL_E_CONFIG);
  CHECK(result == nullptr);
  CHECK(std::string(tll_last_error()).find("empty sweep") != std::string::npos);
  CHECK(tll_run(config, "dance", &options, &result) == TLL_E_CONFIG);
  tll_config_free(config);

  const std::string fig_dir = (dir / "fig5").string();
  options.out_dir = fig_dir.c_str();
  options.format = TLL_FORMAT_CSV;
  REQUIRE(tll_run_figure("fig5", &options, &result) == TLL_OK);
  CHECK(tll_result_exit_code(result) == 0);
  CHECK(fs::exists(dir / "fig5" / "verification.csv"));
  tll_result_free(result);
  CHECK(tll_run_figure("fig99", &options, &result) == TLL_E_CONFIG);
  CHECK(tll_run_figure(nullptr, &options, &result) == TLL_E_NULL_ARGUMENT);
}
