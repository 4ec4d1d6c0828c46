#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "tllsta/error.hpp"
#include "tllsta/observables.hpp"
#include "tllsta/protocols.hpp"

using namespace tll;
using std::numbers::pi;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::consistency;
}

std::vector<ErmakovTrajectory> solve_grid(const ModeGrid& grid, const CouplingSchedule& s,
                                          const std::vector<double>& times) {
  std::vector<ErmakovTrajectory> out;
  const auto w2 = coupling_omega_sq(s);
  for (std::size_t n = 1; n <= grid.n_max; ++n) {
    const double p = grid.momentum(n);
    out.push_back(solve_ermakov_numeric(w2, p, s.v_f * p, 1.0, coupling_gamma_dot0(s), times));
  }
  return out;
}

}  // namespace

TEST_CASE("mode energy limits") {
  CHECK(mode_energy(1.0, 0.0, 0.8, 0.64, 0.0) == doctest::Approx(0.4));
  const double w0 = 0.8, w = 1.9, nb = 0.3;
  const double g = std::sqrt(w0 / w);
  CHECK(mode_energy(g, 0.0, w0, w * w, nb) == doctest::Approx(w * (nb + 0.5)).epsilon(1e-15));
  CHECK(mode_residual(g, 0.0, w0, w * w, nb) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
}

TEST_CASE("both algebraic forms of the mode energy agree on trajectories") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double alpha = 2.0 * u(rng);
    const double tau = 0.1 + 5.0 * u(rng);
    const double p = 0.05 + 3.0 * u(rng);
    const double nb = u(rng);
    const auto s = make_coupling_schedule(CouplingKind::poly5, alpha, tau);
    const auto w2 = coupling_omega_sq(s);
    std::vector<double> times;
    for (int i = 0; i <= 20; ++i) times.push_back(tau * i / 20);
    const auto tr = solve_ermakov_numeric(w2, p, p, 1.0, 0.0, times);
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const double a = mode_energy(tr.gamma[i], tr.gamma_dot[i], p, w2(p, tr.times[i]), nb);
      const double b = mode_energy_ddot_form(tr.gamma[i], tr.gamma_dot[i], tr.gamma_ddot[i], p, nb);
      CHECK(std::fabs(a - b) <= 1e-10 * std::fabs(a));
      const double r = mode_residual(tr.gamma[i], tr.gamma_dot[i], p, w2(p, tr.times[i]), nb);
      CHECK(r >= 0.0);
      CHECK(std::fabs(a - std::sqrt(w2(p, tr.times[i])) * (nb + 0.5) - r) <= 1e-12 * a);
    }
  }
}

TEST_CASE("closed-form limits") {
  const double c = 100.0 / (2 * pi);
  CHECK(adiabatic_energy(0.0, 1.0, 1.0, 100.0) == doctest::Approx(c));
  CHECK(adiabatic_energy(1.5, 1.0, 1.0, 100.0) == doctest::Approx(2.0 * c));
  CHECK(sudden_energy(0.0, 1.0, 1.0, 100.0) == adiabatic_energy(0.0, 1.0, 1.0, 100.0));
  for (double a : {1e-2, 2e-2, 4e-2}) {
    const double expansion = c * (1.0 + a - a * a / 2);
    CHECK(std::fabs(adiabatic_energy(a, 1.0, 1.0, 100.0) - expansion) < c * a * a * a);
    CHECK(sudden_energy(a, 1.0, 1.0, 100.0) - adiabatic_energy(a, 1.0, 1.0, 100.0) ==
          doctest::Approx(c * a * a / 2).epsilon(1.5 * a));
  }
  // (100/2pi)(1.5 - sqrt 2), evaluated with mpmath.
  CHECK(sudden_energy(0.5, 1.0, 1.0, 100.0) - adiabatic_energy(0.5, 1.0, 1.0, 100.0) ==
        doctest::Approx(1.3653335598566486).epsilon(1e-14));
  CHECK(code_of([] { adiabatic_energy(-0.6, 1.0, 1.0, 100.0); }) == ErrorCode::instability);
  CHECK(code_of([] { sudden_energy(-0.6, 1.0, 1.0, 100.0); }) == ErrorCode::instability);
}

TEST_CASE("perturbative residual of the linear ramp") {
  const double egs = ground_state_scale(0.1, 1.0, 1.0, 100.0);
  CHECK(egs == doctest::Approx(100.0 / (2 * pi) * 0.01 / 2));
  const double t0 = tau0(1.0, 1.0);
  CHECK(t0 == 0.5);
  CHECK(perturbative_residual_linear(0.1, t0, 1.0, 1.0, 100.0).value / egs == doctest::Approx(std::log(2.0)));
  const auto early = perturbative_residual_linear(0.1, 1e-4 * t0, 1.0, 1.0, 100.0);
  CHECK(early.value / egs == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(early.short_time == doctest::Approx(early.value).epsilon(1e-8));
  const auto late = perturbative_residual_linear(0.1, 1e4 * t0, 1.0, 1.0, 100.0);
  CHECK(late.long_time == doctest::Approx(late.value).epsilon(1e-8));
  // ln(tau)/tau^2 decay.
  const double r1 = perturbative_residual_linear(0.1, 1e3, 1.0, 1.0, 100.0).value;
  const double r2 = perturbative_residual_linear(0.1, 1e4, 1.0, 1.0, 100.0).value;
  CHECK(r1 / r2 == doctest::Approx(100.0 * std::log(2e3) / std::log(2e4)).epsilon(1e-6));
  CHECK_FALSE(early.advisory);
  CHECK(perturbative_residual_linear(1.0, 1.0, 1.0, 1.0, 100.0).advisory);
  CHECK(code_of([] { perturbative_residual_linear(0.1, 0.0, 1.0, 1.0, 100.0); }) == ErrorCode::domain);
}

TEST_CASE("inverse polynomial residual") {
  CHECK(residual_inverse_poly(0.0, 1.0, 1.0, 100.0) == 0.0);
  const double r1 = residual_inverse_poly(0.1, 1.0, 1.0, 100.0);
  CHECK(residual_inverse_poly(0.2, 1.0, 1.0, 100.0) == doctest::Approx(4.0 * r1).epsilon(1e-15));
  // 0.005 (100/2pi) E1(2pi/100), E1 from mpmath.
  CHECK(r1 == doctest::Approx(0.17920337034884).epsilon(1e-12));
}

TEST_CASE("sine-Gordon mean energy") {
  const double sigma = 1.3;
  CHECK(sg_mean_energy(2.0, 0.0, 0.0, sigma, 0.0, 1.0, 1.0, 100.0) ==
        doctest::Approx(sg_adiabatic_energy(1.0 / (sigma * sigma), 1.0, 100.0)).epsilon(1e-15));
  const auto p4 = make_polynomial_schedule(GammaKind::p4, 1.0, std::sqrt(10.0), 1.0);
  const GammaValue end = sta_gamma(p4, 1.0);
  const double e = sg_mean_energy(end.gamma, end.gamma_dot, end.gamma_ddot, end.gamma, end.gamma_dot, 1.0, 1.0, 100.0);
  CHECK(e == doctest::Approx(sg_adiabatic_energy(0.1, 1.0, 100.0)).epsilon(1e-12));
  const GammaValue mid = sta_gamma(p4, 0.5);
  CHECK(sg_mean_energy(mid.gamma, mid.gamma_dot, mid.gamma_ddot, mid.gamma, mid.gamma_dot, 1.0, 1.0, 100.0) !=
        doctest::Approx(sg_adiabatic_energy(1.0 / (mid.gamma * mid.gamma), 1.0, 100.0)));
}

TEST_CASE("adiabatic time bound") {
  CHECK(adiabatic_time_bound(0.5, 100.0, 1.0, 1) == doctest::Approx(50.0 / pi));
  CHECK(adiabatic_time_bound(0.5, 100.0, 1.0, 4) == doctest::Approx(12.5 / pi));
  CHECK(adiabatic_time_bound(0.0, 100.0, 1.0, 1) == 0.0);
  CHECK(code_of([] { adiabatic_time_bound(0.5, 100.0, 1.0, 0); }) == ErrorCode::domain);
}

TEST_CASE("continuum quadrature") {
  const double v = continuum_mode_integral([](double p) { return p; }, 1.0, 100.0, 1e-300);
  CHECK(v == doctest::Approx(2.0 * 100.0 / (2 * pi)).epsilon(1e-12));
  // (50/pi) E1(0.2), mpmath.
  const double e1 = continuum_mode_integral([](double p) { return 1.0 / p; }, 2.0, 50.0, 0.1);
  CHECK(e1 == doctest::Approx(19.459087778086236).epsilon(1e-9));
}

TEST_CASE("grid energies against the continuum") {
  const ModeGrid grid = make_mode_grid(100.0, 1.0);
  const auto s = make_coupling_schedule(CouplingKind::linear, 0.5, 1e-6);
  const auto trajs = solve_grid(grid, s, {0.0, 1e-6});
  const auto rep = energy_report(trajs, grid, coupling_omega_sq(s), 1e-6, kPureState, "sudden");
  CHECK(std::fabs(rep.sudden_energy / sudden_energy(0.5, 1.0, 1.0, 100.0) - 1.0) < 5e-3);
  CHECK(std::fabs(rep.adiabatic_energy / adiabatic_energy(0.5, 1.0, 1.0, 100.0) - 1.0) < 5e-3);
  CHECK(std::fabs(rep.mean_energy / sudden_energy(0.5, 1.0, 1.0, 100.0) - 1.0) < 1e-2);
  CHECK(rep.residual == doctest::Approx(rep.mean_energy - rep.adiabatic_energy).epsilon(1e-12));
  CHECK(rep.mean_energy == doctest::Approx(mean_energy(trajs, grid, coupling_omega_sq(s), 1e-6)).epsilon(1e-15));
}

TEST_CASE("no quench conserves the initial energy") {
  const ModeGrid grid = make_mode_grid(50.0, 1.0);
  const auto s = make_coupling_schedule(CouplingKind::linear, 0.0, 5.0);
  const auto w2 = coupling_omega_sq(s);
  const auto trajs = solve_grid(grid, s, {0.0, 1.0, 2.5, 5.0});
  const double e0 = mean_energy(trajs, grid, w2, 0.0);
  for (double t : {1.0, 2.5, 5.0}) CHECK(mean_energy(trajs, grid, w2, t) == doctest::Approx(e0).epsilon(1e-10));
  const auto rep = energy_report(trajs, grid, w2, 5.0, kPureState, "none");
  CHECK(std::fabs(rep.residual) < 1e-10);
}

TEST_CASE("thermal occupation enters every mode") {
  const ModeGrid grid = make_mode_grid(20.0, 1.0);
  const auto s = make_coupling_schedule(CouplingKind::constant, 0.0, 1.0);
  const auto trajs = solve_grid(grid, s, {0.0, 1.0});
  const double beta0 = 0.7;
  double expected = 0.0;
  for (std::size_t n = 1; n <= grid.n_max; ++n) {
    const double p = grid.momentum(n);
    expected += 2.0 * p * (bose_occupation(p, beta0) + 0.5) * grid.weight(n);
  }
  CHECK(mean_energy(trajs, grid, coupling_omega_sq(s), 1.0, beta0) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("incomplete grid is rejected") {
  const ModeGrid grid = make_mode_grid(20.0, 1.0);
  const auto s = make_coupling_schedule(CouplingKind::linear, 0.2, 1.0);
  auto trajs = solve_grid(grid, s, {0.0, 1.0});
  const auto w2 = coupling_omega_sq(s);
  CHECK(code_of([&] { mean_energy(trajs, grid, w2, 0.5); }) == ErrorCode::incomplete_grid);
  trajs.pop_back();
  CHECK(code_of([&] { mean_energy(trajs, grid, w2, 1.0); }) == ErrorCode::incomplete_grid);
}
