#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "tllsta/error.hpp"
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

// Central-difference oracle for the analytic derivatives.
template <typename F>
double derivative(F f, double t, double h) {
  return (f(t + h) - f(t - h)) / (2 * h);
}

}  // namespace

TEST_CASE("polynomial ramps") {
  CHECK(poly5(0.0) == 0.0);
  CHECK(poly5(1.0) == doctest::Approx(1.0));
  CHECK(poly5(0.5) == doctest::Approx(0.5));
  for (double s : {0.0, 1.0}) {
    CHECK(poly5_d1(s) == doctest::Approx(0.0));
    CHECK(poly5_d2(s) == doctest::Approx(0.0));
    CHECK(poly4_d2(s) == doctest::Approx(0.0));
  }
  CHECK(poly4(1.0) == doctest::Approx(1.0));
  CHECK(poly4_d1(1.0) == doctest::Approx(0.0));
  CHECK(poly4_d1(0.0) == doctest::Approx(2.0));
  for (double s = 0.0; s <= 1.0; s += 0.01) {
    CHECK(poly4_d2(s) <= 1e-15);
    CHECK(poly5(s) + poly5(1 - s) == doctest::Approx(1.0));
    CHECK(poly5_d1(s) == doctest::Approx(derivative(poly5, s, 1e-6)).epsilon(1e-7));
    CHECK(poly4_d1(s) == doctest::Approx(derivative(poly4, s, 1e-6)).epsilon(1e-7));
  }
}

TEST_CASE("coupling schedules") {
  const double tau = 4.0;
  const auto lin = make_coupling_schedule(CouplingKind::linear, 0.5, tau);
  CHECK(coupling_at(lin, tau).value == doctest::Approx(0.5));
  CHECK(coupling_at(lin, 0.0).value == 0.0);
  const auto p5 = make_coupling_schedule(CouplingKind::poly5, 0.8, tau);
  CHECK(coupling_at(p5, tau / 2).value == doctest::Approx(0.4));
  const auto inv = make_coupling_schedule(CouplingKind::inverse_poly, 7.5, tau);
  CHECK(inv.b_coeff == doctest::Approx(-1.0 / (2 * tau)).epsilon(1e-14));
  CHECK(coupling_at(inv, tau).value == doctest::Approx(7.5).epsilon(1e-13));
  const auto con = make_coupling_schedule(CouplingKind::constant, 0.3, tau);
  CHECK(coupling_at(con, 1.0).value == 0.3);
  CHECK(coupling_at(con, 1.0).rate == 0.0);

  CHECK(code_of([&] { coupling_at(lin, tau * 1.01); }) == ErrorCode::domain);
  CHECK(code_of([&] { coupling_at(lin, -0.1); }) == ErrorCode::domain);
  CHECK(code_of([] { make_coupling_schedule(CouplingKind::linear, -0.6, 1.0); }) == ErrorCode::instability);
  CHECK(code_of([] { make_coupling_schedule(CouplingKind::linear, 0.5, 0.0); }) == ErrorCode::config);
  CHECK(code_of([] { coupling_kind_from_string("cubic"); }) == ErrorCode::config);
  CHECK(coupling_kind_from_string("inverse_poly") == CouplingKind::inverse_poly);
  CHECK(std::string(to_string(CouplingKind::poly5)) == "poly5");
}

TEST_CASE("coupling derivatives against finite differences") {
  const double tau = 2.0;
  for (auto kind : {CouplingKind::linear, CouplingKind::poly5, CouplingKind::inverse_poly}) {
    const auto s = make_coupling_schedule(kind, 0.7, tau);
    for (double t = 0.1; t < tau - 0.05; t += 0.1) {
      auto value = [&](double x) { return coupling_at(s, x).value; };
      auto rate = [&](double x) { return coupling_at(s, x).rate; };
      CHECK(coupling_at(s, t).rate == doctest::Approx(derivative(value, t, 1e-5)).epsilon(1e-7));
      CHECK(coupling_at(s, t).accel == doctest::Approx(derivative(rate, t, 1e-5)).epsilon(1e-6));
    }
  }
}

TEST_CASE("Omega squared and initial slope") {
  const auto s = make_coupling_schedule(CouplingKind::linear, 0.5, 10.0, 1.0);
  const auto w2 = coupling_omega_sq(s);
  CHECK(w2(2.0, 10.0) == doctest::Approx(4.0 * 2.0));
  CHECK(w2(2.0, 0.0) == doctest::Approx(4.0));
  CHECK(coupling_gamma_dot0(s) == 0.0);
  const auto inv = make_coupling_schedule(CouplingKind::inverse_poly, -0.2, 1.0, 1.0);
  CHECK(coupling_gamma_dot0(inv) == inv.b_coeff);
  CHECK(inv.b_coeff > 0.0);
}

TEST_CASE("inverse polynomial coefficient") {
  CHECK(inverse_poly_b(0.0, 3.0, 1.0) == 0.0);
  CHECK(inverse_poly_b(15 * pi, 3.0, 1.0) == doctest::Approx(-1.0 / 6.0).epsilon(1e-14));
  CHECK(std::fabs(inverse_poly_b(2.0, 1e12, 1.0)) < 1e-12);
  CHECK(code_of([] { inverse_poly_b(-pi, 1.0, 1.0); }) == ErrorCode::domain);
}

TEST_CASE("polynomial gamma schedules") {
  const auto p5 = make_polynomial_schedule(GammaKind::p5, 1.0, 2.0, 3.0);
  for (double t : {0.0, 3.0}) {
    const GammaValue g = sta_gamma(p5, t);
    CHECK(std::fabs(g.gamma_dot) < 1e-14);
    CHECK(std::fabs(g.gamma_ddot) < 1e-13);
  }
  const auto p4 = make_polynomial_schedule(GammaKind::p4, 1.0, std::sqrt(10.0), 1.0);
  CHECK(std::fabs(sta_gamma(p4, 0.0).gamma_ddot) < 1e-13);
  CHECK(std::fabs(sta_gamma(p4, 1.0).gamma_ddot) < 1e-13);
  CHECK(std::fabs(sta_gamma(p4, 1.0).gamma_dot) < 1e-13);
  CHECK(sta_gamma(p4, 0.0).gamma_dot > 0.0);
  for (double t = 0.0; t <= 1.0; t += 0.001) {
    const GammaValue g = sta_gamma(p4, t);
    CHECK(g.gamma_ddot / g.gamma <= 1e-14);
    CHECK(lattice_potential_from_gamma(g.gamma, g.gamma_ddot, 1.0, 1.0 / pi) >= -1e-14);
    CHECK(sine_gordon_gap(g.gamma, g.gamma_dot, g.gamma_ddot, g.gamma, g.gamma_dot) >= -1e-14);
  }
  CHECK(code_of([] { make_polynomial_schedule(GammaKind::p4, -1.0, 1.0, 1.0); }) == ErrorCode::domain);
}

TEST_CASE("sine-Gordon gap") {
  CHECK(sine_gordon_gap(1.3, 0.0, 0.0, 0.7, 0.0) == 0.0);
  CHECK(sine_gordon_gap(2.0, 0.0, -4.0, 2.0, 0.0) == doctest::Approx(1.0));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 500; ++i) {
    const double g = 0.2 + std::fabs(u(rng));
    const double gd = u(rng);
    const double gdd = u(rng);
    const double k = g * g;
    const double kd = 2 * g * gd;
    const double kdd = 2 * gd * gd + 2 * g * gdd;
    CHECK(sine_gordon_gap(g, gd, gdd, g, gd) == doctest::Approx(sine_gordon_gap_from_k(k, kd, kdd)).epsilon(1e-12));
    CHECK(sine_gordon_gap(g, gd, gdd, g, gd) == doctest::Approx(-gdd / (2 * g)).epsilon(1e-12));
  }
}

TEST_CASE("sine-Gordon spectrum and lattice potential") {
  CHECK(sg_spectrum(0.3, 1.5, 0.0, 1.0) == doctest::Approx(0.3 / (1.5 * 1.5)));
  CHECK(sg_spectrum(1e-9, 1.0, -4.0, 1.0) == doctest::Approx(2.0));
  CHECK(code_of([] { sg_spectrum(1e-3, 1.0, 1.0, 1.0); }) == ErrorCode::instability);
  CHECK(lattice_potential_from_gamma(1.2, 0.0, 1.0, 0.3) == 0.0);
  const double rho0 = 0.3;
  CHECK(lattice_potential_from_gamma(1.0, -4 * pi * rho0, 1.0, rho0) == doctest::Approx(1.0));
}

TEST_CASE("accidental shortcut under a constant potential") {
  const AccidentalConstant still = accidental_sta_constant(5.0, 1.0 / pi, 1.0, 0.5, 0.0);
  CHECK(still.t_n(0) == 0.0);
  CHECK(still.t_n(1) == doctest::Approx(pi / still.w));
  const double w = std::sqrt(4 * pi * 1.0 * (1.0 / pi) * 5.0);
  const AccidentalConstant diag = accidental_sta_constant(5.0, 1.0 / pi, 1.0, 0.5, 0.5 * w);
  CHECK(diag.t_n(0) == doctest::Approx(pi / 4 / w));

  // V0 = 10 E_F, K(0) = 1/4, gamma_dot0 = 10.
  const AccidentalConstant f3 = accidental_sta_constant(5.0, 1.0 / pi, 1.0, 0.5, 10.0);
  CHECK(f3.w == doctest::Approx(std::sqrt(20.0)).epsilon(1e-15));
  CHECK(f3.t_n(0) == doctest::Approx(0.302049929383143).epsilon(1e-13));
  CHECK(f3.amplitude() == doctest::Approx(std::sqrt(5.25)).epsilon(1e-15));
  for (int n = 0; n < 4; ++n) CHECK(std::fabs(f3.at(f3.t_n(n)).gamma_dot) < 1e-10);
  for (double t = 0; t < 2; t += 0.1) {
    const GammaValue g = f3.at(t);
    CHECK(g.gamma_ddot + w * w * g.gamma == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
  }
  CHECK(code_of([] { accidental_sta_constant(0.0, 1.0, 1.0, 1.0, 1.0); }) == ErrorCode::domain);
  CHECK(code_of([] { make_constant_potential_schedule(5.0, 1.0 / pi, 1.0, 0.5, 0.0, 0); }) ==
        ErrorCode::degenerate_protocol);
  const GammaSchedule s = make_constant_potential_schedule(5.0, 1.0 / pi, 1.0, 0.5, 10.0, 1);
  CHECK(s.tau_q == doctest::Approx(f3.t_n(1)));
  CHECK(sta_gamma(s, 0.7).gamma == doctest::Approx(f3.at(0.7).gamma));
}

TEST_CASE("accidental shortcut under a linear potential") {
  // Root of gamma_dot recomputed independently at 40 digits with mpmath.
  const AccidentalLinear al = accidental_sta_linear(3.0, 1.0 / pi, 1.0, 0.5);
  CHECK(al.d == doctest::Approx(12.0));
  CHECK(al.tau_q == doctest::Approx(1.28795885659646).epsilon(1e-12));
  CHECK(al.gamma_final == doctest::Approx(-0.348725274378414).epsilon(1e-12));
  CHECK(al.k_final == doctest::Approx(0.1216093169903).epsilon(1e-11));
  CHECK(al.k_final < 0.25);
  CHECK(al.residual < 1e-10);
  CHECK(al.crossed_zero);
  CHECK(al.zero_crossing == doctest::Approx(0.867619460643659).epsilon(1e-11));
  const GammaValue g0 = al.at(0.0);
  CHECK(g0.gamma == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::fabs(g0.gamma_dot) < 1e-14);
  for (double t = 0.05; t < al.tau_q; t += 0.05) {
    const GammaValue g = al.at(t);
    CHECK(std::fabs(g.gamma_ddot + al.d * t * g.gamma) < 1e-12);
    auto gamma = [&](double x) { return al.at(x).gamma; };
    CHECK(g.gamma_dot == doctest::Approx(derivative(gamma, t, 1e-6)).epsilon(1e-7));
  }
  CHECK(code_of([] { accidental_sta_linear(0.0, 1.0, 1.0, 1.0); }) == ErrorCode::domain);
}
