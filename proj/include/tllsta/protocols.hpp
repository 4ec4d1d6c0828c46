#pragma once

#include <string>
#include <vector>

#include "tllsta/ermakov.hpp"

namespace tll {

// Fifth- and fourth-order polynomial ramps on s in [0, 1].
double poly5(double s);
double poly5_d1(double s);
double poly5_d2(double s);
double poly4(double s);
double poly4_d1(double s);
double poly4_d2(double s);

enum class CouplingKind { constant, linear, poly5, inverse_poly };

const char* to_string(CouplingKind kind) noexcept;
CouplingKind coupling_kind_from_string(const std::string& name);

// Time-dependent equal coupling c(t) = g_{2,4}(t)/2pi (velocity units).
// Built only through make_coupling_schedule; fields are read-only by convention.
struct CouplingSchedule {
  CouplingKind kind = CouplingKind::constant;
  double alpha = 0.0;    // target c(tau_q)
  double tau_q = 1.0;
  double v_f = 1.0;
  double b_coeff = 0.0;  // inverse_poly only
};

// alpha is the final value of c. For inverse_poly, B is derived from it via
// inverse_poly_b(2 pi alpha, tau_q, v_f). Throws config on invalid values and
// instability when v_f + 2 c(t) > 0 fails somewhere on [0, tau_q].
CouplingSchedule make_coupling_schedule(CouplingKind kind, double alpha, double tau_q,
                                        double v_f = 1.0);

struct CouplingValue {
  double value = 0.0;
  double rate = 0.0;
  double accel = 0.0;
};

// Domain error outside [0, tau_q] (a relative slack of 1e-12 is clamped).
CouplingValue coupling_at(const CouplingSchedule& s, double t);

// Omega^2(p,t) = v_f [v_f + 2 c(t)] p^2 and omega0p = v_f |p|.
OmegaSq coupling_omega_sq(const CouplingSchedule& s);

// Initial gamma_dot of the schedule: B for inverse_poly, 0 otherwise.
double coupling_gamma_dot0(const CouplingSchedule& s);

// B = [-1 + (g_target/(pi v_f) + 1)^(-1/4)] / tau_q.
double inverse_poly_b(double g_target, double tau_q, double v_f);

enum class GammaKind { p4, p5, constant_potential, linear_potential };

const char* to_string(GammaKind kind) noexcept;
GammaKind gamma_kind_from_string(const std::string& name);

struct GammaValue {
  double gamma = 0.0;
  double gamma_dot = 0.0;
  double gamma_ddot = 0.0;
};

struct GammaSchedule {
  GammaKind kind = GammaKind::p5;
  double gamma0 = 1.0;
  double gamma_f = 1.0;
  double tau_q = 1.0;
  double v_f = 1.0;
  double rho0 = 0.0;        // potentials only
  double v0 = 0.0;          // constant_potential
  double alpha_ramp = 0.0;  // linear_potential
  double gamma_dot0 = 0.0;  // constant_potential
};

GammaSchedule make_polynomial_schedule(GammaKind kind, double gamma0, double gamma_f,
                                       double tau_q, double v_f = 1.0);

// gamma, gamma_dot, gamma_ddot at t in [0, tau_q].
GammaValue sta_gamma(const GammaSchedule& s, double t);

// (sigma/gamma)^2 [(gamma'/gamma)^2 - gamma''/(2 gamma) - (gamma'/gamma)(sigma'/sigma)].
double sine_gordon_gap(double gamma, double gamma_dot, double gamma_ddot, double sigma,
                       double sigma_dot);

// Equal-coupling form in terms of K = gamma^2: -K''/(4K) + (K'/K)^2/8.
double sine_gordon_gap_from_k(double k, double k_dot, double k_ddot);

// sqrt(p^2 v_f^2 / gamma^4 - gamma''/gamma); instability when the radicand is negative.
double sg_spectrum(double p, double gamma, double gamma_ddot, double v_f);

// V0 = -gamma'' / (4 pi v_f rho0 gamma).
double lattice_potential_from_gamma(double gamma, double gamma_ddot, double v_f, double rho0);

// gamma'' + 4 pi v_f rho0 V0 gamma = 0 with constant V0 > 0.
struct AccidentalConstant {
  double w = 0.0;  // sqrt(4 pi v_f rho0 V0)
  double gamma0 = 1.0;
  double gamma_dot0 = 0.0;

  GammaValue at(double t) const;
  // Times where gamma_dot vanishes: [arctan(gamma_dot0/(gamma0 w)) + n pi] / w.
  double t_n(int n) const;
  double amplitude() const;  // sqrt(gamma0^2 + (gamma_dot0/w)^2)
};

AccidentalConstant accidental_sta_constant(double v0, double rho0, double v_f, double gamma0,
                                           double gamma_dot0);

// gamma'' + d t gamma = 0 with d = 4 pi v_f alpha rho0, gamma(0) = gamma0,
// gamma_dot(0) = 0, solved by Airy functions of y = -d^(1/3) t.
struct AccidentalLinear {
  double d = 0.0;
  double gamma0 = 1.0;
  double tau_q = 0.0;           // first positive root of gamma_dot
  double gamma_final = 0.0;     // gamma(tau_q)
  double k_final = 0.0;         // gamma(tau_q)^2
  double residual = 0.0;        // |gamma_dot(tau_q)|
  double gamma_dot_max = 0.0;   // max |gamma_dot| on [0, tau_q]
  bool crossed_zero = false;    // gamma changed sign before tau_q
  double zero_crossing = 0.0;   // first zero of gamma (if crossed_zero)

  GammaValue at(double t) const;
};

// Throws root_not_found when gamma_dot has no sign change within ten
// oscillation scales 2 pi d^(-1/3).
AccidentalLinear accidental_sta_linear(double alpha_ramp, double rho0, double v_f, double gamma0);

GammaSchedule make_constant_potential_schedule(double v0, double rho0, double v_f, double gamma0,
                                               double gamma_dot0, int n = 0);
GammaSchedule make_linear_potential_schedule(double alpha_ramp, double rho0, double v_f,
                                             double gamma0);

}  // namespace tll
