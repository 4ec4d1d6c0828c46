#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>

#include "tllsta/ermakov.hpp"
#include "tllsta/model.hpp"

namespace tll {

// Per-mode mean energy for an occupation-diagonal initial state:
// [omega0p/(2 gamma^2) + (Omega^2 gamma^2 + gamma_dot^2)/(2 omega0p)] (n_b + 1/2).
double mode_energy(double gamma, double gamma_dot, double omega0p, double omega_sq, double n_b);

// Same quantity written through the Ermakov equation:
// [omega0p/gamma^2 - (gamma_ddot gamma - gamma_dot^2)/(2 omega0p)] (n_b + 1/2).
double mode_energy_ddot_form(double gamma, double gamma_dot, double gamma_ddot, double omega0p,
                             double n_b);

// mode_energy - Omega (n_b + 1/2), evaluated as
// (n_b + 1/2)/(2 omega0p) [(Omega gamma - omega0p/gamma)^2 + gamma_dot^2] (never negative).
double mode_residual(double gamma, double gamma_dot, double omega0p, double omega_sq, double n_b);

inline constexpr double kPureState = std::numeric_limits<double>::infinity();

// 2 sum_{p>0} mode_energy(p) exp(-r0 p) at the sample with time t. trajs[i]
// must hold mode n = i + 1 of the grid. Compensated summation in ascending p.
// Throws incomplete_grid when a mode is missing or has no sample at t.
double mean_energy(std::span<const ErmakovTrajectory> trajs, const ModeGrid& grid,
                   const OmegaSq& omega_sq, double t, double beta0 = kPureState);

// Closed-form continuum limits with lower momentum limit 0.
double adiabatic_energy(double alpha, double v_f, double r0, double length_l);
double sudden_energy(double alpha, double v_f, double r0, double length_l);

// Characteristic scales of the linear ramp: tau0 = r0/(2 v_f) and
// E_gs = (L/2pi) alpha^2 / (2 v_f r0^2).
double tau0(double r0, double v_f);
double ground_state_scale(double alpha, double v_f, double r0, double length_l);

struct PerturbativeResidual {
  double value = 0.0;       // E_gs (tau0/tau_q)^2 ln[1 + (tau_q/tau0)^2]
  double short_time = 0.0;  // E_gs [1 - (tau_q/tau0)^2 / 2]
  double long_time = 0.0;   // 2 E_gs (tau0/tau_q)^2 ln(tau_q/tau0)
  bool advisory = false;    // alpha not small against v_f/2
};

PerturbativeResidual perturbative_residual_linear(double alpha, double tau_q, double v_f,
                                                  double r0, double length_l);

// (B^2/2)(L/2pi)(1/v_f) Gamma(0, 2 pi r0 / L); infrared limit 2 pi/L.
double residual_inverse_poly(double b_coeff, double v_f, double r0, double length_l);

// Small-quench companion E_gs (tau0/tau_q)^2 Gamma(0, 2 pi r0 / L).
double residual_inverse_poly_perturbative(double alpha, double tau_q, double v_f, double r0,
                                          double length_l);

// Semiclassical sine-Gordon mean energy, infrared limit 2 pi/L:
// (L/2pi){v_f/(sigma^2 r0^2)
//   - (sigma^2/v_f)[gamma''/(2 gamma) + (gamma'/gamma)(sigma'/sigma) - 3/2 (gamma'/gamma)^2] Gamma(0, 2 pi r0/L)}.
double sg_mean_energy(double gamma, double gamma_dot, double gamma_ddot, double sigma,
                      double sigma_dot, double v_f, double r0, double length_l);

// (L/2pi) v_s / r0^2.
double sg_adiabatic_energy(double v_s, double r0, double length_l);

// L alpha / (n pi v_f^2): a necessary scale, not a sufficient adiabatic time.
double adiabatic_time_bound(double alpha, double length_l, double v_f, int n);

// 2 (L/2pi) \int_{p_min}^\infty f(p) exp(-r0 p) dp by adaptive Gauss-Kronrod
// quadrature: the continuum counterpart of a grid sum 2 sum_p f(p) exp(-r0 p).
double continuum_mode_integral(const std::function<double(double p)>& f, double r0,
                               double length_l, double p_min, double rel_tol = 1.0e-10);

struct EnergyReport {
  double mean_energy = 0.0;
  double adiabatic_energy = 0.0;  // 2 sum Omega (n_b + 1/2) e^{-r0 p}
  double sudden_energy = 0.0;     // gamma = 1, gamma_dot = 0 at the final Omega
  double residual = 0.0;          // 2 sum mode_residual e^{-r0 p}
  double tau_q = 0.0;
  std::string protocol;
  ModeGrid grid;
  double beta0 = kPureState;
};

// All grid sums are taken at the sample with time t (usually tau_q).
EnergyReport energy_report(std::span<const ErmakovTrajectory> trajs, const ModeGrid& grid,
                           const OmegaSq& omega_sq, double t, double beta0,
                           const std::string& protocol);

}  // namespace tll
