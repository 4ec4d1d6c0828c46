#include "tllsta/observables.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "tllsta/error.hpp"
#include "tllsta/specfun.hpp"
#include "tllsta/summation.hpp"

namespace tll {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t sample_index(const ErmakovTrajectory& traj, double t) {
  const double slack = 1.0e-12 * std::max(1.0, std::fabs(t));
  for (std::size_t i = traj.size(); i-- > 0;) {
    if (std::fabs(traj.times[i] - t) <= slack) return i;
  }
  fail(ErrorCode::incomplete_grid,
       "trajectory for p = " + std::to_string(traj.p) + " has no sample at t = " + std::to_string(t),
       t);
}

void check_grid(std::span<const ErmakovTrajectory> trajs, const ModeGrid& grid) {
  if (trajs.size() != grid.n_max) {
    fail(ErrorCode::incomplete_grid, "expected " + std::to_string(grid.n_max) +
                                         " mode trajectories, got " + std::to_string(trajs.size()));
  }
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const double p = grid.momentum(i + 1);
    if (std::fabs(trajs[i].p - p) > 1.0e-12 * p) {
      fail(ErrorCode::incomplete_grid, "mode " + std::to_string(i + 1) + " missing from the grid");
    }
  }
}
}  // namespace

double mode_energy(double gamma, double gamma_dot, double omega0p, double omega_sq, double n_b) {
  const double g2 = gamma * gamma;
  return (omega0p / (2.0 * g2) + (omega_sq * g2 + gamma_dot * gamma_dot) / (2.0 * omega0p)) *
         (n_b + 0.5);
}

double mode_energy_ddot_form(double gamma, double gamma_dot, double gamma_ddot, double omega0p,
                             double n_b) {
  return (omega0p / (gamma * gamma) -
          (gamma_ddot * gamma - gamma_dot * gamma_dot) / (2.0 * omega0p)) *
         (n_b + 0.5);
}

double mode_residual(double gamma, double gamma_dot, double omega0p, double omega_sq, double n_b) {
  require(omega_sq >= 0.0, ErrorCode::instability, "mode_residual: Omega^2 < 0");
  const double d = std::sqrt(omega_sq) * gamma - omega0p / gamma;
  return (n_b + 0.5) / (2.0 * omega0p) * (d * d + gamma_dot * gamma_dot);
}

double mean_energy(std::span<const ErmakovTrajectory> trajs, const ModeGrid& grid,
                   const OmegaSq& omega_sq, double t, double beta0) {
  check_grid(trajs, grid);
  CompensatedSum sum;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const ErmakovTrajectory& tr = trajs[i];
    const std::size_t k = sample_index(tr, t);
    const double n_b = bose_occupation(tr.omega0p, beta0);
    sum.add(2.0 * mode_energy(tr.gamma[k], tr.gamma_dot[k], tr.omega0p, omega_sq(tr.p, t), n_b) *
            grid.weight(i + 1));
  }
  return sum.value();
}

double adiabatic_energy(double alpha, double v_f, double r0, double length_l) {
  const double radicand = v_f * (v_f + 2.0 * alpha);
  if (!(radicand > 0.0)) fail(ErrorCode::instability, "adiabatic_energy: v_f (v_f + 2 alpha) <= 0");
  return length_l / kTwoPi * std::sqrt(radicand) / (r0 * r0);
}

double sudden_energy(double alpha, double v_f, double r0, double length_l) {
  if (!(v_f * (v_f + 2.0 * alpha) > 0.0)) {
    fail(ErrorCode::instability, "sudden_energy: v_f (v_f + 2 alpha) <= 0");
  }
  return length_l / kTwoPi * (v_f + alpha) / (r0 * r0);
}

double tau0(double r0, double v_f) { return r0 / (2.0 * v_f); }

double ground_state_scale(double alpha, double v_f, double r0, double length_l) {
  return length_l / kTwoPi * alpha * alpha / (2.0 * v_f * r0 * r0);
}

PerturbativeResidual perturbative_residual_linear(double alpha, double tau_q, double v_f,
                                                  double r0, double length_l) {
  if (!(tau_q > 0.0)) fail(ErrorCode::domain, "perturbative_residual_linear: tau_q must be positive");
  const double e_gs = ground_state_scale(alpha, v_f, r0, length_l);
  const double x = tau_q / tau0(r0, v_f);
  PerturbativeResidual out;
  out.value = e_gs * std::log1p(x * x) / (x * x);
  out.short_time = e_gs * (1.0 - 0.5 * x * x);
  out.long_time = 2.0 * e_gs * std::log(x) / (x * x);
  out.advisory = std::fabs(alpha) > 0.1 * v_f;
  return out;
}

double residual_inverse_poly(double b_coeff, double v_f, double r0, double length_l) {
  return 0.5 * b_coeff * b_coeff * length_l / kTwoPi / v_f * gamma0(kTwoPi * r0 / length_l);
}

double residual_inverse_poly_perturbative(double alpha, double tau_q, double v_f, double r0,
                                          double length_l) {
  const double ratio = tau0(r0, v_f) / tau_q;
  return ground_state_scale(alpha, v_f, r0, length_l) * ratio * ratio *
         gamma0(kTwoPi * r0 / length_l);
}

double sg_mean_energy(double gamma, double gamma_dot, double gamma_ddot, double sigma,
                      double sigma_dot, double v_f, double r0, double length_l) {
  require(gamma > 0.0 && sigma > 0.0, ErrorCode::domain, "sg_mean_energy: gamma and sigma must be positive");
  const double s2 = sigma * sigma;
  const double rg = gamma_dot / gamma;
  const double bracket = 0.5 * gamma_ddot / gamma + rg * sigma_dot / sigma - 1.5 * rg * rg;
  const double first = v_f / (s2 * r0 * r0);
  if (bracket == 0.0) return length_l / kTwoPi * first;
  return length_l / kTwoPi * (first - s2 / v_f * bracket * gamma0(kTwoPi * r0 / length_l));
}

double sg_adiabatic_energy(double v_s, double r0, double length_l) {
  return length_l / kTwoPi * v_s / (r0 * r0);
}

double adiabatic_time_bound(double alpha, double length_l, double v_f, int n) {
  require(n >= 1, ErrorCode::domain, "adiabatic_time_bound: n must be >= 1");
  return length_l * alpha / (n * std::numbers::pi * v_f * v_f);
}

double continuum_mode_integral(const std::function<double(double p)>& f, double r0,
                               double length_l, double p_min, double rel_tol) {
  require(p_min > 0.0, ErrorCode::domain, "continuum_mode_integral: p_min must be positive");
  // Substitute p = p_min + x / r0 so the weight becomes exp(-x) on [0, inf).
  auto integrand = [&](double x) {
    const double p = p_min + x / r0;
    return f(p) * std::exp(-x);
  };
  // exp(-45) is below double resolution of the integral.
  constexpr double kUpper = 45.0;
  double error = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, kUpper, 15, rel_tol, &error);
  return 2.0 * length_l / kTwoPi * std::exp(-r0 * p_min) * integral / r0;
}

EnergyReport energy_report(std::span<const ErmakovTrajectory> trajs, const ModeGrid& grid,
                           const OmegaSq& omega_sq, double t, double beta0,
                           const std::string& protocol) {
  check_grid(trajs, grid);
  CompensatedSum mean, adiabatic, sudden, residual;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const ErmakovTrajectory& tr = trajs[i];
    const std::size_t k = sample_index(tr, t);
    const double n_b = bose_occupation(tr.omega0p, beta0);
    const double w2 = omega_sq(tr.p, t);
    const double weight = 2.0 * grid.weight(i + 1);
    mean.add(weight * mode_energy(tr.gamma[k], tr.gamma_dot[k], tr.omega0p, w2, n_b));
    adiabatic.add(weight * std::sqrt(w2) * (n_b + 0.5));
    sudden.add(weight * mode_energy(1.0, 0.0, tr.omega0p, w2, n_b));
    residual.add(weight * mode_residual(tr.gamma[k], tr.gamma_dot[k], tr.omega0p, w2, n_b));
  }
  EnergyReport r;
  r.mean_energy = mean.value();
  r.adiabatic_energy = adiabatic.value();
  r.sudden_energy = sudden.value();
  r.residual = residual.value();
  r.tau_q = t;
  r.protocol = protocol;
  r.grid = grid;
  r.beta0 = beta0;
  return r;
}

}  // namespace tll
