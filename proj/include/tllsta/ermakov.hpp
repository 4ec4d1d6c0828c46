#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace tll {

enum class Method { numeric, pinney, airy, perturbative, wkb };

const char* to_string(Method method) noexcept;

// Per-mode solution of  gamma'' + Omega^2(p,t) gamma = omega0p^2 / gamma^3
// sampled on a time grid.
struct ErmakovTrajectory {
  double p = 0.0;
  double omega0p = 0.0;
  Method method = Method::numeric;
  std::vector<double> times;
  std::vector<double> gamma;
  std::vector<double> gamma_dot;
  std::vector<double> gamma_ddot;

  std::size_t size() const { return times.size(); }
};

// Omega^2(p, t).
using OmegaSq = std::function<double(double p, double t)>;

// |gamma_ddot gamma^3 + Omega^2 gamma^4 - omega0p^2| / omega0p^2 at sample i.
double ermakov_residual(const ErmakovTrajectory& traj, const OmegaSq& omega_sq, std::size_t i);
double max_ermakov_residual(const ErmakovTrajectory& traj, const OmegaSq& omega_sq);

inline constexpr double kDefaultTolerance = 1.0e-10;

struct NumericOptions {
  double tol = kDefaultTolerance;
  // Replace the integration by gamma = sqrt(omega0p / Omega) when
  // omega0p * (time span) exceeds wkb_threshold. Off by default.
  bool wkb_shortcut = false;
  double wkb_threshold = 1.0e5;
  std::size_t max_steps = 50'000'000;
};

// Adaptive Dormand-Prince 5(4) integration of the Ermakov equation as a
// first-order system for (gamma, gamma_dot). The local error per step is held
// below tol * min(h w, 1) with w = max(1, omega0p, |Omega(t0)|), i.e. tol per
// unit time for slow modes and per radian of phase for fast ones; gamma_dot
// is weighed in units of w. Steps are clipped to
// land on every requested sample, so no interpolation is involved. times must
// be strictly monotone (either direction); times[0] carries the initial data.
// gamma_ddot is evaluated from the equation itself.
//
// Throws singularity (detail: crossing time) when gamma is driven to zero,
// stiffness when the step size underflows or the step budget is exhausted,
// domain for bad arguments.
ErmakovTrajectory solve_ermakov_numeric(const OmegaSq& omega_sq, double p, double omega0p,
                                        double gamma0, double gamma_dot0,
                                        std::span<const double> times,
                                        const NumericOptions& options = {});

// Value and time derivative of a solution of x'' + Omega^2(t) x = 0.
struct HomogeneousValue {
  double value = 0.0;
  double derivative = 0.0;
};

using HomogeneousSolution = std::function<HomogeneousValue(double t)>;

// u(0) = gamma0, u'(0) = gamma_dot0, v(0) = 0, v'(0) = 1/gamma0, so that
// W[u,v] = u v' - v u' = 1.
struct HomogeneousPair {
  HomogeneousSolution u;
  HomogeneousSolution v;
};

double wronskian(const HomogeneousPair& pair, double t);

// u = gamma0 [r'(0) s - s'(0) r] / W[s,r],  v = [s(0) r - r(0) s] / (W[s,r] gamma0)
// with W[s,r] = s(0) r'(0) - r(0) s'(0). A nonzero gamma_dot0 adds the
// matching multiple of the initial-value combination. Throws
// linear_dependence when |W[s,r]| <= 1e-12.
HomogeneousPair build_uv(HomogeneousSolution r, HomogeneousSolution s, double gamma0,
                         double gamma_dot0 = 0.0, double t0 = 0.0);

struct PinneyState {
  double gamma = 0.0;
  double gamma_dot = 0.0;
  double gamma_ddot = 0.0;  // needs Omega^2; NaN from pinney_combine
};

using PinneySolution = std::function<PinneyState(double t)>;

// gamma = sqrt(u^2 + omega0p^2 v^2), gamma_dot = (u u' + omega0p^2 v v')/gamma.
PinneySolution pinney_combine(HomogeneousPair pair, double omega0p);

// Samples a homogeneous pair through the Pinney construction. gamma_ddot is
// obtained from the pair, (u'^2 + omega0p^2 v'^2 - gamma_dot^2)/gamma - Omega^2 gamma,
// so the Ermakov residual of the result measures W[u,v] = 1 directly.
ErmakovTrajectory sample_pinney(const HomogeneousPair& pair, const OmegaSq& omega_sq, double p,
                                double omega0p, std::span<const double> times,
                                Method tag = Method::pinney);

// Coefficients of Omega^2 = a t + b for the linear ramp c(t) = alpha t / tau_q.
struct LinearRampCoefficients {
  double a = 0.0;  // 2 v_f alpha p^2 / tau_q
  double b = 0.0;  // v_f^2 p^2
};

LinearRampCoefficients linear_ramp_coefficients(double p, double alpha, double tau_q, double v_f);

// Closed-form homogeneous pair of the linear ramp in terms of Airy functions
// of z(t) = -(a t + b) / (-a)^(2/3), real cube roots.
HomogeneousPair linear_ramp_airy_pair(double p, double alpha, double tau_q, double v_f,
                                      double gamma0);

// Ermakov trajectory of the linear ramp from the Airy pair (gamma_dot0 = 0).
// Throws degenerate_protocol for alpha = 0, domain when a t + b <= 0 on the
// grid, overflow when an Airy evaluation overflows.
ErmakovTrajectory solve_linear_ramp_airy(double p, double alpha, double tau_q, double v_f,
                                         double gamma0, std::span<const double> times);

struct PerturbativeGamma {
  double value = 1.0;
  double first_order = 0.0;   // gamma^(1)
  double second_order = 0.0;  // gamma^(2)
  bool advisory = false;      // |a gamma^(1)| > 0.1
};

// 1 + a gamma^(1) + a^2 gamma^(2) for gamma0 = 1, gamma_dot0 = 0, b = omega0p^2.
PerturbativeGamma perturbative_gamma(double omega0p, double a, double t);

}  // namespace tll
