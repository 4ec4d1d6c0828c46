#include "tllsta/ermakov.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "tllsta/error.hpp"
#include "tllsta/specfun.hpp"

namespace tll {

const char* to_string(Method method) noexcept {
  switch (method) {
    case Method::numeric: return "numeric";
    case Method::pinney: return "pinney";
    case Method::airy: return "airy";
    case Method::perturbative: return "perturbative";
    case Method::wkb: return "wkb";
  }
  return "unknown";
}

double ermakov_residual(const ErmakovTrajectory& traj, const OmegaSq& omega_sq, std::size_t i) {
  const double g = traj.gamma[i];
  const double g2 = g * g;
  const double w2 = traj.omega0p * traj.omega0p;
  const double lhs = traj.gamma_ddot[i] * g2 * g + omega_sq(traj.p, traj.times[i]) * g2 * g2;
  return std::fabs(lhs - w2) / w2;
}

double max_ermakov_residual(const ErmakovTrajectory& traj, const OmegaSq& omega_sq) {
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    worst = std::max(worst, ermakov_residual(traj, omega_sq, i));
  }
  return worst;
}

namespace {

using State = std::array<double, 2>;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

class ErmakovSystem {
 public:
  ErmakovSystem(const OmegaSq& omega_sq, double p, double omega0p)
      : omega_sq_(omega_sq), p_(p), w2_(omega0p * omega0p) {}

  // Returns false when gamma <= 0 or the result is not finite.
  bool rhs(double t, const State& y, State& dy) const {
    const double g = y[0];
    if (!(g > 0.0)) return false;
    const double g2 = g * g;
    dy[0] = y[1];
    dy[1] = -omega_sq_(p_, t) * g + w2_ / (g2 * g);
    return std::isfinite(dy[1]);
  }

  double acceleration(double t, double g) const {
    return -omega_sq_(p_, t) * g + w2_ / (g * g * g);
  }

 private:
  const OmegaSq& omega_sq_;
  double p_;
  double w2_;
};

enum class StepOutcome { ok, bad_gamma, not_finite };

struct Trial {
  State y;
  State dy;
  double err;
};

// rate is the mode's natural frequency scale (>= 1): the local error is held
// below tol per unit of max(1, rate) * time, and gamma_dot is measured in
// units of rate, so the round-off floor of the right-hand side does not grow
// with the mode frequency.
StepOutcome dopri_step(const ErmakovSystem& sys, double t, const State& y, const State& k1,
                       double h, double tol, double rate, Trial& out) {
  State k2, k3, k4, k5, k6, k7, s;
  auto stage = [&](double tt, State& k) {
    return sys.rhs(tt, s, k);
  };
  for (int i = 0; i < 2; ++i) s[i] = y[i] + h * a21 * k1[i];
  if (!stage(t + c2 * h, k2)) return s[0] > 0.0 ? StepOutcome::not_finite : StepOutcome::bad_gamma;
  for (int i = 0; i < 2; ++i) s[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
  if (!stage(t + c3 * h, k3)) return s[0] > 0.0 ? StepOutcome::not_finite : StepOutcome::bad_gamma;
  for (int i = 0; i < 2; ++i) s[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  if (!stage(t + c4 * h, k4)) return s[0] > 0.0 ? StepOutcome::not_finite : StepOutcome::bad_gamma;
  for (int i = 0; i < 2; ++i)
    s[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  if (!stage(t + c5 * h, k5)) return s[0] > 0.0 ? StepOutcome::not_finite : StepOutcome::bad_gamma;
  for (int i = 0; i < 2; ++i)
    s[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
  if (!stage(t + h, k6)) return s[0] > 0.0 ? StepOutcome::not_finite : StepOutcome::bad_gamma;
  for (int i = 0; i < 2; ++i)
    s[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
  const State y5 = s;
  if (!stage(t + h, k7)) return s[0] > 0.0 ? StepOutcome::not_finite : StepOutcome::bad_gamma;

  const double allowed = tol * std::min(std::fabs(h) * rate, 1.0);
  double err = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * k7[i]);
    const double unit = i == 0 ? 1.0 : rate;
    const double scale = allowed * (unit + std::max(std::fabs(y[i]), std::fabs(y5[i])));
    err = std::max(err, std::fabs(e) / scale);
  }
  out.y = y5;
  out.dy = k7;
  out.err = err;
  return StepOutcome::ok;
}

void validate_times(std::span<const double> times) {
  require(!times.empty(), ErrorCode::domain, "time grid is empty");
  for (double t : times) require(std::isfinite(t), ErrorCode::domain, "time grid has non-finite entries");
  if (times.size() < 2) return;
  const bool forward = times[1] > times[0];
  for (std::size_t i = 1; i < times.size(); ++i) {
    const bool ok = forward ? times[i] > times[i - 1] : times[i] < times[i - 1];
    require(ok, ErrorCode::domain, "time grid must be strictly monotone");
  }
}

ErmakovTrajectory wkb_trajectory(const OmegaSq& omega_sq, double p, double omega0p,
                                 std::span<const double> times) {
  ErmakovTrajectory traj;
  traj.p = p;
  traj.omega0p = omega0p;
  traj.method = Method::wkb;
  const double lo = std::min(times.front(), times.back());
  const double hi = std::max(times.front(), times.back());
  const double dt = 1.0e-5 * std::max(hi - lo, 1.0e-3);
  for (double t : times) {
    const double w2 = omega_sq(p, t);
    require(w2 > 0.0, ErrorCode::instability, "wkb shortcut needs Omega^2 > 0");
    const double g = std::sqrt(omega0p / std::sqrt(w2));
    const double t_plus = std::min(t + dt, hi);
    const double t_minus = std::max(t - dt, lo);
    const double dw2 = (omega_sq(p, t_plus) - omega_sq(p, t_minus)) / (t_plus - t_minus);
    traj.times.push_back(t);
    traj.gamma.push_back(g);
    traj.gamma_dot.push_back(-0.25 * g * dw2 / w2);
    traj.gamma_ddot.push_back(-w2 * g + omega0p * omega0p / (g * g * g));
  }
  return traj;
}

}  // namespace

ErmakovTrajectory solve_ermakov_numeric(const OmegaSq& omega_sq, double p, double omega0p,
                                        double gamma0, double gamma_dot0,
                                        std::span<const double> times,
                                        const NumericOptions& options) {
  require(static_cast<bool>(omega_sq), ErrorCode::domain, "Omega^2 callback is empty");
  require(std::isfinite(gamma0) && gamma0 > 0.0, ErrorCode::domain, "gamma0 must be positive");
  require(std::isfinite(gamma_dot0), ErrorCode::domain, "gamma_dot0 must be finite");
  require(std::isfinite(omega0p) && omega0p > 0.0, ErrorCode::domain, "omega0p must be positive");
  require(options.tol >= 1.0e-12 && options.tol <= 1.0e-4, ErrorCode::domain,
          "integrator tolerance must lie in [1e-12, 1e-4]");
  validate_times(times);

  if (options.wkb_shortcut &&
      omega0p * std::fabs(times.back() - times.front()) > options.wkb_threshold) {
    return wkb_trajectory(omega_sq, p, omega0p, times);
  }

  const ErmakovSystem sys(omega_sq, p, omega0p);
  ErmakovTrajectory traj;
  traj.p = p;
  traj.omega0p = omega0p;
  traj.method = Method::numeric;
  traj.times.reserve(times.size());
  traj.gamma.reserve(times.size());
  traj.gamma_dot.reserve(times.size());
  traj.gamma_ddot.reserve(times.size());

  double t = times[0];
  State y{gamma0, gamma_dot0};
  State k1;
  if (!sys.rhs(t, y, k1)) fail(ErrorCode::domain, "Omega^2 is not finite at the initial time");
  auto record = [&](double tt) {
    traj.times.push_back(tt);
    traj.gamma.push_back(y[0]);
    traj.gamma_dot.push_back(y[1]);
    traj.gamma_ddot.push_back(sys.acceleration(tt, y[0]));
  };
  record(t);
  if (times.size() == 1) return traj;

  const double direction = times[1] > times[0] ? 1.0 : -1.0;
  const double w0 = std::sqrt(std::max({omega0p * omega0p, std::fabs(omega_sq(p, t)), 1.0e-300}));
  const double rate = std::max(w0, 1.0);
  double h_next = direction * std::min(0.01 / w0, std::fabs(times[1] - times[0]));
  std::size_t steps = 0;
  bool last_bad_gamma = false;

  for (std::size_t target = 1; target < times.size(); ++target) {
    const double t_end = times[target];
    while (direction * (t_end - t) > 0.0) {
      double h = h_next;
      bool clipped = false;
      if (direction * (t + h - t_end) >= 0.0) {
        h = t_end - t;
        clipped = true;
      }
      const double h_min = 1.0e-14 * std::max(std::fabs(t), 1.0);
      if (std::fabs(h) < h_min && !clipped) {
        if (last_bad_gamma) {
          const double crossing = y[1] != 0.0 ? t - y[0] / y[1] : t;
          fail(ErrorCode::singularity,
               "gamma reaches zero near t = " + std::to_string(crossing) +
                   " (mode p = " + std::to_string(p) + ")",
               crossing);
        }
        fail(ErrorCode::stiffness, "step size underflow at t = " + std::to_string(t) +
                                       " (mode p = " + std::to_string(p) + ")",
             t);
      }
      if (++steps > options.max_steps) {
        fail(ErrorCode::stiffness, "step budget exhausted at t = " + std::to_string(t), t);
      }

      Trial trial;
      const StepOutcome outcome = dopri_step(sys, t, y, k1, h, options.tol, rate, trial);
      if (outcome != StepOutcome::ok) {
        last_bad_gamma = outcome == StepOutcome::bad_gamma;
        h_next = 0.25 * h;
        continue;
      }
      if (!(trial.err <= 1.0)) {
        last_bad_gamma = false;
        const double factor =
            std::isfinite(trial.err) ? std::max(0.2, 0.9 * std::pow(trial.err, -0.2)) : 0.2;
        h_next = h * factor;
        continue;
      }
      last_bad_gamma = false;
      t = clipped ? t_end : t + h;
      y = trial.y;
      k1 = trial.dy;
      const double factor =
          trial.err > 0.0 ? std::clamp(0.9 * std::pow(trial.err, -0.2), 0.2, 5.0) : 5.0;
      // A clipped step says nothing about the natural step; keep the larger one.
      const double proposed = h * factor;
      h_next = clipped ? direction * std::max(std::fabs(proposed), std::fabs(h_next)) : proposed;
    }
    record(t_end);
  }
  return traj;
}

double wronskian(const HomogeneousPair& pair, double t) {
  const HomogeneousValue u = pair.u(t);
  const HomogeneousValue v = pair.v(t);
  return u.value * v.derivative - v.value * u.derivative;
}

HomogeneousPair build_uv(HomogeneousSolution r, HomogeneousSolution s, double gamma0,
                         double gamma_dot0, double t0) {
  require(gamma0 > 0.0, ErrorCode::domain, "build_uv: gamma0 must be positive");
  const HomogeneousValue r0 = r(t0);
  const HomogeneousValue s0 = s(t0);
  const double w = s0.value * r0.derivative - r0.value * s0.derivative;
  if (!(std::fabs(w) > 1.0e-12)) {
    fail(ErrorCode::linear_dependence, "build_uv: r and s are linearly dependent (|W[s,r]| <= 1e-12)");
  }
  // u = A r + B s with u(t0) = gamma0, u'(t0) = gamma_dot0.
  const double ua = (-gamma0 * s0.derivative + s0.value * gamma_dot0) / w;
  const double ub = (gamma0 * r0.derivative - r0.value * gamma_dot0) / w;
  const double va = s0.value / (w * gamma0);
  const double vb = -r0.value / (w * gamma0);
  auto combine = [r, s](double ca, double cb) {
    return [r, s, ca, cb](double t) {
      const HomogeneousValue rv = r(t);
      const HomogeneousValue sv = s(t);
      return HomogeneousValue{ca * rv.value + cb * sv.value,
                              ca * rv.derivative + cb * sv.derivative};
    };
  };
  return {combine(ua, ub), combine(va, vb)};
}

PinneySolution pinney_combine(HomogeneousPair pair, double omega0p) {
  require(omega0p > 0.0, ErrorCode::domain, "pinney_combine: omega0p must be positive");
  return [pair = std::move(pair), omega0p](double t) {
    const HomogeneousValue u = pair.u(t);
    const HomogeneousValue v = pair.v(t);
    const double w2 = omega0p * omega0p;
    const double g = std::sqrt(u.value * u.value + w2 * v.value * v.value);
    if (!(g > 0.0)) {
      fail(ErrorCode::consistency, "pinney_combine: u and v vanish simultaneously", t);
    }
    PinneyState out;
    out.gamma = g;
    out.gamma_dot = (u.value * u.derivative + w2 * v.value * v.derivative) / g;
    out.gamma_ddot = std::numeric_limits<double>::quiet_NaN();
    return out;
  };
}

ErmakovTrajectory sample_pinney(const HomogeneousPair& pair, const OmegaSq& omega_sq, double p,
                                double omega0p, std::span<const double> times, Method tag) {
  require(omega0p > 0.0, ErrorCode::domain, "sample_pinney: omega0p must be positive");
  validate_times(times);
  ErmakovTrajectory traj;
  traj.p = p;
  traj.omega0p = omega0p;
  traj.method = tag;
  const double w2 = omega0p * omega0p;
  for (double t : times) {
    const HomogeneousValue u = pair.u(t);
    const HomogeneousValue v = pair.v(t);
    const double g = std::sqrt(u.value * u.value + w2 * v.value * v.value);
    if (!(g > 0.0)) fail(ErrorCode::consistency, "Pinney construction: u and v vanish together", t);
    const double gd = (u.value * u.derivative + w2 * v.value * v.derivative) / g;
    const double kinetic = u.derivative * u.derivative + w2 * v.derivative * v.derivative;
    traj.times.push_back(t);
    traj.gamma.push_back(g);
    traj.gamma_dot.push_back(gd);
    traj.gamma_ddot.push_back((kinetic - gd * gd) / g - omega_sq(p, t) * g);
  }
  return traj;
}

LinearRampCoefficients linear_ramp_coefficients(double p, double alpha, double tau_q, double v_f) {
  require(tau_q > 0.0, ErrorCode::domain, "linear ramp: tau_q must be positive");
  return {2.0 * v_f * alpha * p * p / tau_q, v_f * v_f * p * p};
}

HomogeneousPair linear_ramp_airy_pair(double p, double alpha, double tau_q, double v_f,
                                      double gamma0) {
  require(gamma0 > 0.0, ErrorCode::domain, "linear ramp: gamma0 must be positive");
  require(p != 0.0, ErrorCode::domain, "linear ramp: p must be nonzero");
  if (alpha == 0.0) {
    fail(ErrorCode::degenerate_protocol,
         "linear ramp with alpha = 0 has no Airy form; use the constant solution");
  }
  const auto [a, b] = linear_ramp_coefficients(p, alpha, tau_q, v_f);
  const double q = std::cbrt(-a);  // dz/dt
  const double c = q * q;          // (-a)^(2/3)
  const double z0 = -b / c;
  const AiryQuad at0 = airy(z0);
  constexpr double pi = std::numbers::pi;
  auto z_of = [a, b, c](double t) { return -(a * t + b) / c; };

  HomogeneousSolution u = [=](double t) {
    const AiryQuad f = airy(z_of(t));
    const double k = pi * gamma0;
    return HomogeneousValue{k * (at0.bi_prime * f.ai - at0.ai_prime * f.bi),
                            k * q * (at0.bi_prime * f.ai_prime - at0.ai_prime * f.bi_prime)};
  };
  HomogeneousSolution v = [=](double t) {
    const AiryQuad f = airy(z_of(t));
    const double k = pi / (gamma0 * q);
    return HomogeneousValue{k * (-at0.bi * f.ai + at0.ai * f.bi),
                            k * q * (-at0.bi * f.ai_prime + at0.ai * f.bi_prime)};
  };
  return {std::move(u), std::move(v)};
}

ErmakovTrajectory solve_linear_ramp_airy(double p, double alpha, double tau_q, double v_f,
                                         double gamma0, std::span<const double> times) {
  validate_times(times);
  const auto [a, b] = linear_ramp_coefficients(p, alpha, tau_q, v_f);
  for (double t : times) {
    if (!(a * t + b > 0.0)) {
      fail(ErrorCode::domain, "linear ramp: Omega^2 = a t + b must stay positive on the grid", t);
    }
  }
  const HomogeneousPair pair = linear_ramp_airy_pair(p, alpha, tau_q, v_f, gamma0);
  const OmegaSq omega_sq = [a = a, b = b](double, double t) { return a * t + b; };
  return sample_pinney(pair, omega_sq, p, v_f * std::fabs(p), times, Method::airy);
}

PerturbativeGamma perturbative_gamma(double omega0p, double a, double t) {
  require(omega0p > 0.0, ErrorCode::domain, "perturbative_gamma: omega0p must be positive");
  const double w = omega0p;
  const double w3 = w * w * w;
  const double tw = t * w;
  const double s = std::sin(tw);
  const double s2tw = std::sin(2.0 * tw);
  const double c2tw = std::cos(2.0 * tw);
  PerturbativeGamma out;
  out.first_order = (s2tw - 2.0 * tw) / (8.0 * w3);
  out.second_order =
      (-(9.0 + c2tw) * s * s + 2.0 * tw * (-s2tw + t * (5.0 + 2.0 * c2tw) * w)) / (64.0 * w3 * w3);
  out.value = 1.0 + a * out.first_order + a * a * out.second_order;
  out.advisory = std::fabs(a * out.first_order) > 0.1;
  return out;
}

}  // namespace tll
