#include "tllsta/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tllsta/error.hpp"
#include "tllsta/specfun.hpp"

namespace tll {

namespace {
constexpr double kPi = std::numbers::pi;

double clamp_time(double t, double tau_q, const char* what) {
  const double slack = 1.0e-12 * std::max(tau_q, 1.0);
  if (!(t >= -slack && t <= tau_q + slack)) {
    fail(ErrorCode::domain, std::string(what) + ": t = " + std::to_string(t) +
                                " outside [0, " + std::to_string(tau_q) + "]",
         t);
  }
  return std::clamp(t, 0.0, tau_q);
}
}  // namespace

double poly5(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }
double poly5_d1(double s) { return 30.0 * s * s * (1.0 - s) * (1.0 - s); }
double poly5_d2(double s) { return 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s); }
double poly4(double s) { return s * (2.0 + s * s * (-2.0 + s)); }
double poly4_d1(double s) { return 2.0 * (s - 1.0) * (s - 1.0) * (2.0 * s + 1.0); }
double poly4_d2(double s) { return 12.0 * s * (s - 1.0); }

const char* to_string(CouplingKind kind) noexcept {
  switch (kind) {
    case CouplingKind::constant: return "constant";
    case CouplingKind::linear: return "linear";
    case CouplingKind::poly5: return "poly5";
    case CouplingKind::inverse_poly: return "inverse_poly";
  }
  return "unknown";
}

CouplingKind coupling_kind_from_string(const std::string& name) {
  if (name == "constant") return CouplingKind::constant;
  if (name == "linear") return CouplingKind::linear;
  if (name == "poly5") return CouplingKind::poly5;
  if (name == "inverse_poly") return CouplingKind::inverse_poly;
  fail(ErrorCode::config, "unknown coupling kind '" + name +
                              "' (expected constant, linear, poly5, inverse_poly)");
}

double inverse_poly_b(double g_target, double tau_q, double v_f) {
  require(tau_q > 0.0 && std::isfinite(tau_q), ErrorCode::domain, "inverse_poly_b: tau_q must be positive");
  require(v_f > 0.0, ErrorCode::domain, "inverse_poly_b: v_f must be positive");
  const double base = g_target / (kPi * v_f) + 1.0;
  if (!(base > 0.0)) {
    fail(ErrorCode::domain, "inverse_poly_b: requires g_target > -pi v_f for a real fourth root");
  }
  const double gamma_final = std::pow(base, -0.25);
  const double b = (-1.0 + gamma_final) / tau_q;
  if (!(b * tau_q + 1.0 > 0.0)) {
    fail(ErrorCode::singularity, "inverse_poly_b: schedule gamma = B t + 1 reaches zero");
  }
  return b;
}

CouplingSchedule make_coupling_schedule(CouplingKind kind, double alpha, double tau_q,
                                        double v_f) {
  require(std::isfinite(v_f) && v_f > 0.0, ErrorCode::config, "physics.v_f must be positive");
  require(std::isfinite(alpha), ErrorCode::config, "protocol.alpha must be finite");
  require(std::isfinite(tau_q) && tau_q > 0.0, ErrorCode::config, "protocol.tau_q must be positive");
  // Every ramp is monotone between 0 and alpha, so the extreme value is min(0, alpha).
  if (!(v_f + 2.0 * std::min(alpha, 0.0) > 0.0) || !(v_f + 2.0 * alpha > 0.0)) {
    fail(ErrorCode::instability, "coupling schedule violates v_f + 2 c(t) > 0");
  }
  CouplingSchedule s;
  s.kind = kind;
  s.alpha = alpha;
  s.tau_q = tau_q;
  s.v_f = v_f;
  if (kind == CouplingKind::inverse_poly) s.b_coeff = inverse_poly_b(2.0 * kPi * alpha, tau_q, v_f);
  return s;
}

CouplingValue coupling_at(const CouplingSchedule& s, double t) {
  if (s.kind == CouplingKind::constant) return {s.alpha, 0.0, 0.0};
  t = clamp_time(t, s.tau_q, "coupling_at");
  const double tau = s.tau_q;
  switch (s.kind) {
    case CouplingKind::linear:
      return {s.alpha * t / tau, s.alpha / tau, 0.0};
    case CouplingKind::poly5: {
      const double x = t / tau;
      return {s.alpha * poly5(x), s.alpha * poly5_d1(x) / tau, s.alpha * poly5_d2(x) / (tau * tau)};
    }
    case CouplingKind::inverse_poly: {
      const double b = s.b_coeff;
      const double g = b * t + 1.0;
      const double g2 = g * g;
      const double g4 = g2 * g2;
      return {0.5 * s.v_f * (1.0 / g4 - 1.0), -2.0 * s.v_f * b / (g4 * g),
              10.0 * s.v_f * b * b / (g4 * g2)};
    }
    case CouplingKind::constant: break;
  }
  return {s.alpha, 0.0, 0.0};
}

OmegaSq coupling_omega_sq(const CouplingSchedule& s) {
  return [s](double p, double t) {
    return s.v_f * (s.v_f + 2.0 * coupling_at(s, t).value) * p * p;
  };
}

double coupling_gamma_dot0(const CouplingSchedule& s) {
  return s.kind == CouplingKind::inverse_poly ? s.b_coeff : 0.0;
}

const char* to_string(GammaKind kind) noexcept {
  switch (kind) {
    case GammaKind::p4: return "p4";
    case GammaKind::p5: return "p5";
    case GammaKind::constant_potential: return "constant_potential";
    case GammaKind::linear_potential: return "linear_potential";
  }
  return "unknown";
}

GammaKind gamma_kind_from_string(const std::string& name) {
  if (name == "p4") return GammaKind::p4;
  if (name == "p5") return GammaKind::p5;
  if (name == "constant_potential") return GammaKind::constant_potential;
  if (name == "linear_potential") return GammaKind::linear_potential;
  fail(ErrorCode::config, "unknown gamma schedule kind '" + name +
                              "' (expected p4, p5, constant_potential, linear_potential)");
}

GammaSchedule make_polynomial_schedule(GammaKind kind, double gamma0, double gamma_f,
                                       double tau_q, double v_f) {
  require(kind == GammaKind::p4 || kind == GammaKind::p5, ErrorCode::config,
          "make_polynomial_schedule: kind must be p4 or p5");
  if (!(gamma0 > 0.0) || !(gamma_f > 0.0)) {
    fail(ErrorCode::domain, "gamma schedule: gamma0 and gamma_f must be positive");
  }
  require(std::isfinite(tau_q) && tau_q > 0.0, ErrorCode::config, "protocol.tau_q must be positive");
  require(v_f > 0.0, ErrorCode::config, "physics.v_f must be positive");
  GammaSchedule s;
  s.kind = kind;
  s.gamma0 = gamma0;
  s.gamma_f = gamma_f;
  s.tau_q = tau_q;
  s.v_f = v_f;
  // P4 can overshoot below zero when gamma_f < gamma0; reject a non-positive minimum.
  if (kind == GammaKind::p4) {
    for (int i = 0; i <= 1000; ++i) {
      if (!(sta_gamma(s, tau_q * i / 1000.0).gamma > 0.0)) {
        fail(ErrorCode::domain, "gamma schedule: gamma(t) reaches zero", tau_q * i / 1000.0);
      }
    }
  }
  return s;
}

GammaValue sta_gamma(const GammaSchedule& s, double t) {
  if (!(s.gamma0 > 0.0)) fail(ErrorCode::domain, "sta_gamma: gamma0 must be positive");
  switch (s.kind) {
    case GammaKind::p4:
    case GammaKind::p5: {
      if (!(s.gamma_f > 0.0)) fail(ErrorCode::domain, "sta_gamma: gamma_f must be positive");
      t = clamp_time(t, s.tau_q, "sta_gamma");
      const double x = t / s.tau_q;
      const double delta = s.gamma_f - s.gamma0;
      const bool p5 = s.kind == GammaKind::p5;
      return {s.gamma0 + delta * (p5 ? poly5(x) : poly4(x)),
              delta * (p5 ? poly5_d1(x) : poly4_d1(x)) / s.tau_q,
              delta * (p5 ? poly5_d2(x) : poly4_d2(x)) / (s.tau_q * s.tau_q)};
    }
    case GammaKind::constant_potential: {
      t = clamp_time(t, s.tau_q, "sta_gamma");
      AccidentalConstant c;
      c.w = std::sqrt(4.0 * kPi * s.v_f * s.rho0 * s.v0);
      c.gamma0 = s.gamma0;
      c.gamma_dot0 = s.gamma_dot0;
      return c.at(t);
    }
    case GammaKind::linear_potential: {
      t = clamp_time(t, s.tau_q, "sta_gamma");
      AccidentalLinear l;
      l.d = 4.0 * kPi * s.v_f * s.alpha_ramp * s.rho0;
      l.gamma0 = s.gamma0;
      return l.at(t);
    }
  }
  return {};
}

double sine_gordon_gap(double gamma, double gamma_dot, double gamma_ddot, double sigma,
                       double sigma_dot) {
  require(gamma > 0.0 && sigma > 0.0, ErrorCode::domain, "sine_gordon_gap: gamma and sigma must be positive");
  const double rg = gamma_dot / gamma;
  const double ratio = sigma / gamma;
  return ratio * ratio * (rg * rg - 0.5 * gamma_ddot / gamma - rg * sigma_dot / sigma);
}

double sine_gordon_gap_from_k(double k, double k_dot, double k_ddot) {
  require(k > 0.0, ErrorCode::domain, "sine_gordon_gap_from_k: K must be positive");
  const double r = k_dot / k;
  return -0.25 * k_ddot / k + 0.125 * r * r;
}

double sg_spectrum(double p, double gamma, double gamma_ddot, double v_f) {
  require(gamma > 0.0, ErrorCode::domain, "sg_spectrum: gamma must be positive");
  const double g2 = gamma * gamma;
  const double c = v_f / g2;
  const double radicand = p * p * c * c - gamma_ddot / gamma;
  if (radicand < 0.0) {
    fail(ErrorCode::instability, "sg_spectrum: imaginary spectrum (p^2 c*^2 < gamma''/gamma)", p);
  }
  return std::sqrt(radicand);
}

double lattice_potential_from_gamma(double gamma, double gamma_ddot, double v_f, double rho0) {
  require(gamma > 0.0 && rho0 > 0.0, ErrorCode::domain,
          "lattice_potential_from_gamma: gamma and rho0 must be positive");
  return -gamma_ddot / (4.0 * kPi * v_f * rho0 * gamma);
}

GammaValue AccidentalConstant::at(double t) const {
  const double c = std::cos(w * t);
  const double s = std::sin(w * t);
  const double g = gamma0 * c + gamma_dot0 / w * s;
  return {g, -gamma0 * w * s + gamma_dot0 * c, -w * w * g};
}

double AccidentalConstant::t_n(int n) const {
  return (std::atan(gamma_dot0 / (gamma0 * w)) + n * kPi) / w;
}

double AccidentalConstant::amplitude() const {
  const double r = gamma_dot0 / w;
  return std::sqrt(gamma0 * gamma0 + r * r);
}

AccidentalConstant accidental_sta_constant(double v0, double rho0, double v_f, double gamma0,
                                           double gamma_dot0) {
  if (!(v0 > 0.0)) fail(ErrorCode::domain, "accidental_sta_constant: V0 must be positive");
  require(rho0 > 0.0 && v_f > 0.0, ErrorCode::domain,
          "accidental_sta_constant: rho0 and v_f must be positive");
  require(gamma0 > 0.0, ErrorCode::domain, "accidental_sta_constant: gamma0 must be positive");
  AccidentalConstant c;
  c.w = std::sqrt(4.0 * kPi * v_f * rho0 * v0);
  c.gamma0 = gamma0;
  c.gamma_dot0 = gamma_dot0;
  return c;
}

GammaValue AccidentalLinear::at(double t) const {
  const double root = std::cbrt(d);
  const double y = -root * t;
  const AiryQuad f = airy(y);
  const AiryQuad f0 = airy(0.0);
  const double g = kPi * gamma0 * (f0.bi_prime * f.ai - f0.ai_prime * f.bi);
  const double gd = -kPi * gamma0 * root * (f0.bi_prime * f.ai_prime - f0.ai_prime * f.bi_prime);
  return {g, gd, -d * t * g};
}

AccidentalLinear accidental_sta_linear(double alpha_ramp, double rho0, double v_f, double gamma0) {
  if (!(alpha_ramp > 0.0)) fail(ErrorCode::domain, "accidental_sta_linear: alpha must be positive");
  require(rho0 > 0.0 && v_f > 0.0, ErrorCode::domain,
          "accidental_sta_linear: rho0 and v_f must be positive");
  require(gamma0 > 0.0, ErrorCode::domain, "accidental_sta_linear: gamma0 must be positive");
  AccidentalLinear out;
  out.d = 4.0 * kPi * v_f * alpha_ramp * rho0;
  out.gamma0 = gamma0;
  const double scale = std::cbrt(out.d);
  const double horizon = 10.0 * 2.0 * kPi / scale;

  // Scan with 64 points per local oscillation period 2 pi / max(sqrt(d t), d^(1/3)).
  double t_lo = 0.0;
  double t_hi = 0.0;
  double prev_t = 0.0;
  GammaValue prev = out.at(0.0);
  double gd_max = 0.0;
  bool bracketed = false;
  // Leave t = 0 (a trivial root) before looking for sign changes.
  double t = 2.0 * kPi / scale / 64.0;
  prev_t = t;
  prev = out.at(t);
  while (t < horizon) {
    const double period = 2.0 * kPi / std::max(std::sqrt(out.d * t), scale);
    const double next = std::min(t + period / 64.0, horizon);
    const GammaValue cur = out.at(next);
    gd_max = std::max(gd_max, std::fabs(cur.gamma_dot));
    if (!out.crossed_zero && (cur.gamma > 0.0) != (prev.gamma > 0.0)) {
      out.crossed_zero = true;
      double a = prev_t, b = next;
      for (int i = 0; i < 200 && b - a > 1.0e-13; ++i) {
        const double m = 0.5 * (a + b);
        if ((out.at(m).gamma > 0.0) == (prev.gamma > 0.0)) a = m; else b = m;
      }
      out.zero_crossing = 0.5 * (a + b);
    }
    if ((cur.gamma_dot > 0.0) != (prev.gamma_dot > 0.0) || cur.gamma_dot == 0.0) {
      t_lo = prev_t;
      t_hi = next;
      bracketed = true;
      break;
    }
    prev_t = next;
    prev = cur;
    t = next;
    if (next >= horizon) break;
  }
  if (!bracketed) {
    fail(ErrorCode::root_not_found,
         "accidental_sta_linear: gamma_dot has no sign change within ten oscillation scales");
  }

  const bool lo_positive = out.at(t_lo).gamma_dot > 0.0;
  for (int i = 0; i < 200 && t_hi - t_lo > 1.0e-12; ++i) {
    const double m = 0.5 * (t_lo + t_hi);
    if ((out.at(m).gamma_dot > 0.0) == lo_positive) t_lo = m; else t_hi = m;
  }
  double root = 0.5 * (t_lo + t_hi);
  // Newton polish with gamma_ddot = -d t gamma.
  for (int i = 0; i < 3; ++i) {
    const GammaValue v = out.at(root);
    if (v.gamma_ddot == 0.0) break;
    const double next = root - v.gamma_dot / v.gamma_ddot;
    if (!(next > t_lo - 1.0e-9 && next < t_hi + 1.0e-9)) break;
    root = next;
  }
  const GammaValue final_value = out.at(root);
  out.tau_q = root;
  out.gamma_final = final_value.gamma;
  out.k_final = final_value.gamma * final_value.gamma;
  out.residual = std::fabs(final_value.gamma_dot);
  out.gamma_dot_max = gd_max;
  return out;
}

GammaSchedule make_constant_potential_schedule(double v0, double rho0, double v_f, double gamma0,
                                               double gamma_dot0, int n) {
  const AccidentalConstant c = accidental_sta_constant(v0, rho0, v_f, gamma0, gamma_dot0);
  const double tau = c.t_n(n);
  if (!(tau > 0.0)) {
    fail(ErrorCode::degenerate_protocol,
         "constant-potential schedule: t_n = " + std::to_string(tau) + " is not positive", tau);
  }
  GammaSchedule s;
  s.kind = GammaKind::constant_potential;
  s.gamma0 = gamma0;
  s.gamma_f = c.at(tau).gamma;
  s.tau_q = tau;
  s.v_f = v_f;
  s.rho0 = rho0;
  s.v0 = v0;
  s.gamma_dot0 = gamma_dot0;
  return s;
}

GammaSchedule make_linear_potential_schedule(double alpha_ramp, double rho0, double v_f,
                                             double gamma0) {
  const AccidentalLinear l = accidental_sta_linear(alpha_ramp, rho0, v_f, gamma0);
  GammaSchedule s;
  s.kind = GammaKind::linear_potential;
  s.gamma0 = gamma0;
  s.gamma_f = l.gamma_final;
  s.tau_q = l.tau_q;
  s.v_f = v_f;
  s.rho0 = rho0;
  s.alpha_ramp = alpha_ramp;
  return s;
}

}  // namespace tll
