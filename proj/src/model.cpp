#include "tllsta/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tllsta/error.hpp"

namespace tll {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

LuttingerParams luttinger_params(const TLLParams& params) {
  require(std::isfinite(params.v_f) && params.v_f > 0.0, ErrorCode::domain,
          "luttinger_params: v_f must be positive");
  const double base = kTwoPi * params.v_f + params.g4;
  if (!(std::fabs(params.g2) < base)) {
    fail(ErrorCode::instability,
         "luttinger_params: |g2| < 2 pi v_f + g4 violated (|g2| = " +
             std::to_string(std::fabs(params.g2)) + ", 2 pi v_f + g4 = " + std::to_string(base) +
             ")");
  }
  const double k = std::sqrt((base - params.g2) / (base + params.g2));
  const double a = params.v_f + params.g4 / kTwoPi;
  const double b = params.g2 / kTwoPi;
  const double v_s = std::sqrt((a - b) * (a + b));
  return {k, v_s};
}

Dispersion dispersion(double p, double g2, double g4, double v_f) {
  require(p != 0.0 && std::isfinite(p), ErrorCode::domain, "dispersion: p must be nonzero");
  const double ap = std::fabs(p);
  const double omega = ap * (v_f + g4 / kTwoPi);
  const double g = ap * g2 / kTwoPi;
  if (std::fabs(g) > omega) {
    fail(ErrorCode::instability, "dispersion: |g| > omega, imaginary spectrum");
  }
  return {omega, g, std::sqrt((omega - g) * (omega + g))};
}

double bogoliubov_angle(const Dispersion& d) {
  if (!(std::fabs(d.g) < d.omega)) {
    fail(ErrorCode::domain, "bogoliubov_angle: requires |g| < omega");
  }
  return -0.5 * std::atanh(d.g / d.omega);
}

LongRangeCoupling long_range_coupling(double p, double gamma, double gamma_ddot, double v_f) {
  require(p != 0.0, ErrorCode::domain, "long_range_coupling: p must be nonzero");
  require(gamma > 0.0, ErrorCode::domain, "long_range_coupling: gamma must be positive");
  const double g2 = gamma * gamma;
  const double ratio = gamma_ddot / gamma;
  LongRangeCoupling out;
  out.value = 0.5 * v_f * (1.0 / (g2 * g2) - 1.0) - ratio / (2.0 * v_f * p * p);
  out.unstable = ratio > 0.0;
  return out;
}

double lieb_liniger_k(double upsilon, LiebLinigerBranch branch) {
  require(std::isfinite(upsilon) || upsilon == INFINITY, ErrorCode::domain,
          "lieb_liniger_k: upsilon must be a number");
  require(upsilon > 0.0, ErrorCode::domain, "lieb_liniger_k: upsilon must be positive");
  if (branch == LiebLinigerBranch::automatic) {
    branch = upsilon >= 1.0 ? LiebLinigerBranch::strong : LiebLinigerBranch::weak;
  }
  if (branch == LiebLinigerBranch::strong) return 1.0 + 4.0 / upsilon;
  const double root = std::sqrt(upsilon);
  require(root < kTwoPi, ErrorCode::domain, "lieb_liniger_k: weak branch needs sqrt(upsilon) < 2 pi");
  return std::numbers::pi / root / std::sqrt(1.0 - root / kTwoPi);
}

double xxz_coupling(double j_z, double a, double k_f) {
  require(a > 0.0, ErrorCode::domain, "xxz_coupling: lattice spacing must be positive");
  return 2.0 * j_z * a * (1.0 - std::cos(2.0 * k_f * a));
}

double ModeGrid::momentum(std::size_t n) const {
  return kTwoPi * static_cast<double>(n) / length_l;
}

double ModeGrid::weight(std::size_t n) const { return std::exp(-r0 * momentum(n)); }

std::vector<double> ModeGrid::momenta() const {
  std::vector<double> p(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) p[n - 1] = momentum(n);
  return p;
}

std::size_t default_n_max(double length_l, double r0) {
  const double n = -std::log(kGridTailTolerance) * length_l / (kTwoPi * r0);
  auto candidate = static_cast<std::size_t>(std::floor(n));
  if (candidate < 1) candidate = 1;
  while (std::exp(-r0 * kTwoPi * static_cast<double>(candidate) / length_l) >= kGridTailTolerance) {
    ++candidate;
  }
  while (candidate > 1 &&
         std::exp(-r0 * kTwoPi * static_cast<double>(candidate - 1) / length_l) < kGridTailTolerance) {
    --candidate;
  }
  return candidate;
}

ModeGrid make_mode_grid(double length_l, double r0, std::size_t n_max, double nu) {
  require(std::isfinite(length_l) && length_l > 0.0, ErrorCode::config,
          "grid.length must be positive");
  require(std::isfinite(r0) && r0 > 0.0, ErrorCode::config, "grid.r0 must be positive");
  ModeGrid grid;
  grid.length_l = length_l;
  grid.r0 = r0;
  grid.nu = nu;
  const std::size_t minimum = default_n_max(length_l, r0);
  if (n_max == 0) {
    grid.n_max = minimum;
  } else {
    if (n_max < minimum) {
      fail(ErrorCode::config, "grid.n_max = " + std::to_string(n_max) +
                                  " leaves a regulator tail above 1e-12; need at least " +
                                  std::to_string(minimum));
    }
    grid.n_max = n_max;
  }
  return grid;
}

double bose_occupation(double omega0p, double beta0) {
  if (std::isinf(beta0) && beta0 > 0.0) return 0.0;
  require(beta0 > 0.0, ErrorCode::domain, "bose_occupation: beta0 must be positive");
  return 1.0 / std::expm1(2.0 * beta0 * omega0p);
}

}  // namespace tll
