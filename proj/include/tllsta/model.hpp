#pragma once

#include <cstddef>
#include <vector>

namespace tll {

// Natural units throughout: hbar = m = 1. Couplings g2, g4 are stored in
// velocity units (g/2pi has the dimension of a velocity; we keep g itself).
struct TLLParams {
  double v_f = 1.0;
  double g2 = 0.0;
  double g4 = 0.0;
};

struct LuttingerParams {
  double k = 1.0;
  double v_s = 1.0;
};

// K and v_s. Throws instability when |g2| >= 2 pi v_f + g4, domain when v_f <= 0.
LuttingerParams luttinger_params(const TLLParams& params);

struct Dispersion {
  double omega = 0.0;
  double g = 0.0;
  double epsilon = 0.0;
};

// omega = |p|(v_f + g4/2pi), g = |p| g2/2pi, epsilon = sqrt(omega^2 - g^2).
Dispersion dispersion(double p, double g2, double g4, double v_f);

// beta = -artanh(g/omega)/2. Throws domain when |g| >= omega.
double bogoliubov_angle(const Dispersion& d);

struct LongRangeCoupling {
  double value = 0.0;     // g_{2,4}(p,t)/2pi
  bool unstable = false;  // gamma_ddot/gamma > 0
};

LongRangeCoupling long_range_coupling(double p, double gamma, double gamma_ddot, double v_f);

enum class LiebLinigerBranch { automatic, strong, weak };

// Asymptotic estimates only: 1 + 4/u (strong coupling) and
// (pi/sqrt(u)) (1 - sqrt(u)/2pi)^(-1/2) (weak coupling). The automatic
// branch switches at u = 1.
double lieb_liniger_k(double upsilon, LiebLinigerBranch branch = LiebLinigerBranch::automatic);

// g_{2,4} (velocity units) of the XXZ chain: 2 J_z a [1 - cos(2 k_f a)].
double xxz_coupling(double j_z, double a, double k_f);

// Momenta p_n = 2 pi n / L for n = 1..n_max, exponentially regulated by r0.
struct ModeGrid {
  double length_l = 100.0;
  double r0 = 1.0;
  double nu = 1.0;  // short-distance cutoff; informational
  std::size_t n_max = 0;

  double momentum(std::size_t n) const;
  double weight(std::size_t n) const;  // exp(-r0 p_n)
  std::vector<double> momenta() const;
};

inline constexpr double kGridTailTolerance = 1.0e-12;

// Smallest n with exp(-r0 2 pi n / L) < kGridTailTolerance.
std::size_t default_n_max(double length_l, double r0);

// Validated grid. n_max = 0 selects default_n_max; an explicit n_max whose
// tail weight is not below kGridTailTolerance is rejected.
ModeGrid make_mode_grid(double length_l, double r0, std::size_t n_max = 0, double nu = 1.0);

// 1/(exp(2 beta0 omega0p) - 1); zero for beta0 = +inf.
double bose_occupation(double omega0p, double beta0);

}  // namespace tll
