#include "tllsta/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "tllsta/error.hpp"

namespace tll {
namespace {

// Minimal double-double arithmetic (Dekker/Knuth error-free transforms).
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;
};

inline DoubleDouble quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline DoubleDouble two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
  DoubleDouble s = two_sum(a.hi, b.hi);
  const DoubleDouble t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }
inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }

inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
  const double p = a.hi * b.hi;
  double e = std::fma(a.hi, b.hi, -p);
  e += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p, e);
}

inline DoubleDouble operator/(DoubleDouble a, double d) {
  const double q1 = a.hi / d;
  const double p = q1 * d;
  const double pe = std::fma(q1, d, -p);
  const double r = ((a.hi - p) - pe) + a.lo;
  return quick_two_sum(q1, r / d);
}

// Ai(0) and -Ai'(0) to double-double precision.
constexpr DoubleDouble kAi0{0.3550280538878172, 2.05233632436212e-17};
constexpr DoubleDouble kMinusAiPrime0{0.2588194037928068, -2.522243111610832e-17};
constexpr double kSqrt3 = 1.7320508075688772;

struct SeriesSums {
  DoubleDouble f, df, g, dg;
};

// f(z) = sum 3^k (1/3)_k z^{3k} / (3k)!, g(z) = sum 3^k (2/3)_k z^{3k+1} / (3k+1)!
// and their derivatives, accumulated term by term via their ratios.
SeriesSums maclaurin_sums(double z) {
  const DoubleDouble zz{z, 0.0};
  const DoubleDouble z3 = zz * zz * zz;

  SeriesSums s;
  DoubleDouble tf{1.0, 0.0};
  DoubleDouble tg = zz;
  DoubleDouble tdf = (zz * zz) / 2.0;
  DoubleDouble tdg{1.0, 0.0};
  s.f = tf;
  s.g = tg;
  s.df = tdf;
  s.dg = tdg;

  constexpr double kTiny = 1.0e-34;
  for (int k = 1; k < 400; ++k) {
    const double k3 = 3.0 * k;
    tf = (tf * z3) / ((k3 - 1.0) * k3);
    tg = (tg * z3) / (k3 * (k3 + 1.0));
    tdg = (tdg * z3) / (k3 * (k3 - 2.0));
    // tdf starts at k = 1 with z^2/2, so its next ratio uses k + 1.
    const double kn = 3.0 * (k + 1);
    tdf = (tdf * z3) / ((kn - 1.0) * (kn - 3.0));
    s.f = s.f + tf;
    s.g = s.g + tg;
    s.df = s.df + tdf;
    s.dg = s.dg + tdg;

    const double largest = std::fmax(std::fmax(std::fabs(tf.hi), std::fabs(tg.hi)),
                                     std::fmax(std::fabs(tdf.hi), std::fabs(tdg.hi)));
    const double scale = std::fmax(std::fmax(std::fabs(s.f.hi), std::fabs(s.g.hi)),
                                   std::fmax(std::fabs(s.df.hi), std::fabs(s.dg.hi)));
    if (9.0 * k * k > std::fabs(z3.hi) && largest <= kTiny * std::fmax(scale, 1.0)) break;
  }
  return s;
}

constexpr int kAsymptoticTerms = 60;

struct AsymptoticCoefficients {
  std::array<double, kAsymptoticTerms> u{};
  std::array<double, kAsymptoticTerms> v{};
};

const AsymptoticCoefficients& asymptotic_coefficients() {
  static const AsymptoticCoefficients c = [] {
    AsymptoticCoefficients out;
    out.u[0] = 1.0;
    out.v[0] = 1.0;
    for (int k = 1; k < kAsymptoticTerms; ++k) {
      const double kk = k;
      out.u[k] = out.u[k - 1] * (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) /
                 ((2 * kk - 1) * 216.0 * kk);
      out.v[k] = -(6 * kk + 1) / (6 * kk - 1) * out.u[k];
    }
    return out;
  }();
  return c;
}

// Sum of sign^k c_k / zeta^k over k = first, first + stride, ..., truncated at
// the smallest term (optimal truncation of a divergent expansion). With
// stride 2 the sign alternates between successive retained terms.
double truncated_series(const std::array<double, kAsymptoticTerms>& c, double zeta,
                        int first, int stride, double sign) {
  double sum = 0.0;
  double previous = INFINITY;
  double power = std::pow(zeta, -first);
  const double step = std::pow(zeta, -stride);
  double s = 1.0;
  for (int k = first; k < kAsymptoticTerms; k += stride) {
    const double term = s * c[static_cast<std::size_t>(k)] * power;
    if (std::fabs(term) >= previous) break;
    sum += term;
    previous = std::fabs(term);
    if (previous <= 1.0e-18 * std::fabs(sum)) break;
    power *= step;
    s *= sign;
  }
  return sum;
}

}  // namespace

namespace detail {

AiryQuad airy_series(double z) {
  const SeriesSums s = maclaurin_sums(z);
  const DoubleDouble ai = kAi0 * s.f - kMinusAiPrime0 * s.g;
  const DoubleDouble aip = kAi0 * s.df - kMinusAiPrime0 * s.dg;
  const DoubleDouble bi = kAi0 * s.f + kMinusAiPrime0 * s.g;
  const DoubleDouble bip = kAi0 * s.df + kMinusAiPrime0 * s.dg;
  return {ai.hi + ai.lo, aip.hi + aip.lo, kSqrt3 * (bi.hi + bi.lo),
          kSqrt3 * (bip.hi + bip.lo)};
}

AiryQuad airy_asymptotic(double z) {
  const AsymptoticCoefficients& c = asymptotic_coefficients();
  constexpr double kInvSqrtPi = 0.5641895835477563;
  const double x = std::fabs(z);
  const double root4 = std::sqrt(std::sqrt(x));
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);

  if (z > 0.0) {
    if (zeta > 700.0) {
      fail(ErrorCode::overflow,
           "Bi(" + std::to_string(z) + ") overflows double precision (exponent scale " +
               std::to_string(zeta) + ")",
           zeta);
    }
    // All four expansions share the same coefficients, once with
    // alternating signs (decaying solution) and once without.
    double alt_u = 0.0, alt_v = 0.0, pos_u = 0.0, pos_v = 0.0;
    {
      double power = 1.0;
      double prev_alt_u = INFINITY, prev_alt_v = INFINITY;
      double prev_pos_u = INFINITY, prev_pos_v = INFINITY;
      bool run_au = true, run_av = true, run_pu = true, run_pv = true;
      for (int k = 0; k < kAsymptoticTerms; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        const double tu = c.u[static_cast<std::size_t>(k)] * power;
        const double tv = c.v[static_cast<std::size_t>(k)] * power;
        if (run_au) {
          if (std::fabs(tu) < prev_alt_u) { alt_u += sign * tu; prev_alt_u = std::fabs(tu); }
          else run_au = false;
        }
        if (run_av) {
          if (std::fabs(tv) < prev_alt_v) { alt_v += sign * tv; prev_alt_v = std::fabs(tv); }
          else run_av = false;
        }
        if (run_pu) {
          if (std::fabs(tu) < prev_pos_u) { pos_u += tu; prev_pos_u = std::fabs(tu); }
          else run_pu = false;
        }
        if (run_pv) {
          if (std::fabs(tv) < prev_pos_v) { pos_v += tv; prev_pos_v = std::fabs(tv); }
          else run_pv = false;
        }
        if (std::fabs(tu) < 1.0e-18 && std::fabs(tv) < 1.0e-18) break;
        if (!(run_au || run_av || run_pu || run_pv)) break;
        power /= zeta;
      }
    }
    const double decay = std::exp(-zeta);
    const double growth = std::exp(zeta);
    return {0.5 * kInvSqrtPi * decay / root4 * alt_u,
            -0.5 * kInvSqrtPi * root4 * decay * alt_v,
            kInvSqrtPi * growth / root4 * pos_u,
            kInvSqrtPi * root4 * growth * pos_v};
  }

  const double p = truncated_series(c.u, zeta, 0, 2, -1.0);
  const double q = truncated_series(c.u, zeta, 1, 2, -1.0);
  const double r = truncated_series(c.v, zeta, 0, 2, -1.0);
  const double s = truncated_series(c.v, zeta, 1, 2, -1.0);
  // theta = zeta + pi/4, expanded to avoid rounding pi/4 into a large zeta.
  const double sz = std::sin(zeta);
  const double cz = std::cos(zeta);
  constexpr double kInvSqrt2 = 0.70710678118654752440;
  const double sin_theta = (sz + cz) * kInvSqrt2;
  const double cos_theta = (cz - sz) * kInvSqrt2;
  return {kInvSqrtPi / root4 * (sin_theta * p - cos_theta * q),
          -kInvSqrtPi * root4 * (cos_theta * r + sin_theta * s),
          kInvSqrtPi / root4 * (cos_theta * p + sin_theta * q),
          kInvSqrtPi * root4 * (sin_theta * r - cos_theta * s)};
}

}  // namespace detail

AiryQuad airy(double z) {
  if (!std::isfinite(z)) fail(ErrorCode::domain, "airy: argument is not finite");
  if (std::fabs(z) > kAiryArgumentLimit) {
    fail(ErrorCode::domain, "airy: |z| = " + std::to_string(std::fabs(z)) +
                                " exceeds the supported range " +
                                std::to_string(kAiryArgumentLimit));
  }
  if (std::fabs(z) <= kAirySeriesLimit) return detail::airy_series(z);
  return detail::airy_asymptotic(z);
}

double gamma0(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    fail(ErrorCode::domain, "gamma0: requires finite x > 0 (the integral diverges at the origin)");
  }
  if (x < 1.0) {
    // E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 100; ++k) {
      term *= -x / k;
      const double contribution = term / k;
      sum += contribution;
      if (std::fabs(contribution) < 1.0e-18 * std::fabs(sum)) break;
    }
    return -std::numbers::egamma - std::log(x) - sum;
  }
  // Modified Lentz evaluation of the continued fraction for e^x E1(x).
  constexpr double kTiny = 1.0e-300;
  double b = x + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::fabs(del - 1.0) < 1.0e-16) break;
  }
  return h * std::exp(-x);
}

}  // namespace tll
