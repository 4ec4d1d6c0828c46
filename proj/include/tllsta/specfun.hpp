#pragma once

// Special-function kernels used by the closed-form Ermakov solutions.
// Pure functions of their arguments; safe to call from any thread.

namespace tll {

struct AiryQuad {
  double ai = 0.0;
  double ai_prime = 0.0;
  double bi = 0.0;
  double bi_prime = 0.0;
};

// Largest |z| accepted by airy().
inline constexpr double kAiryArgumentLimit = 1.0e4;

// Ai, Ai', Bi, Bi' at real z.
//
// |z| <= kAirySeriesLimit uses the Maclaurin series summed in double-double
// arithmetic (the alternating series loses roughly exp(2/3 |z|^{3/2}) to
// cancellation, which double-double absorbs); beyond it the Poincare
// asymptotic expansions are used, whose optimally truncated error there is
// below double rounding.
//
// Throws Error(domain) for non-finite z or |z| > kAiryArgumentLimit, and
// Error(overflow) when Bi(z) would overflow for large positive z; the error
// detail is the exponent 2/3 z^{3/2}.
AiryQuad airy(double z);

inline constexpr double kAirySeriesLimit = 9.0;

namespace detail {
// Both branches are exported so the crossover can be checked directly.
AiryQuad airy_series(double z);
AiryQuad airy_asymptotic(double z);
}  // namespace detail

// Upper incomplete gamma Gamma(0, x) = E1(x) for x > 0.
// Series below x = 1, Lentz continued fraction from x = 1 on.
double gamma0(double x);

}  // namespace tll
