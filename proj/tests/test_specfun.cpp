#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "tllsta/error.hpp"
#include "tllsta/specfun.hpp"

using namespace tll;

namespace {

struct Frozen {
  double z, ai, aip, bi, bip;
};

// mpmath, 40 digits.
const Frozen kAiry[] = {
    {-50, -0.16188142361232092, 0.96898983727674909, -0.13715015212882007, -1.1453617002654776},
    {-20, -0.17640612707798469, 0.89286285673647124, -0.20013930932265135, -0.79142903383953648},
    {-9, -0.022133721547341404, -0.97566398092633159, 0.32494732345524492, -0.057400513843669254},
    {-5, 0.35076100902411432, 0.32719281855444314, -0.13836913490160058, 0.77841177300189925},
    {-1, 0.53556088329235212, -0.010160567116645209, 0.10399738949694461, 0.59237562642279235},
    {0, 0.35502805388781724, -0.2588194037928068, 0.61492662744600074, 0.44828835735382636},
    {1, 0.13529241631288142, -0.15914744129679321, 1.2074235949528713, 0.93243593339277563},
    {2.5, 0.01572592338047049, -0.02625088103590323, 6.4816607384605786, 9.4214233173343018},
    {5, 0.00010834442813607442, -0.00024741389086846248, 657.79204417117118, 1435.8190802179825},
    {9, 2.4711684308724898e-9, -7.4806413896589464e-9, 21472868.891435349, 63807489.780908214},
    {10, 1.1047532552898686e-10, -3.5206336767389236e-10, 455641153.54822514, 1429236134.4828658},
    {20, 1.6916728686705403e-27, -7.586391625748355e-27, 2.1037650496511038e+25, 9.3818393361339643e+25},
    {50, 4.5849417240748285e-104, -3.2443318198287993e-103, 4.9090996994442193e+101,
     3.4687987795459767e+102},
};

// Scale against which an oscillatory value is compared: the WKB envelope on
// the negative axis, the value itself on the positive one.
double scale(double z, double value, bool derivative) {
  if (z >= -1.0) return std::fabs(value);
  const double root4 = std::sqrt(std::sqrt(-z));
  return (derivative ? root4 : 1.0 / root4) / std::sqrt(std::numbers::pi);
}

void check_close(double z, double got, double want, bool derivative, double tol) {
  INFO("z = " << z << " got " << got << " want " << want);
  CHECK(std::fabs(got - want) <= tol * scale(z, want, derivative));
}

}  // namespace

TEST_CASE("airy matches high-precision reference values") {
  for (const Frozen& f : kAiry) {
    const AiryQuad q = airy(f.z);
    check_close(f.z, q.ai, f.ai, false, 2e-13);
    check_close(f.z, q.ai_prime, f.aip, true, 2e-13);
    check_close(f.z, q.bi, f.bi, false, 2e-13);
    check_close(f.z, q.bi_prime, f.bip, true, 2e-13);
  }
}

TEST_CASE("airy at the origin") {
  const AiryQuad q = airy(0.0);
  CHECK(q.ai == doctest::Approx(0.3550280538878172).epsilon(1e-15));
  CHECK(q.bi == doctest::Approx(0.6149266274460007).epsilon(1e-15));
}

TEST_CASE("airy Wronskian is 1/pi") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-200.0, 40.0);
  const AiryQuad q5 = airy(-5.0);
  CHECK(q5.ai * q5.bi_prime - q5.ai_prime * q5.bi == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-13));
  for (int i = 0; i < 2000; ++i) {
    const double z = dist(rng);
    const AiryQuad q = airy(z);
    const double w = q.ai * q.bi_prime - q.ai_prime * q.bi;
    INFO("z = " << z);
    CHECK(std::fabs(w * std::numbers::pi - 1.0) < 1e-12);
  }
}

TEST_CASE("airy agrees with Boost.Math on random arguments") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-60.0, 30.0);
  for (int i = 0; i < 2000; ++i) {
    const double z = dist(rng);
    const AiryQuad q = airy(z);
    check_close(z, q.ai, boost::math::airy_ai(z), false, 5e-12);
    check_close(z, q.ai_prime, boost::math::airy_ai_prime(z), true, 5e-12);
    check_close(z, q.bi, boost::math::airy_bi(z), false, 5e-12);
    check_close(z, q.bi_prime, boost::math::airy_bi_prime(z), true, 5e-12);
  }
}

TEST_CASE("series and asymptotic branches agree at the crossover") {
  for (double z : {-kAirySeriesLimit, kAirySeriesLimit}) {
    const AiryQuad s = detail::airy_series(z);
    const AiryQuad a = detail::airy_asymptotic(z);
    check_close(z, s.ai, a.ai, false, 1e-14);
    check_close(z, s.ai_prime, a.ai_prime, true, 1e-14);
    check_close(z, s.bi, a.bi, false, 1e-14);
    check_close(z, s.bi_prime, a.bi_prime, true, 1e-14);
  }
}

TEST_CASE("airy errors") {
  CHECK_THROWS_AS(airy(NAN), Error);
  CHECK_THROWS_AS(airy(INFINITY), Error);
  try {
    airy(-2.0e4);
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::domain);
  }
  try {
    airy(110.0);
    FAIL("expected an overflow error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::overflow);
    REQUIRE(e.has_detail());
    CHECK(e.detail() == doctest::Approx(2.0 / 3.0 * std::pow(110.0, 1.5)));
  }
  CHECK(std::isfinite(airy(100.0).bi));
}

TEST_CASE("gamma0 reference values") {
  CHECK(gamma0(1.0) == doctest::Approx(0.21938393439552026).epsilon(1e-15));
  CHECK(gamma0(0.5) == doctest::Approx(0.5597735947761609).epsilon(1e-15));
  CHECK(gamma0(2.0 * std::numbers::pi / 100.0) == doctest::Approx(2.2519359671457993).epsilon(1e-15));
  CHECK(gamma0(1e-8) == doctest::Approx(17.843465089050833).epsilon(1e-15));
  CHECK(gamma0(3.0) == doctest::Approx(0.013048381094197037).epsilon(1e-14));
  CHECK(gamma0(10.0) == doctest::Approx(4.1569689296853243e-6).epsilon(1e-14));
  CHECK(gamma0(40.0) == doctest::Approx(1.036773261451657e-19).epsilon(1e-13));
}

TEST_CASE("gamma0 small-argument limit and Boost.Math agreement") {
  for (double x : {1e-3, 1e-6, 1e-10}) {
    CHECK(std::fabs(gamma0(x) - (-std::log(x) - std::numbers::egamma)) < 2.0 * x);
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> logx(-12.0, 4.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::pow(10.0, logx(rng));
    INFO("x = " << x);
    CHECK(gamma0(x) == doctest::Approx(boost::math::expint(1, x)).epsilon(1e-13));
  }
}

TEST_CASE("gamma0 domain") {
  CHECK_THROWS_AS(gamma0(0.0), Error);
  CHECK_THROWS_AS(gamma0(-1.0), Error);
  CHECK_THROWS_AS(gamma0(NAN), Error);
}
