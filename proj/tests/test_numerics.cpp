#include <cmath>
#include <random>

#include "airygeom/numerics.hpp"
#include "doctest.h"
#include "oracles.hpp"

using airygeom::BigInt;
using airygeom::Rational;

TEST_CASE("rational basics") {
  CHECK(Rational(1, 24).to_string() == "1/24");
  CHECK(Rational(2, 48) == Rational(1, 24));
  CHECK(Rational(-3, 6).to_string() == "-1/2");
  CHECK(Rational(5, -10).to_string() == "-1/2");  // denominator kept positive
  CHECK(Rational(0, 7).to_string() == "0");
  CHECK(Rational(6, 3).denominator() == 1);
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) * Rational(3, 5) == Rational(1, 5));
  CHECK(Rational(1, 3) - Rational(1, 3) == Rational(0));
  CHECK(Rational(1, 2) / Rational(3, 2) == Rational(1, 3));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(7).sign() == 1);
  CHECK(Rational(-7, 3).sign() == -1);
  CHECK(Rational().is_zero());
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("rational string round trip") {
  CHECK(Rational::from_string("1/24") == Rational(1, 24));
  CHECK(Rational::from_string("-7") == Rational(-7));
  CHECK(Rational::from_string("4/6") == Rational(2, 3));
  CHECK_THROWS(Rational::from_string(""));
  CHECK_THROWS(Rational::from_string("a/b"));
  CHECK_THROWS(Rational::from_string("1/0"));
}

TEST_CASE("double factorial values") {
  CHECK(airygeom::double_factorial(-1) == 1);  // empty product
  CHECK(airygeom::double_factorial(0) == 1);
  CHECK(airygeom::double_factorial(1) == 1);
  CHECK(airygeom::double_factorial(5) == 15);
  CHECK(airygeom::double_factorial(9) == 945);  // 9*7*5*3*1
  CHECK_THROWS_AS(airygeom::double_factorial(-2), std::domain_error);
}

TEST_CASE("double factorial pairs multiply to the factorial") {
  for (long m = 1; m <= 25; ++m) {
    CHECK(airygeom::double_factorial(m) * airygeom::double_factorial(m - 1) ==
          oracles::factorial(static_cast<unsigned>(m)));
  }
}

TEST_CASE("log gamma fixed points") {
  CHECK(airygeom::log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(airygeom::log_gamma(2.0) == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(airygeom::log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-13));
  const double log_sqrt_pi = 0.57236494292470008707;
  CHECK(airygeom::log_gamma(0.5) == doctest::Approx(log_sqrt_pi).epsilon(1e-13));
  CHECK_THROWS_AS(airygeom::log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(airygeom::log_gamma(-3.0), std::domain_error);
}

TEST_CASE("log gamma matches libm across the working range") {
  for (double x : {0.1, 0.31, 0.5, 0.9, 1.0, 1.5, 2.0, 3.7, 10.0, 55.5, 123.0,
                   999.5, 4096.0, 10000.0}) {
    const double mine = airygeom::log_gamma(x);
    const double ref = std::lgamma(x);
    CHECK(std::abs(mine - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("log gamma functional equation") {
  for (double x = 0.5; x <= 50.0; x += 0.5) {
    const double ratio = std::exp(airygeom::log_gamma(x + 1.0) - airygeom::log_gamma(x));
    CHECK(ratio == doctest::Approx(x).epsilon(1e-10));
  }
}

TEST_CASE("log10 of rationals") {
  const auto one = airygeom::log10_of_rational(Rational(1));
  CHECK(one.sign == 1);
  CHECK(one.log10_magnitude == doctest::Approx(0.0).epsilon(1e-13));

  const auto inv24 = airygeom::log10_of_rational(Rational(1, 24));
  CHECK(inv24.sign == 1);
  CHECK(inv24.log10_magnitude == doctest::Approx(-1.3802112417116060).epsilon(1e-12));

  CHECK(airygeom::log10_of_rational(Rational(0)).sign == 0);
  CHECK(airygeom::log10_of_rational(Rational(-3, 7)).sign == -1);

  // Huge values never go through a double conversion of the integers.
  BigInt big = 1;
  for (int i = 0; i < 50; ++i) big *= 10;
  const auto huge = airygeom::log10_of_rational(Rational(big, BigInt(3)));
  CHECK(huge.log10_magnitude ==
        doctest::Approx(50.0 - 0.47712125471966244).epsilon(1e-12));
}

TEST_CASE("log10 is additive over products") {
  std::mt19937_64 rng(20240517);
  for (int trial = 0; trial < 200; ++trial) {
    const long n1 = static_cast<long>(rng() % 100000) + 1;
    const long d1 = static_cast<long>(rng() % 100000) + 1;
    const long n2 = static_cast<long>(rng() % 100000) + 1;
    const long d2 = static_cast<long>(rng() % 100000) + 1;
    const Rational a(n1, d1), b(n2, d2);
    const double lhs = airygeom::log10_of_rational(a * b).log10_magnitude;
    const double rhs = airygeom::log10_of_rational(a).log10_magnitude +
                       airygeom::log10_of_rational(b).log10_magnitude;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}
