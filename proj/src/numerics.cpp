#include "airygeom/numerics.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace airygeom {

Rational::Rational(long num, long den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational::Rational(BigInt num, BigInt den) {
  if (sgn(den) == 0) throw std::domain_error("Rational: zero denominator");
  v_ = mpq_class(std::move(num), std::move(den));
  v_.canonicalize();
}

Rational Rational::from_string(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("Rational: empty string");
  std::string str(s);
  const auto slash = str.find('/');
  mpq_class q;
  if (q.set_str(str, 10) != 0)
    throw std::invalid_argument("Rational: malformed '" + str + "'");
  if (slash != std::string::npos && sgn(q.get_den()) == 0)
    throw std::domain_error("Rational: zero denominator in '" + str + "'");
  q.canonicalize();
  Rational r;
  r.v_ = std::move(q);
  return r;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::operator-() const {
  Rational r;
  r.v_ = -v_;
  return r;
}

BigInt double_factorial(long m) {
  if (m < -1) throw std::domain_error("double_factorial: argument below -1");
  BigInt r = 1;
  for (long k = m; k >= 2; k -= 2) r *= k;
  return r;
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
  constexpr double kPi = 3.14159265358979323846;
  if (x < 0.5) {
    // Reflection keeps the Lanczos series in its accurate range.
    return std::log(kPi / std::sin(kPi * x)) - log_gamma(1.0 - x);
  }
  // Godfrey/Toth coefficients for g = 7, 9 terms; ~1e-15 relative on Gamma.
  static constexpr double kCoeff[9] = {
      0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
      771.32342877765313,       -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};
  const double z = x - 1.0;
  double sum = kCoeff[0];
  for (int i = 1; i < 9; ++i) sum += kCoeff[i] / (z + i);
  const double base = z + 7.5;
  constexpr double kHalfLogTwoPi = 0.91893853320467274178;
  return kHalfLogTwoPi + (z + 0.5) * std::log(base) - base + std::log(sum);
}

double log10_of_bigint(const BigInt& n) {
  if (sgn(n) <= 0) throw std::domain_error("log10_of_bigint: requires n > 0");
  long exp2 = 0;
  const double mantissa = mpz_get_d_2exp(&exp2, n.get_mpz_t());
  constexpr double kLog10Of2 = 0.30102999566398119521;
  return std::log10(mantissa) + static_cast<double>(exp2) * kLog10Of2;
}

LogValue log10_of_rational(const Rational& q) {
  const int s = q.sign();
  if (s == 0) return LogValue{0.0, 0};
  BigInt num = q.numerator();
  if (s < 0) num = -num;
  return LogValue{log10_of_bigint(num) - log10_of_bigint(q.denominator()), s};
}

}  // namespace airygeom
