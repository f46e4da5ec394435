#pragma once

#include "airygeom/rational.hpp"

namespace airygeom {

/// Sign/magnitude representation of log10 of an exact value. When sign is 0
/// the magnitude field carries no information.
struct LogValue {
  double log10_magnitude = 0.0;
  int sign = 0;
};

/// m!! = m (m-2) (m-4) ... down to 2 or 1. Empty products (m = -1, 0) are 1.
/// Throws for m < -1.
BigInt double_factorial(long m);

/// Natural log of the Euler Gamma function for x > 0 (Lanczos approximation,
/// 9 terms, g = 7; reflection below 0.5).
double log_gamma(double x);

/// log10 of n > 0, computed from the mantissa/exponent decomposition of the
/// integer so values far beyond double range stay accurate.
double log10_of_bigint(const BigInt& n);

/// Exact-to-float boundary: sign and log10|q|, never materializing q as a
/// float.
LogValue log10_of_rational(const Rational& q);

}  // namespace airygeom
