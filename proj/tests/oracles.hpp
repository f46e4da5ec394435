// Test-side oracles, independent of the library paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "airygeom/rational.hpp"

namespace oracles {

// Number of partitions of `weight` into exactly `length` non-negative parts
// (equivalently, into at most `length` positive parts), by the classic
// two-way recurrence.
inline std::uint64_t partition_count(unsigned weight, unsigned length) {
  // p[w][k] = partitions of w into parts of size <= k.
  std::vector<std::vector<std::uint64_t>> p(weight + 1,
                                            std::vector<std::uint64_t>(weight + 1, 0));
  for (unsigned k = 0; k <= weight; ++k) p[0][k] = 1;
  for (unsigned w = 1; w <= weight; ++w)
    for (unsigned k = 1; k <= weight; ++k)
      p[w][k] = p[w][k - 1] + (w >= k ? p[w - k][k] : 0);
  // Conjugation: at most `length` parts == parts of size <= length.
  const unsigned cap = std::min(length, weight);
  return weight == 0 ? 1 : p[weight][cap];
}

// n! as an exact integer.
inline airygeom::BigInt factorial(unsigned n) {
  airygeom::BigInt r = 1;
  for (unsigned k = 2; k <= n; ++k) r *= k;
  return r;
}

// Smallest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
inline double min_eigenvalue_symmetric(std::vector<double> m, std::size_t n) {
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += m[i * n + j] * m[i * n + j];
    if (off < 1e-24) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m[p * n + q];
        if (apq == 0) continue;
        const double app = m[p * n + p], aqq = m[q * n + q];
        const double theta = 0.5 * std::atan2(2 * apq, aqq - app);
        const double c = std::cos(theta), s = std::sin(theta);
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = m[k * n + p], akq = m[k * n + q];
          m[k * n + p] = c * akp - s * akq;
          m[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = m[p * n + k], aqk = m[q * n + k];
          m[p * n + k] = c * apk - s * aqk;
          m[q * n + k] = s * apk + c * aqk;
        }
      }
    }
  }
  double min_ev = m[0];
  for (std::size_t i = 1; i < n; ++i) min_ev = std::min(min_ev, m[i * n + i]);
  return min_ev;
}

}  // namespace oracles
