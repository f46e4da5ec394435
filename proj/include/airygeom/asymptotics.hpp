#pragma once

#include <string>
#include <vector>

#include "airygeom/partition.hpp"
#include "airygeom/rational.hpp"
#include "airygeom/recursion.hpp"

namespace airygeom {

/// log10 of the large-genus growth law
///   2^n / (4 pi) * Gamma(2g-2+n) / A^{2g-2+n} / prod_i (2 d_i + 1)!!
/// evaluated entirely in the log domain. Requires a stable (g, n), a
/// partition of 3g - 3 + n, and A > 0.
double leading_asymptotic_log(int g, int n, const Partition& d, const Rational& growth_constant);

/// Exact value over the A = 2/3 growth law: approaches 1 as g grows.
double normalized_ratio(RecursionEngine& engine, int g, int n, const Partition& d);

struct RatioEntry {
  int g = 0;
  int n = 0;
  Partition d;
  double ratio = 0.0;
  /// The growth law's error bound is only stated for n = o(sqrt g); entries
  /// with n^2 > g are computed anyway but flagged.
  bool in_theorem_regime = true;
};

struct RatioSeries {
  std::vector<RatioEntry> entries;  // sorted by Euler characteristic
};

/// Ratios for g = g_min..g_max at fixed n, each on the representative
/// partition (3g-3+n, 0, ..., 0). Requires g_min >= 2 when n = 1 so the
/// expansion variable 2g - 3 + n stays positive.
RatioSeries build_ratio_series(RecursionEngine& engine, int n, int g_min, int g_max);

/// Least-squares fit of ratio - 1 against powers 1..order of 1/(2g - 3 + n).
/// `coefficients[k-1]` multiplies the k-th power; the conventional first
/// subleading coefficient carries an extra factor 2/3, exposed as alpha1().
struct FitReport {
  std::vector<double> coefficients;
  double rss = 0.0;
  double alpha1() const { return coefficients.empty() ? 0.0 : coefficients[0] / (2.0 / 3.0); }
};

FitReport fit_subleading(const RatioSeries& series, int order);

/// Columns g, n, partition (dash-joined), ratio.
std::string ratio_series_csv(const RatioSeries& series);

}  // namespace airygeom
