#include "airygeom/asymptotics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "airygeom/numerics.hpp"

namespace airygeom {

namespace {

constexpr double kLog10Of2 = 0.30102999566398119521;
constexpr double kLog10Of4Pi = 1.0992098640220977976;  // log10(4 pi)
constexpr double kLnOf10 = 2.3025850929940456840;

// Solves the symmetric positive definite system m x = y in place (Cholesky).
// Throws when a pivot collapses, which signals a rank-deficient design.
std::vector<double> solve_spd(std::vector<double> m, std::vector<double> y, std::size_t k) {
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = m[i * k + j];
      for (std::size_t p = 0; p < j; ++p) sum -= m[i * k + p] * m[j * k + p];
      if (i == j) {
        if (sum <= 1e-300) throw std::runtime_error("fit: rank-deficient design");
        m[i * k + i] = std::sqrt(sum);
      } else {
        m[i * k + j] = sum / m[j * k + j];
      }
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    double sum = y[i];
    for (std::size_t p = 0; p < i; ++p) sum -= m[i * k + p] * y[p];
    y[i] = sum / m[i * k + i];
  }
  for (std::size_t i = k; i-- > 0;) {
    double sum = y[i];
    for (std::size_t p = i + 1; p < k; ++p) sum -= m[p * k + i] * y[p];
    y[i] = sum / m[i * k + i];
  }
  return y;
}

}  // namespace

double leading_asymptotic_log(int g, int n, const Partition& d,
                              const Rational& growth_constant) {
  const SurfaceClass sc{g, n};
  if (!sc.stable() || static_cast<int>(d.size()) != n)
    throw std::domain_error("leading_asymptotic_log: unstable surface class");
  if (d.weight() != static_cast<unsigned long>(sc.dimension()))
    throw std::domain_error("leading_asymptotic_log: partition misses dimension 3g-3+n");
  if (growth_constant.sign() <= 0)
    throw std::domain_error("leading_asymptotic_log: growth constant must be positive");

  const double euler = static_cast<double>(sc.euler());
  double value = n * kLog10Of2 - kLog10Of4Pi;
  value += log_gamma(euler) / kLnOf10;
  value -= euler * log10_of_rational(growth_constant).log10_magnitude;
  for (unsigned di : d.parts())
    value -= log10_of_bigint(double_factorial(2L * di + 1));
  return value;
}

double normalized_ratio(RecursionEngine& engine, int g, int n, const Partition& d) {
  const Rational value = engine.intersection_number(g, d);
  if (value.sign() <= 0)
    throw std::domain_error("normalized_ratio: vanishing intersection number");
  const double lhs = log10_of_rational(value).log10_magnitude;
  const double rhs = leading_asymptotic_log(g, n, d, Rational(2, 3));
  return std::pow(10.0, lhs - rhs);
}

RatioSeries build_ratio_series(RecursionEngine& engine, int n, int g_min, int g_max) {
  if (g_min > g_max) throw std::invalid_argument("build_ratio_series: empty genus range");
  RatioSeries series;
  for (int g = g_min; g <= g_max; ++g) {
    const SurfaceClass sc{g, n};
    if (!sc.stable() || sc.dimension() < 0) continue;
    std::vector<unsigned> parts(static_cast<std::size_t>(n), 0u);
    parts[0] = static_cast<unsigned>(sc.dimension());
    const Partition d(std::move(parts));
    RatioEntry entry{g, n, d, normalized_ratio(engine, g, n, d),
                     static_cast<long>(n) * n <= g};
    series.entries.push_back(std::move(entry));
  }
  return series;
}

FitReport fit_subleading(const RatioSeries& series, int order) {
  if (order < 1) throw std::invalid_argument("fit_subleading: order must be >= 1");
  const std::size_t k = static_cast<std::size_t>(order);
  std::vector<double> xs, ys;
  for (const auto& e : series.entries) {
    const int denom = 2 * e.g - 3 + e.n;
    if (denom <= 0)
      throw std::domain_error("fit_subleading: expansion variable 2g-3+n not positive");
    xs.push_back(1.0 / denom);
    ys.push_back(e.ratio - 1.0);
  }
  if (xs.size() < k + 1)
    throw std::invalid_argument("fit_subleading: need at least order+1 entries");

  // Normal equations over the power basis x, x^2, ..., x^order.
  std::vector<double> gram(k * k, 0.0), moment(k, 0.0);
  for (std::size_t s = 0; s < xs.size(); ++s) {
    std::vector<double> row(k);
    double p = 1.0;
    for (std::size_t c = 0; c < k; ++c) {
      p *= xs[s];
      row[c] = p;
    }
    for (std::size_t i = 0; i < k; ++i) {
      moment[i] += row[i] * ys[s];
      for (std::size_t j = 0; j < k; ++j) gram[i * k + j] += row[i] * row[j];
    }
  }
  FitReport report;
  report.coefficients = solve_spd(std::move(gram), std::move(moment), k);
  for (std::size_t s = 0; s < xs.size(); ++s) {
    double fit = 0.0, p = 1.0;
    for (std::size_t c = 0; c < k; ++c) {
      p *= xs[s];
      fit += report.coefficients[c] * p;
    }
    report.rss += (ys[s] - fit) * (ys[s] - fit);
  }
  return report;
}

std::string ratio_series_csv(const RatioSeries& series) {
  std::ostringstream out;
  out << "g,n,partition,ratio\n";
  out.precision(12);
  for (const auto& e : series.entries)
    out << e.g << ',' << e.n << ',' << e.d.to_string('-') << ',' << e.ratio << '\n';
  return out.str();
}

}  // namespace airygeom
