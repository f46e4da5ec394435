#include <cmath>

#include "airygeom/asymptotics.hpp"
#include "airygeom/numerics.hpp"
#include "doctest.h"

using airygeom::build_ratio_series;
using airygeom::fit_subleading;
using airygeom::leading_asymptotic_log;
using airygeom::normalized_ratio;
using airygeom::Partition;
using airygeom::Rational;
using airygeom::RatioSeries;
using airygeom::RecursionEngine;

TEST_CASE("leading asymptotic log at (2,1,(4))") {
  // Independent route: Gamma(3) = 2 exactly, so the law is 27/(8 pi)/945.
  const double expected = std::log10(27.0 / (8.0 * 3.14159265358979323846) / 945.0);
  const double got = leading_asymptotic_log(2, 1, Partition({4}), Rational(2, 3));
  CHECK(got == doctest::Approx(expected).epsilon(1e-12));
  CHECK(got == doctest::Approx(-2.944).epsilon(1e-3));
}

TEST_CASE("leading asymptotic log responds exactly to rescaling A") {
  const Partition d({3, 0, 0});
  const double base = leading_asymptotic_log(1, 3, d, Rational(2, 3));
  CHECK(std::isfinite(base));
  const double rescaled = leading_asymptotic_log(1, 3, d, Rational(2, 30));
  // A -> A/10 adds exactly 2g-2+n decades.
  CHECK(rescaled - base == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("leading asymptotic log input validation") {
  CHECK_THROWS_AS(leading_asymptotic_log(2, 1, Partition({3}), Rational(2, 3)),
                  std::domain_error);  // off-dimension
  CHECK_THROWS_AS(leading_asymptotic_log(0, 2, Partition({0, 0}), Rational(2, 3)),
                  std::domain_error);  // unstable
  CHECK_THROWS_AS(leading_asymptotic_log(2, 1, Partition({4}), Rational(0)),
                  std::domain_error);
}

TEST_CASE("normalized ratios approach one from below") {
  RecursionEngine engine;
  CHECK(normalized_ratio(engine, 2, 1, Partition({4})) ==
        doctest::Approx(0.7636).epsilon(2e-3));
  CHECK(normalized_ratio(engine, 3, 1, Partition({7})) ==
        doctest::Approx(0.8424).epsilon(2e-3));
  CHECK(normalized_ratio(engine, 4, 1, Partition({10})) ==
        doctest::Approx(0.8820).epsilon(2e-3));

  double previous = 0.0;
  for (int g = 2; g <= 8; ++g) {
    const double r = normalized_ratio(engine, g, 1, Partition({static_cast<unsigned>(3 * g - 2)}));
    CHECK(r > previous);
    CHECK(r < 1.0);
    previous = r;
  }
}

TEST_CASE("g (1 - R) stays within a factor two") {
  RecursionEngine engine;
  double lo = 1e300, hi = 0.0;
  for (int g = 3; g <= 8; ++g) {
    const double r = normalized_ratio(engine, g, 1, Partition({static_cast<unsigned>(3 * g - 2)}));
    const double v = g * (1.0 - r);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo < 2.0);
}

TEST_CASE("ratio series construction and regime flag") {
  RecursionEngine engine;
  const RatioSeries series = build_ratio_series(engine, 1, 2, 5);
  REQUIRE(series.entries.size() == 4);
  for (std::size_t i = 1; i < series.entries.size(); ++i)
    CHECK(series.entries[i - 1].g < series.entries[i].g);
  for (const auto& e : series.entries) {
    CHECK(e.ratio > 0.0);
    CHECK(e.in_theorem_regime);  // n = 1, 1 <= g everywhere here
  }
  const RatioSeries wide = build_ratio_series(engine, 3, 2, 5);
  CHECK_FALSE(wide.entries.front().in_theorem_regime);  // 9 > g
}

TEST_CASE("subleading fit recovers planted coefficients") {
  RatioSeries planted;
  for (int g = 2; g <= 9; ++g) {
    const double x = 1.0 / (2 * g - 2);  // 2g-3+n at n = 1
    airygeom::RatioEntry e;
    e.g = g;
    e.n = 1;
    e.d = Partition({static_cast<unsigned>(3 * g - 2)});
    e.ratio = 1.0 + 0.5 * x;
    planted.entries.push_back(e);
  }
  const auto fit1 = fit_subleading(planted, 1);
  REQUIRE(fit1.coefficients.size() == 1);
  CHECK(fit1.coefficients[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(fit1.alpha1() == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(fit1.rss < 1e-18);

  for (auto& e : planted.entries) e.ratio = 1.0;
  const auto flat = fit_subleading(planted, 2);
  for (double c : flat.coefficients) CHECK(c == doctest::Approx(0.0).epsilon(1e-12));

  for (auto& e : planted.entries) {
    const double x = 1.0 / (2 * e.g - 2);
    e.ratio = 1.0 - 0.7083 * x + 0.1234 * x * x;
  }
  const auto fit2 = fit_subleading(planted, 2);
  REQUIRE(fit2.coefficients.size() == 2);
  CHECK(std::abs(fit2.coefficients[0] - (-0.7083)) < 1e-6);
  CHECK(std::abs(fit2.coefficients[1] - 0.1234) < 1e-6);
}

TEST_CASE("subleading fit on engine ratios") {
  RecursionEngine engine;
  const RatioSeries series = build_ratio_series(engine, 1, 3, 8);
  const auto fit1 = fit_subleading(series, 1);
  const auto fit2 = fit_subleading(series, 2);
  CHECK(std::isfinite(fit2.alpha1()));
  CHECK(fit2.rss <= fit1.rss);
  // The one-point ratios sit below 1, so the leading correction is negative.
  CHECK(fit1.coefficients[0] < 0.0);
}

TEST_CASE("subleading fit error paths") {
  RatioSeries tiny;
  airygeom::RatioEntry e;
  e.g = 2;
  e.n = 1;
  e.d = Partition({4});
  e.ratio = 0.76;
  tiny.entries.push_back(e);
  CHECK_THROWS(fit_subleading(tiny, 1));  // needs order+1 points

  RatioSeries duplicated;
  for (int i = 0; i < 3; ++i) duplicated.entries.push_back(e);
  CHECK_THROWS(fit_subleading(duplicated, 2));  // rank-deficient design
}

TEST_CASE("csv export") {
  RecursionEngine engine;
  const RatioSeries series = build_ratio_series(engine, 1, 2, 3);
  const std::string csv = airygeom::ratio_series_csv(series);
  CHECK(csv.rfind("g,n,partition,ratio\n", 0) == 0);
  CHECK(csv.find("2,1,4,0.7635") != std::string::npos);
}
