#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>

#include "airygeom/conformal.hpp"
#include "doctest.h"
#include "json.hpp"

using airygeom::calibrate_intervals;
using airygeom::evaluate_target_coverage;
using airygeom::IntervalReport;
using airygeom::PredictionSample;

namespace {

// Deterministic Gaussian source (splitmix64 + Box-Muller).
struct Gauss {
  std::uint64_t state;
  explicit Gauss(std::uint64_t seed) : state(seed) {}
  double uniform() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }
  double operator()() {
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.2831853071795864769 * uniform());
  }
};

std::vector<PredictionSample> heteroscedastic(std::size_t per_group, std::uint64_t seed) {
  Gauss gauss(seed);
  std::vector<PredictionSample> samples;
  for (int group = 1; group <= 2; ++group) {
    const double scale = group == 1 ? 1.0 : 10.0;
    for (std::size_t i = 0; i < per_group; ++i) {
      PredictionSample s;
      s.prediction = static_cast<double>(i) * 0.01;
      s.truth = s.prediction + scale * gauss();
      s.n = group;
      s.covariate = static_cast<double>(i);
      samples.push_back(s);
    }
  }
  return samples;
}

}  // namespace

TEST_CASE("zero residuals give zero-width perfect coverage") {
  std::vector<PredictionSample> samples;
  for (int i = 0; i < 40; ++i)
    samples.push_back({1.0 * i, 1.0 * i, 1, static_cast<double>(i)});
  const IntervalReport report = calibrate_intervals(samples, 0.1, 20);
  CHECK(report.coverage == 1.0);
  CHECK(report.mean_width == 0.0);
  for (double h : report.half_widths) CHECK(h == 0.0);
}

TEST_CASE("constant residuals give constant half-widths") {
  std::vector<PredictionSample> samples;
  for (int i = 0; i < 50; ++i)
    samples.push_back({1.0 * i, 1.0 * i + 0.25, 1, static_cast<double>(i)});
  const IntervalReport report = calibrate_intervals(samples, 0.1, 20);
  CHECK(report.coverage == 1.0);
  for (double h : report.half_widths) CHECK(h == doctest::Approx(0.25));
  CHECK(report.mean_width == doctest::Approx(0.5));  // full width
}

TEST_CASE("window and group validation") {
  std::vector<PredictionSample> samples;
  for (int i = 0; i < 15; ++i)
    samples.push_back({0.0, 1.0, 3, static_cast<double>(i)});
  CHECK_THROWS_WITH_AS(calibrate_intervals(samples, 0.1, 20), doctest::Contains("n=3"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(calibrate_intervals(samples, 0.1, 5),
                       doctest::Contains("ceil(1/alpha)"), std::invalid_argument);
  CHECK_THROWS(calibrate_intervals(samples, 0.0, 20));
}

TEST_CASE("gaussian calibration hits the target band") {
  const auto samples = heteroscedastic(2500, 99);  // N = 5000 total
  const IntervalReport report = calibrate_intervals(samples, 0.1, 20);
  CHECK(report.coverage >= 0.87);
  CHECK(report.coverage <= 0.93);

  const auto check = evaluate_target_coverage(report, 0.1);
  CHECK(check.pass);

  // The scale-10 group must see proportionally wider intervals.
  REQUIRE(report.per_group.size() == 2);
  const double ratio = report.per_group[1].mean_width / report.per_group[0].mean_width;
  CHECK(ratio >= 5.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("increasing alpha never widens intervals") {
  const auto samples = heteroscedastic(300, 7);
  const IntervalReport tight = calibrate_intervals(samples, 0.05, 40);
  const IntervalReport loose = calibrate_intervals(samples, 0.2, 40);
  for (std::size_t i = 0; i < samples.size(); ++i)
    CHECK(loose.half_widths[i] <= tight.half_widths[i]);
}

TEST_CASE("coverage evaluation thresholds") {
  IntervalReport report;
  report.coverage = 0.9035;
  CHECK(evaluate_target_coverage(report, 0.1, 0.03).pass);
  report.coverage = 0.7479;
  CHECK_FALSE(evaluate_target_coverage(report, 0.1, 0.03).pass);
  report.coverage = 0.9;
  const auto exact = evaluate_target_coverage(report, 0.1, 0.03);
  CHECK(exact.pass);
  CHECK(exact.deviation == doctest::Approx(0.0));
}

TEST_CASE("sample io: csv, jsonl, and the report") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto csv_path = dir / "airygeom_conformal.csv";
  {
    std::ofstream out(csv_path);
    out << "truth,prediction,n,covariate\n";
    out << "1.5,1.0,2,0.5\n";
    out << "2.5,2.0,2,1.5\n";
  }
  auto samples = airygeom::read_samples(csv_path);
  REQUIRE(samples.size() == 2);
  CHECK(samples[0].truth == 1.5);
  CHECK(samples[0].prediction == 1.0);
  CHECK(samples[0].n == 2);
  CHECK(samples[1].covariate == 1.5);

  const auto jsonl_path = dir / "airygeom_conformal.jsonl";
  {
    std::ofstream out(jsonl_path);
    out << R"({"prediction":1.0,"truth":1.5,"n":2})" << "\n";
  }
  samples = airygeom::read_samples(jsonl_path);
  REQUIRE(samples.size() == 1);
  CHECK(samples[0].covariate == 1.0);  // defaults to |prediction|

  std::vector<PredictionSample> batch;
  for (int i = 0; i < 30; ++i)
    batch.push_back({1.0 * i, 1.0 * i, 4, static_cast<double>(i)});
  const auto parsed = nlohmann::json::parse(
      airygeom::report_to_json(calibrate_intervals(batch, 0.1, 20)));
  CHECK(parsed.at("coverage").get<double>() == 1.0);
  CHECK(parsed.at("per_group").contains("4"));

  std::filesystem::remove(csv_path);
  std::filesystem::remove(jsonl_path);
}
