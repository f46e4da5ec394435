#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace airygeom {

/// One calibration point, on the log10 scale. Samples are grouped by the
/// number of marked points n and ordered inside each group by the covariate
/// (defaults to |prediction| at the ingest boundary when absent).
struct PredictionSample {
  double prediction = 0.0;
  double truth = 0.0;
  int n = 0;
  double covariate = 0.0;
};

struct GroupReport {
  int n = 0;
  std::size_t count = 0;
  double coverage = 0.0;
  double mean_width = 0.0;
};

struct IntervalReport {
  /// Aligned with the input samples.
  std::vector<double> half_widths;
  double coverage = 0.0;
  /// Mean full interval width (2x half-width), log scale.
  double mean_width = 0.0;
  std::vector<GroupReport> per_group;
};

/// Sliding-window split-conformal intervals. Within each n-group, samples are
/// ordered by covariate and each one receives the ceil((W+1)(1-alpha))-th
/// order statistic of the absolute residuals over the W samples preceding it;
/// the first W samples of a group share the quantile of the initial window.
/// Requires W >= ceil(1/alpha) and at least W samples per group.
IntervalReport calibrate_intervals(std::span<const PredictionSample> samples, double alpha,
                                   std::size_t window);

struct CoverageCheck {
  bool pass = false;
  double coverage = 0.0;
  double deviation = 0.0;  // |coverage - (1 - alpha)|
  double tolerance = 0.0;
};

CoverageCheck evaluate_target_coverage(const IntervalReport& report, double alpha,
                                       double tolerance = 0.03);

/// CSV (with a header naming prediction, truth, n, covariate; covariate
/// optional) or JSONL with the same keys, chosen by sniffing the first byte.
std::vector<PredictionSample> read_samples(const std::filesystem::path& file);

std::string report_to_json(const IntervalReport& report);

}  // namespace airygeom
