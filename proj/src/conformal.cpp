#include "airygeom/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace airygeom {

IntervalReport calibrate_intervals(std::span<const PredictionSample> samples, double alpha,
                                   std::size_t window) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("calibrate_intervals: alpha must lie in (0, 1)");
  const auto min_window = static_cast<std::size_t>(std::ceil(1.0 / alpha));
  if (window < min_window)
    throw std::invalid_argument("calibrate_intervals: window must be >= ceil(1/alpha) = " +
                                std::to_string(min_window));

  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < samples.size(); ++i) groups[samples[i].n].push_back(i);
  for (const auto& [n, idx] : groups) {
    if (idx.size() < window)
      throw std::invalid_argument("calibrate_intervals: group n=" + std::to_string(n) +
                                  " has " + std::to_string(idx.size()) +
                                  " samples, fewer than the window " + std::to_string(window));
  }

  // Rank of the finite-sample-corrected quantile within a window.
  std::size_t rank = static_cast<std::size_t>(
      std::ceil((static_cast<double>(window) + 1.0) * (1.0 - alpha)));
  rank = std::min(std::max<std::size_t>(rank, 1), window);

  IntervalReport report;
  report.half_widths.assign(samples.size(), 0.0);
  std::size_t covered_total = 0;
  double width_total = 0.0;

  for (auto& [n, idx] : groups) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return samples[a].covariate < samples[b].covariate;
    });
    std::vector<double> residuals(idx.size());
    for (std::size_t t = 0; t < idx.size(); ++t)
      residuals[t] = std::abs(samples[idx[t]].truth - samples[idx[t]].prediction);

    const auto window_quantile = [&](std::size_t begin) {
      std::vector<double> buf(residuals.begin() + static_cast<std::ptrdiff_t>(begin),
                              residuals.begin() + static_cast<std::ptrdiff_t>(begin + window));
      std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                       buf.end());
      return buf[rank - 1];
    };

    const double initial = window_quantile(0);
    std::size_t covered = 0;
    double width = 0.0;
    for (std::size_t t = 0; t < idx.size(); ++t) {
      const double half = t < window ? initial : window_quantile(t - window);
      report.half_widths[idx[t]] = half;
      if (residuals[t] <= half) ++covered;
      width += 2.0 * half;
    }
    covered_total += covered;
    width_total += width;
    report.per_group.push_back({n, idx.size(),
                                static_cast<double>(covered) / static_cast<double>(idx.size()),
                                width / static_cast<double>(idx.size())});
  }

  report.coverage = samples.empty()
                        ? 0.0
                        : static_cast<double>(covered_total) / static_cast<double>(samples.size());
  report.mean_width = samples.empty() ? 0.0 : width_total / static_cast<double>(samples.size());
  return report;
}

CoverageCheck evaluate_target_coverage(const IntervalReport& report, double alpha,
                                       double tolerance) {
  CoverageCheck check;
  check.coverage = report.coverage;
  check.deviation = std::abs(report.coverage - (1.0 - alpha));
  check.tolerance = tolerance;
  check.pass = check.deviation <= tolerance;
  return check;
}

namespace {

std::vector<PredictionSample> read_samples_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("samples: empty file");
  std::vector<std::string> columns;
  {
    std::stringstream ss(header);
    std::string token;
    while (std::getline(ss, token, ',')) columns.push_back(token);
  }
  int c_pred = -1, c_truth = -1, c_n = -1, c_cov = -1;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] == "prediction") c_pred = static_cast<int>(c);
    if (columns[c] == "truth") c_truth = static_cast<int>(c);
    if (columns[c] == "n") c_n = static_cast<int>(c);
    if (columns[c] == "covariate") c_cov = static_cast<int>(c);
  }
  if (c_pred < 0 || c_truth < 0 || c_n < 0)
    throw std::runtime_error("samples: header must name prediction, truth, n");

  std::vector<PredictionSample> samples;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string token;
    std::vector<std::string> cells;
    while (std::getline(ss, token, ',')) cells.push_back(token);
    PredictionSample s;
    s.prediction = std::stod(cells.at(static_cast<std::size_t>(c_pred)));
    s.truth = std::stod(cells.at(static_cast<std::size_t>(c_truth)));
    s.n = std::stoi(cells.at(static_cast<std::size_t>(c_n)));
    s.covariate = c_cov >= 0 ? std::stod(cells.at(static_cast<std::size_t>(c_cov)))
                             : std::abs(s.prediction);
    samples.push_back(s);
  }
  return samples;
}

std::vector<PredictionSample> read_samples_jsonl(std::istream& in) {
  std::vector<PredictionSample> samples;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto obj = nlohmann::json::parse(line);
    PredictionSample s;
    s.prediction = obj.at("prediction").get<double>();
    s.truth = obj.at("truth").get<double>();
    s.n = obj.at("n").get<int>();
    s.covariate = obj.contains("covariate") ? obj.at("covariate").get<double>()
                                            : std::abs(s.prediction);
    samples.push_back(s);
  }
  return samples;
}

}  // namespace

std::vector<PredictionSample> read_samples(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("samples: cannot open " + file.string());
  const int first = in.peek();
  if (first == '{') return read_samples_jsonl(in);
  return read_samples_csv(in);
}

std::string report_to_json(const IntervalReport& report) {
  nlohmann::json per_group = nlohmann::json::object();
  for (const auto& group : report.per_group) {
    per_group[std::to_string(group.n)] = {{"count", group.count},
                                          {"coverage", group.coverage},
                                          {"mean_width", group.mean_width}};
  }
  const nlohmann::json out{{"coverage", report.coverage},
                           {"mean_width", report.mean_width},
                           {"per_group", per_group}};
  return out.dump(2);
}

}  // namespace airygeom
