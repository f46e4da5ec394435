#include "airygeom/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "airygeom/asymptotics.hpp"
#include "airygeom/conformal.hpp"
#include "airygeom/numerics.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace airygeom {

FeatureMatrix cosine_matrix(const FeatureMatrix& features) {
  const std::size_t rows = features.rows;
  std::vector<double> norms(rows, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    double sq = 0.0;
    for (std::size_t c = 0; c < features.cols; ++c) sq += features.at(r, c) * features.at(r, c);
    if (sq == 0.0)
      throw std::domain_error("cosine_matrix: zero row " + std::to_string(r));
    norms[r] = std::sqrt(sq);
  }
  FeatureMatrix s{rows, rows, std::vector<double>(rows * rows, 0.0)};
  for (std::size_t i = 0; i < rows; ++i) {
    s.at(i, i) = 1.0;
    for (std::size_t j = i + 1; j < rows; ++j) {
      double dot = 0.0;
      for (std::size_t c = 0; c < features.cols; ++c) dot += features.at(i, c) * features.at(j, c);
      const double value = dot / (norms[i] * norms[j]);
      s.at(i, j) = value;
      s.at(j, i) = value;
    }
  }
  return s;
}

BoolMatrix dilaton_matrix(std::span<const AmplitudeKey> keys) {
  const std::size_t m = keys.size();
  BoolMatrix out{m, std::vector<std::uint8_t>(m * m, 0)};
  const auto reduces = [](const AmplitudeKey& big, const AmplitudeKey& small) {
    if (big.g != small.g || big.d.size() != small.d.size() + 1) return false;
    std::vector<unsigned> extended = small.d.parts();
    extended.push_back(1);
    return Partition(std::move(extended)) == big.d;
  };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j && (reduces(keys[i], keys[j]) || reduces(keys[j], keys[i])))
        out.values[i * m + j] = 1;
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> train_test_split(
    std::size_t rows, std::uint64_t seed) {
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), 0);
  // Fisher-Yates over a fixed engine keeps splits identical across platforms.
  std::uint64_t state = seed ^ 0xd1b54a32d192ed03ull;
  const auto next = [&state]() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  for (std::size_t i = rows; i > 1; --i) std::swap(order[i - 1], order[next() % i]);
  const std::size_t train_size = rows - rows / 5;  // 80/20
  std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_size));
  std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(train_size), order.end());
  return {std::move(train), std::move(test)};
}

namespace {

// Gaussian elimination with partial pivoting; throws on singular systems.
std::vector<double> solve_dense(std::vector<double> m, std::vector<double> rhs, std::size_t k) {
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::abs(m[r * k + col]) > std::abs(m[pivot * k + col])) pivot = r;
    if (std::abs(m[pivot * k + col]) < 1e-10)
      throw std::domain_error("linear probe: rank-deficient design; set ridge > 0");
    if (pivot != col) {
      for (std::size_t c = 0; c < k; ++c) std::swap(m[pivot * k + c], m[col * k + c]);
      std::swap(rhs[pivot], rhs[col]);
    }
    const double inv = 1.0 / m[col * k + col];
    for (std::size_t r = col + 1; r < k; ++r) {
      const double f = m[r * k + col] * inv;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < k; ++c) m[r * k + c] -= f * m[col * k + c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (std::size_t col = k; col-- > 0;) {
    double sum = rhs[col];
    for (std::size_t c = col + 1; c < k; ++c) sum -= m[col * k + c] * rhs[c];
    rhs[col] = sum / m[col * k + col];
  }
  return rhs;
}

struct LinearModel {
  std::vector<double> beta;
  double intercept = 0.0;

  double predict(const FeatureMatrix& x, std::size_t row) const {
    double v = intercept;
    for (std::size_t c = 0; c < x.cols; ++c) v += beta[c] * x.at(row, c);
    return v;
  }
};

LinearModel fit_ridge(const FeatureMatrix& x, std::span<const double> y,
                      std::span<const std::size_t> rows, double ridge) {
  const std::size_t k = x.cols;
  std::vector<double> x_mean(k, 0.0);
  double y_mean = 0.0;
  for (std::size_t r : rows) {
    for (std::size_t c = 0; c < k; ++c) x_mean[c] += x.at(r, c);
    y_mean += y[r];
  }
  for (auto& m : x_mean) m /= static_cast<double>(rows.size());
  y_mean /= static_cast<double>(rows.size());

  // Centered normal equations; the intercept is recovered afterwards and
  // never penalized.
  std::vector<double> gram(k * k, 0.0), moment(k, 0.0);
  for (std::size_t r : rows) {
    for (std::size_t i = 0; i < k; ++i) {
      const double xi = x.at(r, i) - x_mean[i];
      moment[i] += xi * (y[r] - y_mean);
      for (std::size_t j = 0; j < k; ++j) gram[i * k + j] += xi * (x.at(r, j) - x_mean[j]);
    }
  }
  for (std::size_t i = 0; i < k; ++i) gram[i * k + i] += ridge;

  LinearModel model;
  model.beta = solve_dense(std::move(gram), std::move(moment), k);
  model.intercept = y_mean;
  for (std::size_t c = 0; c < k; ++c) model.intercept -= model.beta[c] * x_mean[c];
  return model;
}

}  // namespace

ProbeReport fit_probe(const FeatureMatrix& features, std::span<const double> targets,
                      const ProbeConfig& config) {
  if (features.rows != targets.size())
    throw std::invalid_argument("fit_probe: rows and targets disagree");
  if (features.rows < 20)
    throw std::invalid_argument("fit_probe: need at least 20 rows");

  const auto [train_rows, test_rows] = train_test_split(features.rows, config.seed);

  ProbeReport report;
  report.kind = config.kind;
  report.held_out_indices = test_rows;

  std::vector<double> test_truth, test_pred;
  if (config.kind == ProbeKind::Linear) {
    const LinearModel model = fit_ridge(features, targets, train_rows, config.ridge);
    for (std::size_t r : test_rows) {
      test_truth.push_back(targets[r]);
      test_pred.push_back(model.predict(features, r));
    }
  } else {
    std::vector<double> x_train, y_train, x_test;
    for (std::size_t r : train_rows) {
      for (std::size_t c = 0; c < features.cols; ++c) x_train.push_back(features.at(r, c));
      y_train.push_back(targets[r]);
    }
    for (std::size_t r : test_rows) {
      for (std::size_t c = 0; c < features.cols; ++c) x_test.push_back(features.at(r, c));
      test_truth.push_back(targets[r]);
    }
    MlpRegressor net(config.net);
    net.fit(x_train, features.cols, y_train);
    test_pred = net.predict(x_test, features.cols);
  }

  report.held_out_predictions = test_pred;
  report.held_out_r2 = r_squared(test_truth, test_pred);

  if (test_rows.size() >= config.window) {
    std::vector<PredictionSample> samples;
    samples.reserve(test_rows.size());
    for (std::size_t i = 0; i < test_rows.size(); ++i)
      samples.push_back({test_pred[i], test_truth[i], 0, std::abs(test_pred[i])});
    const IntervalReport intervals = calibrate_intervals(samples, config.alpha, config.window);
    report.conformal_evaluated = true;
    report.coverage = intervals.coverage;
    report.mean_width = intervals.mean_width;
  }
  return report;
}

std::vector<GrowthHypothesis> growth_hypothesis_grid() {
  std::vector<GrowthHypothesis> grid;
  for (int num = 1; num <= 10; ++num)
    for (int den = 1; den <= 10; ++den)
      if (num != den) grid.push_back({num, den});
  return grid;
}

std::vector<ScanEntry> scan_growth_constant(const FeatureMatrix& features,
                                            std::span<const AmplitudeKey> keys,
                                            const ProbeConfig& config, int threads) {
  if (features.rows != keys.size())
    throw std::invalid_argument("scan_growth_constant: features and keys disagree");
  const auto grid = growth_hypothesis_grid();
  std::vector<ScanEntry> entries(grid.size());

#if !defined(_OPENMP)
  (void)threads;
#else
  #pragma omp parallel for schedule(dynamic) num_threads(std::max(1, threads)) if (threads > 1)
#endif
  for (std::ptrdiff_t h = 0; h < static_cast<std::ptrdiff_t>(grid.size()); ++h) {
    const GrowthHypothesis hyp = grid[static_cast<std::size_t>(h)];
    std::vector<double> targets;
    targets.reserve(keys.size());
    for (const auto& key : keys)
      targets.push_back(leading_asymptotic_log(key.g, static_cast<int>(key.d.size()), key.d,
                                               hyp.value()));
    const ProbeReport probe = fit_probe(features, targets, config);
    entries[static_cast<std::size_t>(h)] = {hyp, probe.held_out_r2};
  }

  std::stable_sort(entries.begin(), entries.end(), [](const ScanEntry& a, const ScanEntry& b) {
    if (a.r2 != b.r2) return a.r2 > b.r2;
    if (a.hypothesis.num != b.hypothesis.num) return a.hypothesis.num < b.hypothesis.num;
    return a.hypothesis.den < b.hypothesis.den;
  });
  return entries;
}

std::vector<std::pair<Rational, double>> collapse_by_value(std::span<const ScanEntry> entries) {
  std::map<Rational, double> best;
  for (const auto& e : entries) {
    const Rational v = e.hypothesis.value();
    auto it = best.find(v);
    if (it == best.end() || e.r2 > it->second) best[v] = e.r2;
  }
  std::vector<std::pair<Rational, double>> out(best.begin(), best.end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

double tm_loss(const FeatureMatrix& zb, const FeatureMatrix& zd, double lambda) {
  if (zb.rows != zd.rows || zb.cols != zd.cols)
    throw std::invalid_argument("tm_loss: shapes must match");
  if (zb.rows < 2) throw std::invalid_argument("tm_loss: need a batch of at least 2");
  const std::size_t rows = zb.rows, k = zb.cols;

  const auto standardize = [&](const FeatureMatrix& z) {
    FeatureMatrix out = z;
    for (std::size_t c = 0; c < k; ++c) {
      double mean = 0.0;
      for (std::size_t r = 0; r < rows; ++r) mean += z.at(r, c);
      mean /= static_cast<double>(rows);
      double var = 0.0;
      for (std::size_t r = 0; r < rows; ++r) var += (z.at(r, c) - mean) * (z.at(r, c) - mean);
      var /= static_cast<double>(rows);
      if (var <= 1e-24 * (mean * mean + 1.0))
        throw std::domain_error("tm_loss: zero-variance column " + std::to_string(c));
      const double inv = 1.0 / std::sqrt(var);
      for (std::size_t r = 0; r < rows; ++r) out.at(r, c) = (z.at(r, c) - mean) * inv;
    }
    return out;
  };

  const FeatureMatrix b = standardize(zb);
  const FeatureMatrix d = standardize(zd);

  double diag = 0.0, off = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double corr = 0.0;
      for (std::size_t r = 0; r < rows; ++r) corr += b.at(r, i) * d.at(r, j);
      corr /= static_cast<double>(rows);
      if (i == j)
        diag += (1.0 - corr) * (1.0 - corr);
      else
        off += corr * corr;
    }
  }
  return diag + lambda * off;
}

FeatureMatrix synthetic_features(RecursionEngine& engine, std::span<const AmplitudeKey> keys,
                                 const SyntheticFeatureOptions& options) {
  const std::size_t rows = keys.size();
  const std::size_t kCols = options.include_gn_block ? 9 : 2;
  FeatureMatrix features{rows, kCols, std::vector<double>(rows * kCols, 0.0)};
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& key = keys[r];
    const Rational value = engine.intersection_number(key.g, key.d);
    if (value.sign() <= 0)
      throw std::domain_error("synthetic_features: keys must be in-dimension");
    const double g = key.g;
    const double n = static_cast<double>(key.d.size());
    const double t = log10_of_rational(value).log10_magnitude;
    const double row[9] = {t, t * t, g, n, g * g, n * n, g * n, g * t, n * t};
    for (std::size_t c = 0; c < kCols; ++c) features.at(r, c) = row[c];
  }

  if (options.noise_sigma > 0.0) {
    // Per-column scale-proportional jitter, fixed engine for reproducibility.
    std::uint64_t state = options.seed ^ 0xa0761d6478bd642full;
    const auto uniform = [&state]() {
      state += 0x9e3779b97f4a7c15ull;
      std::uint64_t z = state;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      z ^= z >> 31;
      return static_cast<double>(z >> 11) * 0x1.0p-53;
    };
    const auto gauss = [&uniform]() {
      double u1 = uniform();
      while (u1 <= 1e-300) u1 = uniform();
      constexpr double kTwoPi = 6.2831853071795864769;
      return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * uniform());
    };
    for (std::size_t c = 0; c < kCols; ++c) {
      double mean = 0.0, variance = 0.0;
      for (std::size_t r = 0; r < rows; ++r) mean += features.at(r, c);
      mean /= static_cast<double>(rows);
      for (std::size_t r = 0; r < rows; ++r)
        variance += (features.at(r, c) - mean) * (features.at(r, c) - mean);
      variance /= static_cast<double>(rows);
      const double sigma = options.noise_sigma * std::sqrt(variance);
      for (std::size_t r = 0; r < rows; ++r) features.at(r, c) += sigma * gauss();
    }
  }
  return features;
}

void write_features_csv(const std::filesystem::path& file, const FeatureMatrix& features,
                        std::span<const AmplitudeKey> keys) {
  if (features.rows != keys.size())
    throw std::invalid_argument("write_features_csv: features and keys disagree");
  std::ofstream out(file);
  if (!out) throw std::runtime_error("write_features_csv: cannot open " + file.string());
  out << "g,n,d";
  for (std::size_t c = 0; c < features.cols; ++c) out << ",f" << c;
  out << '\n';
  out.precision(17);
  for (std::size_t r = 0; r < features.rows; ++r) {
    out << keys[r].g << ',' << keys[r].d.size() << ',' << keys[r].d.to_string('-');
    for (std::size_t c = 0; c < features.cols; ++c) out << ',' << features.at(r, c);
    out << '\n';
  }
}

std::pair<FeatureMatrix, std::vector<AmplitudeKey>> read_features_csv(
    const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("read_features_csv: cannot open " + file.string());
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("read_features_csv: empty file");
  std::size_t cols = 0;
  {
    std::stringstream ss(header);
    std::string token;
    std::vector<std::string> names;
    while (std::getline(ss, token, ',')) names.push_back(token);
    if (names.size() < 4 || names[0] != "g" || names[1] != "n" || names[2] != "d")
      throw std::runtime_error("read_features_csv: header must start with g,n,d");
    cols = names.size() - 3;
  }
  std::vector<AmplitudeKey> keys;
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string token;
    std::vector<std::string> cells;
    while (std::getline(ss, token, ',')) cells.push_back(token);
    if (cells.size() != cols + 3)
      throw std::runtime_error("read_features_csv: ragged row");
    AmplitudeKey key{std::stoi(cells[0]), Partition::parse(cells[2], '-')};
    if (static_cast<int>(key.d.size()) != std::stoi(cells[1]))
      throw std::runtime_error("read_features_csv: n column disagrees with partition length");
    keys.push_back(std::move(key));
    for (std::size_t c = 0; c < cols; ++c) values.push_back(std::stod(cells[3 + c]));
  }
  FeatureMatrix features{keys.size(), cols, std::move(values)};
  return {std::move(features), std::move(keys)};
}

}  // namespace airygeom
