#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "airygeom/dra.hpp"
#include "airygeom/rational.hpp"
#include "airygeom/recursion.hpp"

namespace airygeom {

/// Row-major dense matrix of sample embeddings or engineered features.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
};

/// Pairwise cosine similarities between rows; unit diagonal, symmetric.
/// Throws on a zero row.
FeatureMatrix cosine_matrix(const FeatureMatrix& features);

struct BoolMatrix {
  std::size_t size = 0;
  std::vector<std::uint8_t> values;
  bool at(std::size_t r, std::size_t c) const { return values[r * size + c] != 0; }
};

/// Flags (i, j) when one key is the other with an extra tau_1 insertion at
/// equal genus, i.e. the pair is related by the dilaton reduction; the result
/// is symmetrized.
BoolMatrix dilaton_matrix(std::span<const AmplitudeKey> keys);

enum class ProbeKind { Linear, NonLinear };

struct ProbeConfig {
  ProbeKind kind = ProbeKind::Linear;
  double ridge = 0.0;
  std::uint64_t seed = 0;
  /// Conformal evaluation of the held-out residuals.
  double alpha = 0.1;
  std::size_t window = 20;
  /// Non-linear probes train this net.
  NetConfig net{{32, 16}, Activation::Dra, 0, 2e-3, 4000};
};

struct ProbeReport {
  ProbeKind kind = ProbeKind::Linear;
  double held_out_r2 = 0.0;
  /// Present only when the held-out split is at least one conformal window.
  bool conformal_evaluated = false;
  double coverage = 0.0;
  double mean_width = 0.0;
  std::vector<std::size_t> held_out_indices;
  std::vector<double> held_out_predictions;
};

/// Seeded 80/20 split; returns (train indices, held-out indices).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> train_test_split(
    std::size_t rows, std::uint64_t seed);

/// Fits a probe from features to targets and scores it on the held-out rows.
/// Linear probes solve ridge least squares in closed form (lambda = 0 on a
/// rank-deficient design throws, suggesting ridge > 0).
ProbeReport fit_probe(const FeatureMatrix& features, std::span<const double> targets,
                      const ProbeConfig& config);

/// One candidate exponential-growth constant num/den.
struct GrowthHypothesis {
  int num = 1;
  int den = 1;
  Rational value() const { return Rational(num, den); }
  bool operator==(const GrowthHypothesis&) const = default;
};

/// The 10 x 10 grid minus the diagonal (value 1 is excluded as trivial):
/// exactly 90 hypotheses, duplicates by value retained.
std::vector<GrowthHypothesis> growth_hypothesis_grid();

struct ScanEntry {
  GrowthHypothesis hypothesis;
  double r2 = 0.0;
};

/// For each hypothesis A, probes the features against the log10 growth law
/// evaluated with A on the row-aligned keys; entries come back sorted by
/// held-out R^2, best first (ties broken by numerator, denominator).
std::vector<ScanEntry> scan_growth_constant(const FeatureMatrix& features,
                                            std::span<const AmplitudeKey> keys,
                                            const ProbeConfig& config, int threads = 1);

/// Collapses scan entries by reduced fraction, keeping each value's best R^2.
std::vector<std::pair<Rational, double>> collapse_by_value(std::span<const ScanEntry> entries);

/// Cross-correlation alignment loss between two equally shaped embedding
/// batches: columns are standardized over the batch, then
///   sum_i (1 - C_ii)^2 + lambda * sum_{i != j} C_ij^2.
/// Throws on zero-variance columns or fewer than two rows.
double tm_loss(const FeatureMatrix& zb, const FeatureMatrix& zd, double lambda);

struct SyntheticFeatureOptions {
  std::uint64_t seed = 0;
  /// Noise per entry, as a fraction of each column's standard deviation.
  double noise_sigma = 0.02;
  /// Also emit the (g, n) polynomial block. Off by default: when the Euler
  /// characteristic is linearly decodable from the features, every growth
  /// hypothesis fits equally well and the scan ranks by target variance
  /// instead of by decodability.
  bool include_gn_block = false;
};

/// Value-channel features (log10 target and its square) for the given keys,
/// optionally extended by degree-2 polynomials of (g, n), with seeded
/// Gaussian noise. Stands in for learned embeddings so the probing pipeline
/// can run end to end.
FeatureMatrix synthetic_features(RecursionEngine& engine, std::span<const AmplitudeKey> keys,
                                 const SyntheticFeatureOptions& options);

/// CSV with header g,n,d,f0,f1,...; d is dash-joined.
void write_features_csv(const std::filesystem::path& file, const FeatureMatrix& features,
                        std::span<const AmplitudeKey> keys);
std::pair<FeatureMatrix, std::vector<AmplitudeKey>> read_features_csv(
    const std::filesystem::path& file);

}  // namespace airygeom
