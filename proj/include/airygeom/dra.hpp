#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace airygeom {

enum class Activation { Dra, Snake, Relu, Tanh };
Activation activation_from_string(const std::string& name);
std::string to_string(Activation kind);

/// Learnable shape of one activation layer. The parameter that divides the
/// argument (b for the DRA form, a for the Snake form) is clamped away from
/// zero after every optimizer step.
struct ActivationParams {
  double a = 0.1;
  double b = 1.0;
  double c = 0.1;
  double d = 0.1;
};

/// Value and all five partial derivatives at x:
///   dra(x)   = x + a sin^2(x/b) + c cos(bx) + d tanh(bx)
///   snake(x) = x + sin^2(ax)/a
/// Relu/Tanh take no parameters and report zero parameter partials.
struct ActivationEval {
  double value = 0.0;
  double dx = 0.0;
  double da = 0.0;
  double db = 0.0;
  double dc = 0.0;
  double dd = 0.0;
};

ActivationEval activation_eval(Activation kind, const ActivationParams& params, double x);

/// r(0) = 0, r(n) = n + (n AND r(n-1)); values for n = 0..n_max.
std::vector<long long> recursive_sequence(int n_max);

/// 1 - SS_res / SS_tot. Throws when the truth is constant.
double r_squared(std::span<const double> truth, std::span<const double> prediction);

struct NetConfig {
  std::vector<int> hidden_widths{64, 32};
  Activation activation = Activation::Dra;
  std::uint64_t seed = 0;
  double learning_rate = 2e-3;
  int steps = 20000;
  /// Starting shape of every activation unit; the default is a
  /// near-identity residual map.
  ActivationParams activation_init{0.1, 1.0, 0.1, 0.1};
  /// Geometric spread of the frequency-like parameter (b for the DRA form,
  /// a for the Snake form) across the first hidden layer's units: unit t of
  /// k starts at init * spread^(2t/(k-1) - 1). Periodic units only lock onto
  /// frequencies near where they start, so a spread > 1 covers several
  /// octaves at initialization. 1 leaves every unit at activation_init.
  double frequency_spread = 1.0;
};

/// Fully connected scalar-output regressor trained by full-batch gradient
/// descent with adaptive moment estimation on the mean squared error of
/// standardized inputs and targets. Deterministic for a fixed config.
class MlpRegressor {
 public:
  explicit MlpRegressor(NetConfig config) : config_(std::move(config)) {}

  /// X is row-major with `cols` features per row.
  void fit(std::span<const double> x, std::size_t cols, std::span<const double> y);
  std::vector<double> predict(std::span<const double> x, std::size_t cols) const;

  double final_loss() const { return final_loss_; }
  bool diverged() const { return diverged_; }
  std::vector<double> parameters() const;

 private:
  struct Layer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> w;  // out x in
    std::vector<double> bias;
    std::vector<ActivationParams> params;  // one per unit
    bool linear = false;                   // output layer
  };

  NetConfig config_;
  std::vector<Layer> layers_;
  std::vector<double> x_mean_, x_scale_;
  double y_mean_ = 0.0, y_scale_ = 1.0;
  double final_loss_ = 0.0;
  bool diverged_ = false;
};

struct TrainReport {
  Activation activation = Activation::Dra;
  std::uint64_t seed = 0;
  double train_r2 = 0.0;
  double test_r2 = 0.0;
  double final_loss = 0.0;
  bool diverged = false;
  /// Predictions for n = range_lo .. range_hi (train and test ranges merged).
  int range_lo = 0;
  std::vector<double> predictions;
  std::vector<double> parameters;
};

/// Trains on r(n) over [train_lo, train_hi] and evaluates on the disjoint
/// [test_lo, test_hi]; R^2 is reported on the original scale.
TrainReport train_and_eval(const NetConfig& config, std::pair<int, int> train_range,
                           std::pair<int, int> test_range);

/// Runs `seeds` independent trainings (seed = 0..seeds-1) and keeps the best
/// test R^2. Seed runs are independent, so they may execute in parallel.
TrainReport best_of_seeds(NetConfig config, int seeds, std::pair<int, int> train_range,
                          std::pair<int, int> test_range, int threads = 1);

}  // namespace airygeom
