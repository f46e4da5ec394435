#include "airygeom/dra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace airygeom {

Activation activation_from_string(const std::string& name) {
  if (name == "dra") return Activation::Dra;
  if (name == "snake") return Activation::Snake;
  if (name == "relu") return Activation::Relu;
  if (name == "tanh") return Activation::Tanh;
  throw std::invalid_argument("unknown activation '" + name + "'");
}

std::string to_string(Activation kind) {
  switch (kind) {
    case Activation::Dra: return "dra";
    case Activation::Snake: return "snake";
    case Activation::Relu: return "relu";
    case Activation::Tanh: return "tanh";
  }
  return "?";
}

ActivationEval activation_eval(Activation kind, const ActivationParams& params, double x) {
  ActivationEval e;
  switch (kind) {
    case Activation::Dra: {
      const double a = params.a, b = params.b, c = params.c, d = params.d;
      const double u = x / b;
      const double su = std::sin(u), cu = std::cos(u);
      const double s2 = 2.0 * su * cu;  // sin(2x/b)
      const double cb = std::cos(b * x);
      const double sb = std::sin(b * x);
      const double th = std::tanh(b * x);
      const double sech2 = 1.0 - th * th;
      e.value = x + a * su * su + c * cb + d * th;
      e.dx = 1.0 + (a / b) * s2 - c * b * sb + d * b * sech2;
      e.da = su * su;
      e.db = -(a * x / (b * b)) * s2 - c * x * sb + d * x * sech2;
      e.dc = cb;
      e.dd = th;
      return e;
    }
    case Activation::Snake: {
      const double a = params.a;
      const double s = std::sin(a * x), cs = std::cos(a * x);
      const double s2 = 2.0 * s * cs;
      e.value = x + s * s / a;
      e.dx = 1.0 + s2;
      e.da = x * s2 / a - s * s / (a * a);
      return e;
    }
    case Activation::Relu:
      e.value = x > 0.0 ? x : 0.0;
      e.dx = x > 0.0 ? 1.0 : 0.0;
      return e;
    case Activation::Tanh: {
      const double th = std::tanh(x);
      e.value = th;
      e.dx = 1.0 - th * th;
      return e;
    }
  }
  throw std::logic_error("activation_eval: bad kind");
}

std::vector<long long> recursive_sequence(int n_max) {
  if (n_max < 0) throw std::invalid_argument("recursive_sequence: n_max must be >= 0");
  std::vector<long long> r(static_cast<std::size_t>(n_max) + 1);
  r[0] = 0;
  for (int n = 1; n <= n_max; ++n)
    r[static_cast<std::size_t>(n)] =
        n + (static_cast<long long>(n) & r[static_cast<std::size_t>(n) - 1]);
  return r;
}

double r_squared(std::span<const double> truth, std::span<const double> prediction) {
  if (truth.size() != prediction.size() || truth.size() < 2)
    throw std::invalid_argument("r_squared: need two equal-length series");
  const double mean = std::accumulate(truth.begin(), truth.end(), 0.0) /
                      static_cast<double>(truth.size());
  double ss_tot = 0.0, ss_res = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ss_tot += (truth[i] - mean) * (truth[i] - mean);
    ss_res += (truth[i] - prediction[i]) * (truth[i] - prediction[i]);
  }
  if (ss_tot == 0.0) throw std::domain_error("r_squared: constant truth");
  return 1.0 - ss_res / ss_tot;
}

namespace {

// Deterministic normal deviates (Box-Muller over a fully specified engine),
// so trained nets are reproducible across standard libraries.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    constexpr double kTwoPi = 6.2831853071795864769;
    spare_ = radius * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return radius * std::cos(kTwoPi * u2);
  }

 private:
  double uniform() {
    // splitmix64 step
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

struct AdamState {
  std::vector<double> m, v;
  explicit AdamState(std::size_t size) : m(size, 0.0), v(size, 0.0) {}
};

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEpsilon = 1e-8;
constexpr double kMinDivisorParam = 1e-3;

}  // namespace

void MlpRegressor::fit(std::span<const double> x, std::size_t cols, std::span<const double> y) {
  if (cols == 0 || y.empty() || x.size() != y.size() * cols)
    throw std::invalid_argument("MlpRegressor::fit: inconsistent shapes");
  const std::size_t rows = y.size();

  // Standardize features and targets on the training data.
  x_mean_.assign(cols, 0.0);
  x_scale_.assign(cols, 1.0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) x_mean_[c] += x[r * cols + c];
  for (auto& m : x_mean_) m /= static_cast<double>(rows);
  for (std::size_t c = 0; c < cols; ++c) {
    double var = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      const double dv = x[r * cols + c] - x_mean_[c];
      var += dv * dv;
    }
    x_scale_[c] = std::sqrt(var / static_cast<double>(rows));
    if (x_scale_[c] < 1e-12) x_scale_[c] = 1.0;
  }
  y_mean_ = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(rows);
  double y_var = 0.0;
  for (double v : y) y_var += (v - y_mean_) * (v - y_mean_);
  y_scale_ = std::sqrt(y_var / static_cast<double>(rows));
  if (y_scale_ < 1e-12) y_scale_ = 1.0;

  std::vector<double> xs(x.size()), ys(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c)
      xs[r * cols + c] = (x[r * cols + c] - x_mean_[c]) / x_scale_[c];
    ys[r] = (y[r] - y_mean_) / y_scale_;
  }

  // He-style initialization; every unit's activation starts near the
  // identity residual map.
  layers_.clear();
  NormalSource noise(config_.seed);
  std::size_t fan_in = cols;
  for (int width : config_.hidden_widths) {
    if (width < 1) throw std::invalid_argument("MlpRegressor: widths must be >= 1");
    Layer layer;
    layer.in = fan_in;
    layer.out = static_cast<std::size_t>(width);
    layer.w.resize(layer.in * layer.out);
    layer.bias.assign(layer.out, 0.0);
    layer.params.assign(layer.out, config_.activation_init);
    const double scale = std::sqrt(2.0 / static_cast<double>(fan_in));
    for (auto& w : layer.w) w = scale * noise.next();
    layers_.push_back(std::move(layer));
    fan_in = static_cast<std::size_t>(width);
  }
  Layer head;
  head.in = fan_in;
  head.out = 1;
  head.linear = true;
  head.w.resize(fan_in);
  head.bias.assign(1, 0.0);
  const double head_scale = std::sqrt(1.0 / static_cast<double>(fan_in));
  for (auto& w : head.w) w = head_scale * noise.next();
  layers_.push_back(std::move(head));

  if (config_.frequency_spread != 1.0 && !layers_.empty() && !layers_[0].params.empty()) {
    if (config_.frequency_spread <= 0.0)
      throw std::invalid_argument("MlpRegressor: frequency_spread must be positive");
    Layer& first = layers_[0];
    const std::size_t units = first.params.size();
    for (std::size_t o = 0; o < units; ++o) {
      const double t = units == 1 ? 1.0 : static_cast<double>(o) / (units - 1);
      const double factor = std::pow(config_.frequency_spread, t);
      if (config_.activation == Activation::Dra)
        first.params[o].b = config_.activation_init.b * factor;
      else if (config_.activation == Activation::Snake)
        first.params[o].a = config_.activation_init.a * factor;
    }
  }

  // Optimizer slots per layer: weights, biases, then 4 per activation unit.
  const std::size_t depth = layers_.size();
  std::vector<AdamState> adam;
  adam.reserve(depth);
  for (const auto& layer : layers_)
    adam.emplace_back(layer.w.size() + layer.bias.size() + 4 * layer.params.size());

  // Buffers reused across steps: pre-activations, outputs, the five
  // activation partials, and back-propagated deltas.
  std::vector<std::vector<double>> post(depth), act_dx(depth), act_da(depth),
      act_db(depth), act_dc(depth), act_dd(depth), delta(depth), grad_w(depth),
      grad_b(depth), grad_act(depth);
  for (std::size_t l = 0; l < depth; ++l) {
    const std::size_t span = rows * layers_[l].out;
    post[l].resize(span);
    act_dx[l].resize(span);
    act_da[l].resize(span);
    act_db[l].resize(span);
    act_dc[l].resize(span);
    act_dd[l].resize(span);
    delta[l].resize(span);
    grad_w[l].resize(layers_[l].w.size());
    grad_b[l].resize(layers_[l].bias.size());
    grad_act[l].resize(4 * layers_[l].params.size());
  }

  diverged_ = false;
  for (int step = 0; step < config_.steps; ++step) {
    double loss = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      const double* input = &xs[r * cols];
      for (std::size_t l = 0; l < depth; ++l) {
        const Layer& layer = layers_[l];
        const double* in_vec = l == 0 ? input : &post[l - 1][r * layers_[l - 1].out];
        for (std::size_t o = 0; o < layer.out; ++o) {
          double z = layer.bias[o];
          const double* wrow = &layer.w[o * layer.in];
          for (std::size_t i = 0; i < layer.in; ++i) z += wrow[i] * in_vec[i];
          const std::size_t slot = r * layer.out + o;
          if (layer.linear) {
            post[l][slot] = z;
            act_dx[l][slot] = 1.0;
          } else {
            const ActivationEval e = activation_eval(config_.activation, layer.params[o], z);
            post[l][slot] = e.value;
            act_dx[l][slot] = e.dx;
            act_da[l][slot] = e.da;
            act_db[l][slot] = e.db;
            act_dc[l][slot] = e.dc;
            act_dd[l][slot] = e.dd;
          }
        }
      }
      const double err = post[depth - 1][r] - ys[r];
      loss += err * err;
    }
    loss /= static_cast<double>(rows);
    final_loss_ = loss;
    if (!std::isfinite(loss)) {
      diverged_ = true;
      break;
    }

    for (std::size_t l = 0; l < depth; ++l) {
      std::fill(grad_w[l].begin(), grad_w[l].end(), 0.0);
      std::fill(grad_b[l].begin(), grad_b[l].end(), 0.0);
      std::fill(grad_act[l].begin(), grad_act[l].end(), 0.0);
      std::fill(delta[l].begin(), delta[l].end(), 0.0);
    }
    for (std::size_t r = 0; r < rows; ++r)
      delta[depth - 1][r] = 2.0 * (post[depth - 1][r] - ys[r]) / static_cast<double>(rows);

    for (std::size_t l = depth; l-- > 0;) {
      const Layer& layer = layers_[l];
      for (std::size_t r = 0; r < rows; ++r) {
        const double* in_vec = l == 0 ? &xs[r * cols] : &post[l - 1][r * layers_[l - 1].out];
        for (std::size_t o = 0; o < layer.out; ++o) {
          const std::size_t slot = r * layer.out + o;
          const double upstream = delta[l][slot];
          if (upstream == 0.0) continue;
          const double dz = upstream * act_dx[l][slot];
          grad_b[l][o] += dz;
          double* gw = &grad_w[l][o * layer.in];
          for (std::size_t i = 0; i < layer.in; ++i) gw[i] += dz * in_vec[i];
          if (!layer.linear) {
            double* ga = &grad_act[l][4 * o];
            ga[0] += upstream * act_da[l][slot];
            ga[1] += upstream * act_db[l][slot];
            ga[2] += upstream * act_dc[l][slot];
            ga[3] += upstream * act_dd[l][slot];
          }
          if (l > 0) {
            const double* wrow = &layer.w[o * layer.in];
            double* prev = &delta[l - 1][r * layers_[l - 1].out];
            for (std::size_t i = 0; i < layer.in; ++i) prev[i] += dz * wrow[i];
          }
        }
      }
    }

    // Adam update.
    const double t = static_cast<double>(step + 1);
    const double corr1 = 1.0 - std::pow(kBeta1, t);
    const double corr2 = 1.0 - std::pow(kBeta2, t);
    for (std::size_t l = 0; l < depth; ++l) {
      Layer& layer = layers_[l];
      AdamState& state = adam[l];
      const auto update = [&](double& param, double grad, std::size_t slot) {
        state.m[slot] = kBeta1 * state.m[slot] + (1.0 - kBeta1) * grad;
        state.v[slot] = kBeta2 * state.v[slot] + (1.0 - kBeta2) * grad * grad;
        const double mh = state.m[slot] / corr1;
        const double vh = state.v[slot] / corr2;
        param -= config_.learning_rate * mh / (std::sqrt(vh) + kEpsilon);
      };
      std::size_t slot = 0;
      for (std::size_t i = 0; i < layer.w.size(); ++i) update(layer.w[i], grad_w[l][i], slot++);
      for (std::size_t i = 0; i < layer.bias.size(); ++i)
        update(layer.bias[i], grad_b[l][i], slot++);
      for (std::size_t o = 0; o < layer.params.size(); ++o) {
        ActivationParams& p = layer.params[o];
        update(p.a, grad_act[l][4 * o + 0], slot++);
        update(p.b, grad_act[l][4 * o + 1], slot++);
        update(p.c, grad_act[l][4 * o + 2], slot++);
        update(p.d, grad_act[l][4 * o + 3], slot++);
        // Keep the dividing parameter away from zero.
        if (config_.activation == Activation::Dra && std::abs(p.b) < kMinDivisorParam)
          p.b = p.b < 0 ? -kMinDivisorParam : kMinDivisorParam;
        if (config_.activation == Activation::Snake && std::abs(p.a) < kMinDivisorParam)
          p.a = p.a < 0 ? -kMinDivisorParam : kMinDivisorParam;
      }
    }
  }
}

std::vector<double> MlpRegressor::predict(std::span<const double> x, std::size_t cols) const {
  if (layers_.empty()) throw std::logic_error("MlpRegressor::predict before fit");
  if (cols != x_mean_.size() || x.size() % cols != 0)
    throw std::invalid_argument("MlpRegressor::predict: inconsistent shapes");
  const std::size_t rows = x.size() / cols;
  std::vector<double> out(rows, 0.0);
  std::vector<double> buffer, next;
  for (std::size_t r = 0; r < rows; ++r) {
    buffer.assign(cols, 0.0);
    for (std::size_t c = 0; c < cols; ++c)
      buffer[c] = (x[r * cols + c] - x_mean_[c]) / x_scale_[c];
    for (const Layer& layer : layers_) {
      next.assign(layer.out, 0.0);
      for (std::size_t o = 0; o < layer.out; ++o) {
        double z = layer.bias[o];
        const double* wrow = &layer.w[o * layer.in];
        for (std::size_t i = 0; i < layer.in; ++i) z += wrow[i] * buffer[i];
        next[o] =
            layer.linear ? z : activation_eval(config_.activation, layer.params[o], z).value;
      }
      buffer = next;
    }
    out[r] = buffer[0] * y_scale_ + y_mean_;
  }
  return out;
}

std::vector<double> MlpRegressor::parameters() const {
  std::vector<double> flat;
  for (const auto& layer : layers_) {
    flat.insert(flat.end(), layer.w.begin(), layer.w.end());
    flat.insert(flat.end(), layer.bias.begin(), layer.bias.end());
    for (const auto& p : layer.params) {
      flat.push_back(p.a);
      flat.push_back(p.b);
      flat.push_back(p.c);
      flat.push_back(p.d);
    }
  }
  return flat;
}

TrainReport train_and_eval(const NetConfig& config, std::pair<int, int> train_range,
                           std::pair<int, int> test_range) {
  const auto [train_lo, train_hi] = train_range;
  const auto [test_lo, test_hi] = test_range;
  if (train_lo > train_hi || test_lo > test_hi)
    throw std::invalid_argument("train_and_eval: empty range");
  if (std::max(train_lo, test_lo) <= std::min(train_hi, test_hi))
    throw std::invalid_argument("train_and_eval: ranges must be disjoint");

  const int n_max = std::max(train_hi, test_hi);
  const auto seq = recursive_sequence(n_max);

  std::vector<double> train_x, train_y, test_x, test_y;
  for (int n = train_lo; n <= train_hi; ++n) {
    train_x.push_back(n);
    train_y.push_back(static_cast<double>(seq[static_cast<std::size_t>(n)]));
  }
  for (int n = test_lo; n <= test_hi; ++n) {
    test_x.push_back(n);
    test_y.push_back(static_cast<double>(seq[static_cast<std::size_t>(n)]));
  }

  MlpRegressor net(config);
  net.fit(train_x, 1, train_y);

  TrainReport report;
  report.activation = config.activation;
  report.seed = config.seed;
  report.final_loss = net.final_loss();
  report.diverged = net.diverged();
  if (!report.diverged) {
    const auto train_pred = net.predict(train_x, 1);
    const auto test_pred = net.predict(test_x, 1);
    report.train_r2 = r_squared(train_y, train_pred);
    report.test_r2 = r_squared(test_y, test_pred);
  } else {
    report.train_r2 = report.test_r2 = -std::numeric_limits<double>::infinity();
  }

  report.range_lo = std::min(train_lo, test_lo);
  const int range_hi = std::max(train_hi, test_hi);
  std::vector<double> all_x;
  for (int n = report.range_lo; n <= range_hi; ++n) all_x.push_back(n);
  report.predictions = report.diverged ? std::vector<double>(all_x.size(), 0.0)
                                       : net.predict(all_x, 1);
  report.parameters = net.parameters();
  return report;
}

TrainReport best_of_seeds(NetConfig config, int seeds, std::pair<int, int> train_range,
                          std::pair<int, int> test_range, int threads) {
  if (seeds < 1) throw std::invalid_argument("best_of_seeds: need at least one seed");
  std::vector<TrainReport> reports(static_cast<std::size_t>(seeds));
#if !defined(_OPENMP)
  (void)threads;
#else
  #pragma omp parallel for schedule(dynamic) num_threads(std::max(1, threads)) if (threads > 1)
#endif
  for (int s = 0; s < seeds; ++s) {
    NetConfig cfg = config;
    cfg.seed = static_cast<std::uint64_t>(s);
    reports[static_cast<std::size_t>(s)] = train_and_eval(cfg, train_range, test_range);
  }
  std::size_t best = 0;
  for (std::size_t s = 1; s < reports.size(); ++s)
    if (reports[s].test_r2 > reports[best].test_r2) best = s;
  return reports[best];
}

}  // namespace airygeom
