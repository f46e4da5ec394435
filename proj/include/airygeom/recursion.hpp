#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "airygeom/partition.hpp"
#include "airygeom/rational.hpp"

namespace airygeom {

/// Identifies one amplitude F_{g;d}. The partition is canonical, so keys of
/// permuted index tuples coincide.
struct AmplitudeKey {
  int g = 0;
  Partition d;

  bool operator==(const AmplitudeKey&) const = default;
  auto operator<=>(const AmplitudeKey&) const = default;
  int euler() const { return 2 * g - 2 + static_cast<int>(d.size()); }
};

struct AmplitudeKeyHash {
  std::size_t operator()(const AmplitudeKey& k) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::size_t>(k.g);
    for (unsigned p : k.d.parts())
      h = (h ^ p) * 0x100000001b3ull;
    return h;
  }
};

/// Concurrent amplitude store. Values are immutable once inserted; a second
/// insert of the same key keeps the first value (computations of the same key
/// always agree, so either write is fine). Sharded so table generation can
/// share one cache across threads.
class AmplitudeCache {
 public:
  std::optional<Rational> find(const AmplitudeKey& key) const;
  bool contains(const AmplitudeKey& key) const;
  void insert(const AmplitudeKey& key, Rational value);

  std::uint64_t hits() const { return hits_.load(std::memory_order_relaxed); }
  std::uint64_t misses() const { return misses_.load(std::memory_order_relaxed); }
  std::size_t size() const;

  /// Visits every entry. Not safe against concurrent writers.
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (const auto& shard : shards_)
      for (const auto& [key, value] : shard.map) fn(key, value);
  }

 private:
  static constexpr std::size_t kShardCount = 64;
  struct Shard {
    mutable std::shared_mutex mutex;
    std::unordered_map<AmplitudeKey, Rational, AmplitudeKeyHash> map;
  };
  const Shard& shard_for(const AmplitudeKey& key) const {
    return shards_[AmplitudeKeyHash{}(key) % kShardCount];
  }
  Shard& shard_for(const AmplitudeKey& key) {
    return shards_[AmplitudeKeyHash{}(key) % kShardCount];
  }

  std::array<Shard, kShardCount> shards_;
  mutable std::atomic<std::uint64_t> hits_{0};
  mutable std::atomic<std::uint64_t> misses_{0};
};

/// Exact evaluation of the amplitudes of the intersection-number Airy
/// structure by recursion on the Euler characteristic 2g - 2 + n, with
/// memoization on canonical keys.
///
/// Evaluation is level-ordered rather than call-recursive: the dependency
/// closure of the requested keys is discovered first, then levels of equal
/// Euler characteristic are filled bottom-up. Within a level all dependencies
/// live in lower levels, so a level can be filled by many threads sharing the
/// cache.
class RecursionEngine {
 public:
  /// F_{g;d} for any non-negative weights; off-dimension inputs evaluate to
  /// zero through the recursion itself.
  Rational amplitude(int g, const Partition& d);

  /// <tau_{d_1} ... tau_{d_n}>_{g,n}: zero when (g, n) is unstable or the
  /// weight misses 3g - 3 + n, else the amplitude.
  Rational intersection_number(int g, const Partition& d);

  /// All amplitudes for the stable surface class (g, n), one per canonical
  /// partition of 3g - 3 + n into n non-negative parts, in descending
  /// lexicographic order.
  std::vector<std::pair<Partition, Rational>> amplitude_table(int g, int n, int threads = 1);

  /// <1, d>_{g,n+1} - (2g - 2 + n) <d>_{g,n}; exactly zero for every stable
  /// input.
  Rational dilaton_residual(int g, const Partition& d);

  /// Ensures every key (and its dependency closure) is cached.
  void evaluate_batch(const std::vector<AmplitudeKey>& keys, int threads = 1);

  AmplitudeCache& cache() { return cache_; }
  const AmplitudeCache& cache() const { return cache_; }

 private:
  Rational compute_value(const AmplitudeKey& key) const;

  AmplitudeCache cache_;
};

/// Persists a cache as JSONL lines {"g":..,"d":[..],"value":"p/q"}.
void save_cache(const AmplitudeCache& cache, const std::filesystem::path& file);
void load_cache(AmplitudeCache& cache, const std::filesystem::path& file);

}  // namespace airygeom
