#include "airygeom/recursion.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace airygeom {

std::optional<Rational> AmplitudeCache::find(const AmplitudeKey& key) const {
  const Shard& s = shard_for(key);
  std::shared_lock lock(s.mutex);
  auto it = s.map.find(key);
  if (it == s.map.end()) {
    misses_.fetch_add(1, std::memory_order_relaxed);
    return std::nullopt;
  }
  hits_.fetch_add(1, std::memory_order_relaxed);
  return it->second;
}

bool AmplitudeCache::contains(const AmplitudeKey& key) const {
  const Shard& s = shard_for(key);
  std::shared_lock lock(s.mutex);
  return s.map.contains(key);
}

void AmplitudeCache::insert(const AmplitudeKey& key, Rational value) {
  Shard& s = shard_for(key);
  std::unique_lock lock(s.mutex);
  auto [it, inserted] = s.map.try_emplace(key, std::move(value));
  (void)it;
  (void)inserted;
}

std::size_t AmplitudeCache::size() const {
  std::size_t total = 0;
  for (const auto& shard : shards_) {
    std::shared_lock lock(shard.mutex);
    total += shard.map.size();
  }
  return total;
}

namespace {

// (2k+1)!!, memoized per thread so level-parallel fills stay lock-free.
const BigInt& odd_df(unsigned k) {
  thread_local std::vector<BigInt> table{BigInt(1)};
  while (table.size() <= k) {
    const unsigned long next = 2ul * table.size() + 1ul;
    table.push_back(table.back() * next);
  }
  return table[k];
}

// B^{i+j-1}_{i,j}; requires i + j >= 1.
Rational b_coefficient(unsigned i, unsigned j) {
  BigInt den = odd_df(i);
  if (j > 0) den *= odd_df(j - 1);  // (2j-1)!!; the j = 0 factor (-1)!! is 1
  return Rational(odd_df(i + j - 1), std::move(den));
}

// C^{a,b}_i with i = a + b + 2.
Rational c_coefficient(unsigned i, unsigned a, unsigned b) {
  return Rational(odd_df(a) * odd_df(b), odd_df(i));
}

bool is_base_or_trivial(const AmplitudeKey& key) {
  const std::size_t n = key.d.size();
  return (key.g == 0 && n <= 3) || (key.g == 1 && n == 1);
}

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Enumerates the terms of the recursion for a stable, non-base key:
//   on_b(multiplicity, tail value v, child)                    same-genus term
//   on_merge(a, b, child)                                      genus-drop term
//   on_split(count, a, b, left, right)                         factorized term
// The tail {d_2..d_n} is treated as a multiset: equal tail values are grouped
// with a multiplicity, and sub-multiset selections carry the number of
// position subsets realizing them. Splits whose factor would be an unstable
// genus-zero amplitude (fewer than three indices) are dropped since those
// amplitudes vanish identically.
template <class BFn, class MergeFn, class SplitFn>
void for_each_term(const AmplitudeKey& key, BFn&& on_b, MergeFn&& on_merge,
                   SplitFn&& on_split) {
  const auto& parts = key.d.parts();
  const unsigned d1 = parts[0];
  const std::size_t n = parts.size();

  std::vector<std::pair<unsigned, unsigned>> groups;  // (value, multiplicity)
  for (std::size_t i = 1; i < n; ++i) {
    if (!groups.empty() && groups.back().first == parts[i])
      ++groups.back().second;
    else
      groups.emplace_back(parts[i], 1u);
  }

  for (const auto& [v, mult] : groups) {
    if (d1 + v == 0) continue;  // B support needs an index i + j - 1 >= 0
    std::vector<unsigned> child;
    child.reserve(n - 1);
    child.push_back(d1 + v - 1);
    bool removed = false;
    for (std::size_t i = 1; i < n; ++i) {
      if (!removed && parts[i] == v) {
        removed = true;
        continue;
      }
      child.push_back(parts[i]);
    }
    on_b(mult, v, AmplitudeKey{key.g, Partition(std::move(child))});
  }

  if (d1 < 2) return;
  const std::size_t tail = n - 1;
  for (unsigned a = 0; a + 2 <= d1; ++a) {
    const unsigned b = d1 - 2 - a;
    if (key.g >= 1) {
      std::vector<unsigned> child(parts.begin() + 1, parts.end());
      child.push_back(a);
      child.push_back(b);
      on_merge(a, b, AmplitudeKey{key.g - 1, Partition(std::move(child))});
    }
    // Sub-multiset odometer over the grouped tail.
    std::vector<unsigned> take(groups.size(), 0);
    while (true) {
      std::uint64_t count = 1;
      std::size_t taken = 0;
      for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        count *= binomial(groups[gi].second, take[gi]);
        taken += take[gi];
      }
      for (int g1 = 0; g1 <= key.g; ++g1) {
        const int g2 = key.g - g1;
        const std::size_t n1 = taken + 1;
        const std::size_t n2 = tail - taken + 1;
        if (g1 == 0 && n1 <= 2) continue;
        if (g2 == 0 && n2 <= 2) continue;
        std::vector<unsigned> left, right;
        left.reserve(n1);
        right.reserve(n2);
        left.push_back(a);
        right.push_back(b);
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
          left.insert(left.end(), take[gi], groups[gi].first);
          right.insert(right.end(), groups[gi].second - take[gi], groups[gi].first);
        }
        on_split(count, a, b, AmplitudeKey{g1, Partition(std::move(left))},
                 AmplitudeKey{g2, Partition(std::move(right))});
      }
      // Advance the odometer.
      std::size_t gi = 0;
      while (gi < groups.size() && take[gi] == groups[gi].second) take[gi++] = 0;
      if (gi == groups.size()) break;
      ++take[gi];
    }
  }
}

}  // namespace

Rational RecursionEngine::compute_value(const AmplitudeKey& key) const {
  const auto& parts = key.d.parts();
  const std::size_t n = parts.size();
  if (key.g == 0 && n <= 2) return Rational(0);
  if (key.g == 0 && n == 3)
    return (parts[0] == 0 && parts[1] == 0 && parts[2] == 0) ? Rational(1) : Rational(0);
  if (key.g == 1 && n == 1) return parts[0] == 1 ? Rational(1, 24) : Rational(0);

  const auto lookup = [this](const AmplitudeKey& k) -> Rational {
    auto v = cache_.find(k);
    assert(v.has_value() && "dependency closure must be filled bottom-up");
    return std::move(*v);
  };

  Rational b_sum(0);
  Rational c_sum(0);
  for_each_term(
      key,
      [&](unsigned mult, unsigned v, const AmplitudeKey& child) {
        const Rational f = lookup(child);
        if (f.is_zero()) return;
        b_sum += Rational(static_cast<long>(mult)) * b_coefficient(parts[0], v) * f;
      },
      [&](unsigned a, unsigned b, const AmplitudeKey& child) {
        const Rational f = lookup(child);
        if (f.is_zero()) return;
        c_sum += c_coefficient(parts[0], a, b) * f;
      },
      [&](std::uint64_t count, unsigned a, unsigned b, const AmplitudeKey& left,
          const AmplitudeKey& right) {
        const Rational fl = lookup(left);
        if (fl.is_zero()) return;
        const Rational fr = lookup(right);
        if (fr.is_zero()) return;
        c_sum += Rational(BigInt(count)) * c_coefficient(parts[0], a, b) * fl * fr;
      });
  return b_sum + c_sum * Rational(1, 2);
}

void RecursionEngine::evaluate_batch(const std::vector<AmplitudeKey>& keys, int threads) {
  // Discover the uncached dependency closure.
  std::unordered_set<AmplitudeKey, AmplitudeKeyHash> pending;
  std::vector<AmplitudeKey> stack;
  const auto enqueue = [&](const AmplitudeKey& k) {
    if (pending.contains(k) || cache_.contains(k)) return;
    pending.insert(k);
    stack.push_back(k);
  };
  for (const auto& k : keys) {
    if (k.d.empty()) throw std::domain_error("amplitude: partitions need at least one part");
    if (k.g < 0) throw std::domain_error("amplitude: genus must be non-negative");
    enqueue(k);
  }
  while (!stack.empty()) {
    AmplitudeKey key = std::move(stack.back());
    stack.pop_back();
    if (is_base_or_trivial(key)) continue;
    for_each_term(
        key, [&](unsigned, unsigned, const AmplitudeKey& child) { enqueue(child); },
        [&](unsigned, unsigned, const AmplitudeKey& child) { enqueue(child); },
        [&](std::uint64_t, unsigned, unsigned, const AmplitudeKey& left,
            const AmplitudeKey& right) {
          enqueue(left);
          enqueue(right);
        });
  }

  // Group by Euler characteristic; every dependency sits strictly below its
  // dependents, so each level only reads completed levels.
  std::map<int, std::vector<AmplitudeKey>> levels;
  for (const auto& k : pending) levels[k.euler()].push_back(k);

  for (auto& [euler, level] : levels) {
    (void)euler;
    std::sort(level.begin(), level.end());
#if defined(_OPENMP)
    if (threads > 1) {
      #pragma omp parallel for schedule(dynamic) num_threads(threads)
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(level.size()); ++i) {
        cache_.insert(level[i], compute_value(level[i]));
      }
      continue;
    }
#else
    (void)threads;
#endif
    for (const auto& k : level) cache_.insert(k, compute_value(k));
  }
}

Rational RecursionEngine::amplitude(int g, const Partition& d) {
  const AmplitudeKey key{g, d};
  evaluate_batch({key});
  auto v = cache_.find(key);
  assert(v.has_value());
  return std::move(*v);
}

Rational RecursionEngine::intersection_number(int g, const Partition& d) {
  if (d.empty()) throw std::domain_error("intersection_number: partitions need at least one part");
  if (g < 0) throw std::domain_error("intersection_number: genus must be non-negative");
  const SurfaceClass sc{g, static_cast<int>(d.size())};
  if (!sc.stable()) return Rational(0);
  if (d.weight() != static_cast<unsigned long>(sc.dimension())) return Rational(0);
  return amplitude(g, d);
}

std::vector<std::pair<Partition, Rational>> RecursionEngine::amplitude_table(int g, int n,
                                                                             int threads) {
  const SurfaceClass sc{g, n};
  if (n < 1 || g < 0 || !sc.stable())
    throw std::domain_error("amplitude_table: unstable surface class (" + std::to_string(g) +
                            ", " + std::to_string(n) + ")");
  const auto parts = partitions_fixed_length(static_cast<unsigned>(sc.dimension()),
                                             static_cast<unsigned>(n));
  std::vector<AmplitudeKey> keys;
  keys.reserve(parts.size());
  for (const auto& p : parts) keys.push_back({g, p});
  evaluate_batch(keys, threads);

  std::vector<std::pair<Partition, Rational>> table;
  table.reserve(parts.size());
  for (const auto& k : keys) {
    auto v = cache_.find(k);
    assert(v.has_value());
    table.emplace_back(k.d, std::move(*v));
  }
  return table;
}

Rational RecursionEngine::dilaton_residual(int g, const Partition& d) {
  const SurfaceClass sc{g, static_cast<int>(d.size())};
  if (d.empty() || g < 0 || !sc.stable())
    throw std::domain_error("dilaton_residual: requires a stable surface class");
  std::vector<unsigned> extended = d.parts();
  extended.push_back(1);
  const Rational lhs = amplitude(g, Partition(std::move(extended)));
  const Rational rhs = Rational(sc.euler()) * amplitude(g, d);
  return lhs - rhs;
}

void save_cache(const AmplitudeCache& cache, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("save_cache: cannot open " + file.string());
  std::vector<std::pair<AmplitudeKey, Rational>> entries;
  cache.for_each([&](const AmplitudeKey& k, const Rational& v) { entries.emplace_back(k, v); });
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [key, value] : entries) {
    nlohmann::json line = {{"g", key.g}, {"d", key.d.parts()}, {"value", value.to_string()}};
    out << line.dump() << '\n';
  }
}

void load_cache(AmplitudeCache& cache, const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("load_cache: cannot open " + file.string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto obj = nlohmann::json::parse(line);
    AmplitudeKey key{obj.at("g").get<int>(),
                     Partition(obj.at("d").get<std::vector<unsigned>>())};
    cache.insert(key, Rational::from_string(obj.at("value").get<std::string>()));
  }
}

}  // namespace airygeom
