#include "airygeom/reference.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>

namespace airygeom::reference {

namespace {

using Tuple = std::vector<unsigned>;
using Memo = std::map<std::pair<int, Tuple>, Rational>;

BigInt odd_semifactorial(long m) {  // m!! for odd m >= -1
  BigInt r = 1;
  for (long k = m; k >= 2; k -= 2) r *= k;
  return r;
}

Rational tensor_b(unsigned i, unsigned j) {
  return Rational(odd_semifactorial(2L * (i + j) - 1),
                  odd_semifactorial(2L * i + 1) * odd_semifactorial(2L * j - 1));
}

Rational tensor_c(unsigned i, unsigned a, unsigned b) {
  return Rational(odd_semifactorial(2L * a + 1) * odd_semifactorial(2L * b + 1),
                  odd_semifactorial(2L * i + 1));
}

Rational eval(int g, const Tuple& d, Memo& memo) {
  const std::size_t n = d.size();
  if (g == 0 && n <= 2) return Rational(0);
  if (g == 0 && n == 3)
    return (d[0] == 0 && d[1] == 0 && d[2] == 0) ? Rational(1) : Rational(0);
  if (g == 1 && n == 1) return d[0] == 1 ? Rational(1, 24) : Rational(0);

  const auto memo_key = std::make_pair(g, d);
  if (auto it = memo.find(memo_key); it != memo.end()) return it->second;

  Rational b_sum(0);
  for (std::size_t m = 1; m < n; ++m) {
    if (d[0] + d[m] == 0) continue;
    Tuple child;
    child.reserve(n - 1);
    child.push_back(d[0] + d[m] - 1);
    for (std::size_t i = 1; i < n; ++i)
      if (i != m) child.push_back(d[i]);
    b_sum += tensor_b(d[0], d[m]) * eval(g, child, memo);
  }

  Rational c_sum(0);
  if (d[0] >= 2) {
    const std::size_t tail = n - 1;
    for (unsigned a = 0; a + 2 <= d[0]; ++a) {
      const unsigned b = d[0] - 2 - a;
      const Rational coeff = tensor_c(d[0], a, b);
      if (g >= 1) {
        Tuple child;
        child.reserve(n + 1);
        child.push_back(a);
        child.push_back(b);
        child.insert(child.end(), d.begin() + 1, d.end());
        c_sum += coeff * eval(g - 1, child, memo);
      }
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << tail); ++mask) {
        Tuple left{a}, right{b};
        for (std::size_t i = 0; i < tail; ++i)
          ((mask >> i) & 1 ? left : right).push_back(d[i + 1]);
        for (int g1 = 0; g1 <= g; ++g1) {
          const int g2 = g - g1;
          if (g1 == 0 && left.size() <= 2) continue;
          if (g2 == 0 && right.size() <= 2) continue;
          c_sum += coeff * eval(g1, left, memo) * eval(g2, right, memo);
        }
      }
    }
  }

  Rational result = b_sum + c_sum * Rational(1, 2);
  memo.emplace(memo_key, result);
  return result;
}

}  // namespace

Rational amplitude(int g, const std::vector<unsigned>& d) {
  if (d.empty()) throw std::domain_error("reference: partitions need at least one part");
  if (g < 0) throw std::domain_error("reference: genus must be non-negative");
  if (d.size() > 40) throw std::domain_error("reference: position-subset sum limited to 40 parts");
  Memo memo;
  return eval(g, d, memo);
}

Rational intersection_number(int g, const std::vector<unsigned>& d) {
  if (d.empty()) throw std::domain_error("reference: partitions need at least one part");
  unsigned long weight = 0;
  for (unsigned p : d) weight += p;
  const long dim = 3L * g - 3 + static_cast<long>(d.size());
  if (2L * g - 2 + static_cast<long>(d.size()) <= 0) return Rational(0);
  if (dim < 0 || weight != static_cast<unsigned long>(dim)) return Rational(0);
  return amplitude(g, d);
}

}  // namespace airygeom::reference
