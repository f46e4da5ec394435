#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace airygeom {

/// A partition with non-negative parts and explicit length (trailing zeros
/// are significant). Always stored canonically: sorted non-increasing.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<unsigned> parts);

  const std::vector<unsigned>& parts() const { return parts_; }
  std::size_t size() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }
  unsigned long weight() const;

  /// "d1,d2,..." in canonical order.
  std::string to_string(char sep = ',') const;
  /// Parses a separated list of non-negative integers; canonicalizes.
  static Partition parse(const std::string& text, char sep = ',');

  bool operator==(const Partition&) const = default;
  /// Lexicographic on the canonical part vectors; tables iterate in
  /// descending order of this.
  auto operator<=>(const Partition&) const = default;

 private:
  std::vector<unsigned> parts_;
};

struct SurfaceClass {
  int g = 0;
  int n = 0;
  bool stable() const { return 2 * g - 2 + n > 0; }
  int euler() const { return 2 * g - 2 + n; }
  /// Complex dimension 3g - 3 + n of the corresponding moduli space; only
  /// meaningful for stable (g, n).
  int dimension() const { return 3 * g - 3 + n; }
};

/// All partitions of `weight` into exactly `length` non-negative parts
/// (zero-padded), in descending lexicographic order.
std::vector<Partition> partitions_fixed_length(unsigned weight, unsigned length);

}  // namespace airygeom
