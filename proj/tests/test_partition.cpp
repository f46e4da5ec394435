#include "airygeom/partition.hpp"
#include "doctest.h"
#include "oracles.hpp"

using airygeom::Partition;
using airygeom::partitions_fixed_length;
using airygeom::SurfaceClass;

TEST_CASE("partitions canonicalize to non-increasing order") {
  CHECK(Partition({0, 2, 1}).parts() == std::vector<unsigned>{2, 1, 0});
  CHECK(Partition({0, 2, 1}) == Partition({2, 0, 1}));
  CHECK(Partition({3}).weight() == 3);
  CHECK(Partition({1, 0, 0, 0}).weight() == 1);
  CHECK(Partition({1, 0, 0, 0}).size() == 4);
  CHECK(Partition({2, 1, 0}).to_string() == "2,1,0");
  CHECK(Partition::parse("0,2,1") == Partition({2, 1, 0}));
  CHECK(Partition::parse("3-0-0", '-') == Partition({3, 0, 0}));
  CHECK_THROWS(Partition::parse(""));
  CHECK_THROWS(Partition::parse("1,,2"));
  CHECK_THROWS(Partition::parse("1,-2"));
}

TEST_CASE("surface classes") {
  CHECK_FALSE(SurfaceClass{0, 1}.stable());
  CHECK_FALSE(SurfaceClass{0, 2}.stable());
  CHECK(SurfaceClass{0, 3}.stable());
  CHECK(SurfaceClass{1, 1}.stable());
  CHECK(SurfaceClass{2, 1}.dimension() == 4);
  CHECK(SurfaceClass{1, 2}.dimension() == 2);
  CHECK(SurfaceClass{3, 1}.euler() == 5);
}

TEST_CASE("fixed-length enumeration is descending lexicographic") {
  const auto ps = partitions_fixed_length(2, 2);
  REQUIRE(ps.size() == 2);
  CHECK(ps[0] == Partition({2, 0}));
  CHECK(ps[1] == Partition({1, 1}));

  const auto zero = partitions_fixed_length(0, 3);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0] == Partition({0, 0, 0}));

  const auto p41 = partitions_fixed_length(4, 1);
  REQUIRE(p41.size() == 1);
  CHECK(p41[0] == Partition({4}));

  for (const auto& p : partitions_fixed_length(9, 4)) {
    CHECK(p.size() == 4);
    CHECK(p.weight() == 9);
  }
  const auto p94 = partitions_fixed_length(9, 4);
  for (std::size_t i = 1; i < p94.size(); ++i) CHECK(p94[i - 1] > p94[i]);
}

TEST_CASE("enumeration counts match the partition-count recurrence") {
  for (unsigned w = 0; w <= 14; ++w) {
    for (unsigned n = 1; n <= 8; ++n) {
      CHECK(partitions_fixed_length(w, n).size() == oracles::partition_count(w, n));
    }
  }
}
