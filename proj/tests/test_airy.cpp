#include "airygeom/airy.hpp"
#include "doctest.h"

using airygeom::CooEntry;
using airygeom::generate_coo;
using airygeom::Rational;
using airygeom::wk_tensor_entry;
using airygeom::WkTensor;

TEST_CASE("tensor entries at pinned points") {
  CHECK(wk_tensor_entry(WkTensor::A, 0, 0, 0) == Rational(1));
  CHECK(wk_tensor_entry(WkTensor::A, 1, 1, 1) == Rational(0));
  CHECK(wk_tensor_entry(WkTensor::D, 1) == Rational(1, 24));
  CHECK(wk_tensor_entry(WkTensor::D, 0) == Rational(0));
  CHECK(wk_tensor_entry(WkTensor::D, 2) == Rational(0));
  CHECK(wk_tensor_entry(WkTensor::B, 1, 1, 1) == Rational(1));   // 3!!/(3!! 1!!)
  CHECK(wk_tensor_entry(WkTensor::B, 0, 1, 0) == Rational(1));
  CHECK(wk_tensor_entry(WkTensor::B, 1, 0, 0) == Rational(1, 3));
  CHECK(wk_tensor_entry(WkTensor::C, 2, 0, 0) == Rational(1, 15));
  CHECK(wk_tensor_entry(WkTensor::C, 4, 1, 1) == Rational(9, 945));
}

TEST_CASE("tensor supports and symmetry on a cube") {
  for (unsigned i = 0; i <= 20; ++i) {
    for (unsigned j = 0; j <= 20; ++j) {
      for (unsigned k = 0; k <= 20; ++k) {
        const Rational b = wk_tensor_entry(WkTensor::B, i, j, k);
        CHECK((b.sign() != 0) == (i + j == k + 1));
        const Rational c = wk_tensor_entry(WkTensor::C, i, j, k);
        CHECK((c.sign() != 0) == (i == j + k + 2));
        CHECK(c == wk_tensor_entry(WkTensor::C, i, k, j));
        if (b.sign() != 0) CHECK(b.sign() == 1);
        if (c.sign() != 0) CHECK(c.sign() == 1);
      }
    }
  }
}

TEST_CASE("coo generation at small dimensions") {
  const auto b1 = generate_coo(WkTensor::B, 1);
  REQUIRE(b1.size() == 3);
  CHECK(b1[0] == CooEntry{0, 1, 0, Rational(1)});
  CHECK(b1[1] == CooEntry{1, 0, 0, Rational(1, 3)});
  CHECK(b1[2] == CooEntry{1, 1, 1, Rational(1)});

  CHECK(generate_coo(WkTensor::C, 1).empty());
  const auto c2 = generate_coo(WkTensor::C, 2);
  REQUIRE(c2.size() == 1);
  CHECK(c2[0] == CooEntry{2, 0, 0, Rational(1, 15)});

  CHECK_THROWS(generate_coo(WkTensor::A, 3));
}

TEST_CASE("coo output is sorted, duplicate-free, and matches the formulas") {
  for (WkTensor which : {WkTensor::B, WkTensor::C}) {
    const auto entries = generate_coo(which, 12);
    for (std::size_t i = 1; i < entries.size(); ++i) {
      const auto prev = std::tuple{entries[i - 1].i, entries[i - 1].j, entries[i - 1].k};
      const auto cur = std::tuple{entries[i].i, entries[i].j, entries[i].k};
      CHECK(prev < cur);
    }
    for (const auto& e : entries) {
      CHECK_FALSE(e.value.is_zero());
      CHECK(e.value == wk_tensor_entry(which, e.i, e.j, e.k));
    }
    // Pointwise: everything non-zero in the cube appears.
    std::size_t nonzero = 0;
    for (unsigned i = 0; i <= 12; ++i)
      for (unsigned j = 0; j <= 12; ++j)
        for (unsigned k = 0; k <= 12; ++k)
          if (!wk_tensor_entry(which, i, j, k).is_zero()) ++nonzero;
    CHECK(entries.size() == nonzero);
  }
}

TEST_CASE("coo json serialization") {
  const CooEntry e{2, 0, 0, Rational(1, 15)};
  const std::string line = airygeom::coo_entry_to_json(e);
  CHECK(line == R"([2,0,0,"1/15"])");
  CHECK(airygeom::coo_entry_from_json(line) == e);
  CHECK_THROWS(airygeom::coo_entry_from_json(R"([1,2,3,"0"])"));
  CHECK_THROWS(airygeom::coo_entry_from_json(R"({"i":1})"));
}

TEST_CASE("materialized initial data agrees with the formulas") {
  const auto data = airygeom::wk_initial_data(8);
  CHECK(data.lookup(WkTensor::A, 0, 0, 0) == Rational(1));
  CHECK(data.lookup(WkTensor::A, 2, 1, 0) == Rational(0));
  CHECK(data.lookup(WkTensor::D, 1) == Rational(1, 24));
  for (unsigned i = 0; i <= 8; ++i)
    for (unsigned j = 0; j <= 8; ++j)
      for (unsigned k = 0; k <= 8; ++k) {
        CHECK(data.lookup(WkTensor::B, i, j, k) == wk_tensor_entry(WkTensor::B, i, j, k));
        CHECK(data.lookup(WkTensor::C, i, j, k) == wk_tensor_entry(WkTensor::C, i, j, k));
      }
}
