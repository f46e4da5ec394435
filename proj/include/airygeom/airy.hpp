#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "airygeom/rational.hpp"

namespace airygeom {

enum class WkTensor { A, B, C, D };

/// One non-zero entry of a rank-3 tensor in coordinate-list form.
struct CooEntry {
  unsigned i = 0;
  unsigned j = 0;
  unsigned k = 0;
  Rational value;

  bool operator==(const CooEntry&) const = default;
};

/// Entry of the initial-data tensors generating psi-class intersection
/// numbers:
///   A_{i,j,k} = 1 iff i = j = k = 0
///   B^k_{i,j} = [i+j = k+1] (2k+1)!! / ((2i+1)!! (2j-1)!!)
///   C^{j,k}_i = [i = j+k+2] (2j+1)!! (2k+1)!! / (2i+1)!!
///   D_i       = [i = 1] / 24
/// For B the argument order is (i, j, k) with k the upper index; for C it is
/// (i, j, k) with i the lower index. j and k are ignored for D.
Rational wk_tensor_entry(WkTensor which, unsigned i, unsigned j = 0, unsigned k = 0);

/// All non-zero entries of B or C with indices in [0, dim_max], sorted
/// lexicographically by (i, j, k).
std::vector<CooEntry> generate_coo(WkTensor which, unsigned dim_max);

/// Serialized form: [i, j, k, "p/q"] with the value as an exact rational
/// string.
std::string coo_entry_to_json(const CooEntry& e);
CooEntry coo_entry_from_json(const std::string& line);

/// Sparse initial data (A, B, C, D) of a quantum Airy structure. A is
/// symmetric in all index pairs and C in its upper pair; lookups of absent
/// entries return zero.
struct InitialData {
  std::map<std::tuple<unsigned, unsigned, unsigned>, Rational> a;
  std::map<std::tuple<unsigned, unsigned, unsigned>, Rational> b;
  std::map<std::tuple<unsigned, unsigned, unsigned>, Rational> c;
  std::map<unsigned, Rational> d;

  Rational lookup(WkTensor which, unsigned i, unsigned j = 0, unsigned k = 0) const;
};

/// Materializes the tensors above for indices up to dim_max.
InitialData wk_initial_data(unsigned dim_max);

}  // namespace airygeom
