#include "airygeom/airy.hpp"

#include <stdexcept>

#include "airygeom/numerics.hpp"
#include "json.hpp"

namespace airygeom {

namespace {

// (2k+1)!! via the shared exact kernel.
BigInt odf(unsigned k) { return double_factorial(2L * k + 1); }

}  // namespace

Rational wk_tensor_entry(WkTensor which, unsigned i, unsigned j, unsigned k) {
  switch (which) {
    case WkTensor::A:
      return (i == 0 && j == 0 && k == 0) ? Rational(1) : Rational(0);
    case WkTensor::B: {
      if (i + j != k + 1) return Rational(0);
      const BigInt den = odf(i) * (j == 0 ? BigInt(1) : odf(j - 1));
      return Rational(odf(k), den);
    }
    case WkTensor::C: {
      if (i != j + k + 2) return Rational(0);
      return Rational(odf(j) * odf(k), odf(i));
    }
    case WkTensor::D:
      return i == 1 ? Rational(1, 24) : Rational(0);
  }
  throw std::logic_error("wk_tensor_entry: bad tensor tag");
}

std::vector<CooEntry> generate_coo(WkTensor which, unsigned dim_max) {
  if (which != WkTensor::B && which != WkTensor::C)
    throw std::invalid_argument("generate_coo: only B and C are serialized");
  std::vector<CooEntry> out;
  if (which == WkTensor::B) {
    // Support i + j = k + 1.
    for (unsigned i = 0; i <= dim_max; ++i) {
      for (unsigned j = 0; j <= dim_max; ++j) {
        if (i + j == 0) continue;
        const unsigned k = i + j - 1;
        if (k > dim_max) continue;
        out.push_back({i, j, k, wk_tensor_entry(WkTensor::B, i, j, k)});
      }
    }
  } else {
    // Support i = j + k + 2.
    for (unsigned i = 2; i <= dim_max; ++i) {
      for (unsigned j = 0; j + 2 <= i; ++j) {
        const unsigned k = i - 2 - j;
        out.push_back({i, j, k, wk_tensor_entry(WkTensor::C, i, j, k)});
      }
    }
  }
  // Row-major generation above is already lexicographic in (i, j, k).
  return out;
}

std::string coo_entry_to_json(const CooEntry& e) {
  nlohmann::json arr = {e.i, e.j, e.k, e.value.to_string()};
  return arr.dump();
}

CooEntry coo_entry_from_json(const std::string& line) {
  const auto arr = nlohmann::json::parse(line);
  if (!arr.is_array() || arr.size() != 4)
    throw std::invalid_argument("coo entry: expected [i, j, k, value]");
  CooEntry e;
  e.i = arr[0].get<unsigned>();
  e.j = arr[1].get<unsigned>();
  e.k = arr[2].get<unsigned>();
  e.value = Rational::from_string(arr[3].get<std::string>());
  if (e.value.is_zero()) throw std::invalid_argument("coo entry: zero value");
  return e;
}

Rational InitialData::lookup(WkTensor which, unsigned i, unsigned j, unsigned k) const {
  switch (which) {
    case WkTensor::A: {
      auto it = a.find({i, j, k});
      return it == a.end() ? Rational(0) : it->second;
    }
    case WkTensor::B: {
      auto it = b.find({i, j, k});
      return it == b.end() ? Rational(0) : it->second;
    }
    case WkTensor::C: {
      auto it = c.find({i, j, k});
      return it == c.end() ? Rational(0) : it->second;
    }
    case WkTensor::D: {
      auto it = d.find(i);
      return it == d.end() ? Rational(0) : it->second;
    }
  }
  throw std::logic_error("InitialData::lookup: bad tensor tag");
}

InitialData wk_initial_data(unsigned dim_max) {
  InitialData data;
  data.a[{0, 0, 0}] = Rational(1);
  if (dim_max >= 1) data.d[1] = Rational(1, 24);
  for (const auto& e : generate_coo(WkTensor::B, dim_max)) data.b[{e.i, e.j, e.k}] = e.value;
  for (const auto& e : generate_coo(WkTensor::C, dim_max)) data.c[{e.i, e.j, e.k}] = e.value;
  return data;
}

}  // namespace airygeom
