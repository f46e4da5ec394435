#include "airygeom/partition.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace airygeom {

Partition::Partition(std::vector<unsigned> parts) : parts_(std::move(parts)) {
  std::sort(parts_.begin(), parts_.end(), std::greater<>());
}

unsigned long Partition::weight() const {
  return std::accumulate(parts_.begin(), parts_.end(), 0ul);
}

std::string Partition::to_string(char sep) const {
  std::string out;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(parts_[i]);
  }
  return out;
}

Partition Partition::parse(const std::string& text, char sep) {
  std::vector<unsigned> parts;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, sep)) {
    if (token.empty()) throw std::invalid_argument("Partition: empty part in '" + text + "'");
    std::size_t pos = 0;
    const long v = std::stol(token, &pos);
    if (pos != token.size() || v < 0)
      throw std::invalid_argument("Partition: bad part '" + token + "'");
    parts.push_back(static_cast<unsigned>(v));
  }
  if (parts.empty()) throw std::invalid_argument("Partition: no parts in '" + text + "'");
  return Partition(std::move(parts));
}

namespace {

void generate(unsigned remaining, unsigned cap, unsigned slots,
              std::vector<unsigned>& current, std::vector<Partition>& out) {
  if (slots == 0) {
    if (remaining == 0) out.emplace_back(current);
    return;
  }
  const unsigned lo = remaining == 0 ? 0 : (remaining + slots - 1) / slots;
  for (unsigned p = std::min(cap, remaining);; --p) {
    if (p >= lo) {
      current.push_back(p);
      generate(remaining - p, p, slots - 1, current, out);
      current.pop_back();
    }
    if (p == 0 || p <= lo) break;
  }
}

}  // namespace

std::vector<Partition> partitions_fixed_length(unsigned weight, unsigned length) {
  if (length == 0) throw std::invalid_argument("partitions_fixed_length: length must be >= 1");
  std::vector<Partition> out;
  std::vector<unsigned> current;
  current.reserve(length);
  generate(weight, weight, length, current, out);
  return out;
}

}  // namespace airygeom
