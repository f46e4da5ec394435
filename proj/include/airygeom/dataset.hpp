#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "airygeom/airy.hpp"
#include "airygeom/partition.hpp"
#include "airygeom/recursion.hpp"

namespace airygeom {

/// One training sample. The exact value is kept as a rational string so no
/// precision is lost in transport; the log10 value is the regression target.
/// b_dim is the per-sample index cap into the shared B tensor; it defaults to
/// 3g - 3 + n and is stored explicitly only after a counterfactual
/// intervention re-binds it.
struct DatasetRecord {
  int g = 0;
  int n = 0;
  Partition d;
  std::string target;
  double log10_target = 0.0;
  std::optional<unsigned> b_dim;

  unsigned effective_b_dim() const {
    return b_dim ? *b_dim : static_cast<unsigned>(3 * g - 3 + n);
  }
  bool operator==(const DatasetRecord&) const = default;
};

struct BlockCount {
  int g = 0;
  int n = 0;
  std::uint64_t records = 0;
  bool operator==(const BlockCount&) const = default;
};

struct DatasetManifest {
  std::string version = "airygeom-dataset/1";
  unsigned dim_max = 0;
  int g_min = 0;
  int g_max = 0;
  std::vector<BlockCount> counts;
  std::uint64_t b_entries = 0;
  std::string b_checksum;
};

struct Dataset {
  DatasetManifest manifest;
  std::vector<CooEntry> b_coo;
  std::vector<DatasetRecord> records;
};

struct BuildOptions {
  int g_min = 0;
  int g_max = 0;
  unsigned dim_max = 100;
  std::optional<int> n_min;
  std::optional<int> n_max;
  int threads = 1;
};

/// One record per stable (g, n, partition) with 3g - 3 + n <= dim_max,
/// ordered by (g, n, descending-lex partition). The B tensor is materialized
/// once per dataset; C is deliberately not part of the sample inputs.
/// Explicit n filters that would require a dimension above dim_max are
/// refused.
Dataset build_records(RecursionEngine& engine, const BuildOptions& options);

/// Directory layout: meta.json, B.jsonl (one [i,j,k,"p/q"] per line),
/// records.jsonl (one record object per line).
void write_dataset(const Dataset& dataset, const std::filesystem::path& dir);
Dataset read_dataset(const std::filesystem::path& dir);

std::string record_to_json(const DatasetRecord& record);
DatasetRecord record_from_json(const std::string& line);

/// (train, out-of-distribution) = ({g <= g_cut}, {g > g_cut}).
std::pair<std::vector<DatasetRecord>, std::vector<DatasetRecord>> split_by_genus(
    std::span<const DatasetRecord> records, int g_cut);

enum class Modality { MarkedPoints, BTensor, PartitionD };
Modality modality_from_string(const std::string& name);  // "n", "B", "d"

/// Within each genus group, re-binds the chosen modality across records by a
/// seeded cyclic permutation (a derangement whenever the group has >= 2
/// records); every other field, including the target, stays with its original
/// record. Groups of size 1 are left untouched.
std::vector<DatasetRecord> counterfactual_shuffle(std::span<const DatasetRecord> records,
                                                  Modality modality, std::uint64_t seed);

std::uint64_t fnv1a64(std::span<const unsigned char> bytes);

}  // namespace airygeom
