#include "airygeom/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "airygeom/numerics.hpp"
#include "json.hpp"

namespace airygeom {

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string checksum_of(const std::string& payload) {
  const auto* data = reinterpret_cast<const unsigned char*>(payload.data());
  const std::uint64_t h = fnv1a64({data, payload.size()});
  std::ostringstream out;
  out << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

std::string b_coo_payload(const std::vector<CooEntry>& entries) {
  std::string payload;
  for (const auto& e : entries) {
    payload += coo_entry_to_json(e);
    payload += '\n';
  }
  return payload;
}

}  // namespace

Dataset build_records(RecursionEngine& engine, const BuildOptions& options) {
  if (options.g_min > options.g_max)
    throw std::invalid_argument("build_records: empty genus range");
  if (options.g_min < 0) throw std::invalid_argument("build_records: genus must be >= 0");

  // Resolve the (g, n) grid first and refuse anything beyond dim_max.
  std::vector<SurfaceClass> blocks;
  for (int g = options.g_min; g <= options.g_max; ++g) {
    const int n_stable = g == 0 ? 3 : 1;
    const int n_lo = std::max(n_stable, options.n_min.value_or(n_stable));
    const long n_cap = static_cast<long>(options.dim_max) - 3L * g + 3L;
    const int n_hi = options.n_max ? *options.n_max
                                   : static_cast<int>(std::min<long>(n_cap, 1000));
    if (options.n_max && static_cast<long>(*options.n_max) > n_cap)
      throw std::invalid_argument(
          "build_records: refusing (g=" + std::to_string(g) + ", n=" +
          std::to_string(*options.n_max) + "): dimension 3g-3+n exceeds dim_max=" +
          std::to_string(options.dim_max));
    if (n_hi < n_lo || n_cap < n_lo)
      throw std::invalid_argument("build_records: no admissible n for g=" +
                                  std::to_string(g) + " under dim_max=" +
                                  std::to_string(options.dim_max));
    for (int n = n_lo; n <= n_hi; ++n) blocks.push_back({g, n});
  }

  // One shared evaluation pass over every requested key.
  std::vector<AmplitudeKey> keys;
  for (const auto& sc : blocks) {
    for (const auto& p : partitions_fixed_length(static_cast<unsigned>(sc.dimension()),
                                                 static_cast<unsigned>(sc.n)))
      keys.push_back({sc.g, p});
  }
  engine.evaluate_batch(keys, options.threads);

  Dataset dataset;
  dataset.manifest.dim_max = options.dim_max;
  dataset.manifest.g_min = options.g_min;
  dataset.manifest.g_max = options.g_max;

  std::map<std::pair<int, int>, std::uint64_t> counts;
  for (const auto& key : keys) {
    const auto value = engine.cache().find(key);
    if (!value || value->sign() <= 0)
      throw std::logic_error("build_records: expected a positive cached amplitude");
    DatasetRecord record;
    record.g = key.g;
    record.n = static_cast<int>(key.d.size());
    record.d = key.d;
    record.target = value->to_string();
    record.log10_target = log10_of_rational(*value).log10_magnitude;
    counts[{record.g, record.n}]++;
    dataset.records.push_back(std::move(record));
  }
  for (const auto& [gn, c] : counts)
    dataset.manifest.counts.push_back({gn.first, gn.second, c});

  dataset.b_coo = generate_coo(WkTensor::B, options.dim_max);
  dataset.manifest.b_entries = dataset.b_coo.size();
  dataset.manifest.b_checksum = checksum_of(b_coo_payload(dataset.b_coo));
  return dataset;
}

std::string record_to_json(const DatasetRecord& record) {
  nlohmann::json obj{{"g", record.g},
                     {"n", record.n},
                     {"d", record.d.parts()},
                     {"target", record.target},
                     {"log10_target", record.log10_target}};
  if (record.b_dim) obj["b_dim"] = *record.b_dim;
  return obj.dump();
}

DatasetRecord record_from_json(const std::string& line) {
  const auto obj = nlohmann::json::parse(line);
  DatasetRecord record;
  record.g = obj.at("g").get<int>();
  record.n = obj.at("n").get<int>();
  record.d = Partition(obj.at("d").get<std::vector<unsigned>>());
  record.target = obj.at("target").get<std::string>();
  record.log10_target = obj.at("log10_target").get<double>();
  if (obj.contains("b_dim")) record.b_dim = obj.at("b_dim").get<unsigned>();
  return record;
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    nlohmann::json meta{{"version", dataset.manifest.version},
                        {"dim_max", dataset.manifest.dim_max},
                        {"g_min", dataset.manifest.g_min},
                        {"g_max", dataset.manifest.g_max},
                        {"b_entries", dataset.manifest.b_entries},
                        {"b_checksum", dataset.manifest.b_checksum}};
    nlohmann::json counts = nlohmann::json::array();
    for (const auto& c : dataset.manifest.counts)
      counts.push_back({{"g", c.g}, {"n", c.n}, {"records", c.records}});
    meta["counts"] = counts;
    std::ofstream out(dir / "meta.json");
    if (!out) throw std::runtime_error("write_dataset: cannot open meta.json");
    out << meta.dump(2) << '\n';
  }
  {
    std::ofstream out(dir / "B.jsonl");
    if (!out) throw std::runtime_error("write_dataset: cannot open B.jsonl");
    out << b_coo_payload(dataset.b_coo);
  }
  {
    std::ofstream out(dir / "records.jsonl");
    if (!out) throw std::runtime_error("write_dataset: cannot open records.jsonl");
    for (const auto& r : dataset.records) out << record_to_json(r) << '\n';
  }
}

Dataset read_dataset(const std::filesystem::path& dir) {
  Dataset dataset;
  {
    std::ifstream in(dir / "meta.json");
    if (!in) throw std::runtime_error("read_dataset: cannot open meta.json");
    nlohmann::json meta;
    in >> meta;
    dataset.manifest.version = meta.at("version").get<std::string>();
    if (dataset.manifest.version != "airygeom-dataset/1")
      throw std::runtime_error("read_dataset: unsupported version " + dataset.manifest.version);
    dataset.manifest.dim_max = meta.at("dim_max").get<unsigned>();
    dataset.manifest.g_min = meta.at("g_min").get<int>();
    dataset.manifest.g_max = meta.at("g_max").get<int>();
    dataset.manifest.b_entries = meta.at("b_entries").get<std::uint64_t>();
    dataset.manifest.b_checksum = meta.at("b_checksum").get<std::string>();
    for (const auto& c : meta.at("counts"))
      dataset.manifest.counts.push_back({c.at("g").get<int>(), c.at("n").get<int>(),
                                         c.at("records").get<std::uint64_t>()});
  }
  {
    std::ifstream in(dir / "B.jsonl");
    if (!in) throw std::runtime_error("read_dataset: cannot open B.jsonl");
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) dataset.b_coo.push_back(coo_entry_from_json(line));
  }
  {
    std::ifstream in(dir / "records.jsonl");
    if (!in) throw std::runtime_error("read_dataset: cannot open records.jsonl");
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) dataset.records.push_back(record_from_json(line));
  }
  return dataset;
}

std::pair<std::vector<DatasetRecord>, std::vector<DatasetRecord>> split_by_genus(
    std::span<const DatasetRecord> records, int g_cut) {
  std::vector<DatasetRecord> train, ood;
  for (const auto& r : records) (r.g <= g_cut ? train : ood).push_back(r);
  return {std::move(train), std::move(ood)};
}

Modality modality_from_string(const std::string& name) {
  if (name == "n") return Modality::MarkedPoints;
  if (name == "B") return Modality::BTensor;
  if (name == "d") return Modality::PartitionD;
  throw std::invalid_argument("unknown modality '" + name + "' (expected n, B, or d)");
}

std::vector<DatasetRecord> counterfactual_shuffle(std::span<const DatasetRecord> records,
                                                  Modality modality, std::uint64_t seed) {
  std::vector<DatasetRecord> out(records.begin(), records.end());

  std::map<int, std::vector<std::size_t>> groups;  // genus -> record indices
  for (std::size_t i = 0; i < out.size(); ++i) groups[out[i].g].push_back(i);

  std::mt19937_64 rng(seed);
  for (auto& [genus, idx] : groups) {
    (void)genus;
    const std::size_t m = idx.size();
    if (m < 2) continue;
    // Sattolo's algorithm: a uniformly random single cycle, hence fixed-point
    // free. The permutation maps slot i to source[i].
    std::vector<std::size_t> source(m);
    for (std::size_t i = 0; i < m; ++i) source[i] = i;
    for (std::size_t i = m - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(rng() % i);
      std::swap(source[i], source[j]);
    }
    for (std::size_t i = 0; i < m; ++i) {
      const DatasetRecord& from = records[idx[source[i]]];
      DatasetRecord& to = out[idx[i]];
      switch (modality) {
        case Modality::MarkedPoints:
          to.n = from.n;
          break;
        case Modality::BTensor:
          to.b_dim = from.effective_b_dim();
          break;
        case Modality::PartitionD:
          to.d = from.d;
          break;
      }
    }
  }
  return out;
}

}  // namespace airygeom
