#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "airygeom/cli.hpp"
#include "airygeom/dataset.hpp"
#include "doctest.h"
#include "json.hpp"

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = airygeom::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("compute prints the exact value and its log10") {
  const auto r = run({"compute", "-g", "2", "-d", "4"});
  CHECK(r.code == 0);
  CHECK(r.out == "1/1152\n-3.061452\n");

  const auto base = run({"compute", "-g", "1", "-d", "1"});
  CHECK(base.code == 0);
  CHECK(base.out.rfind("1/24\n", 0) == 0);

  // Parts are accepted in any order.
  const auto scrambled = run({"compute", "-g", "1", "-d", "0,2"});
  CHECK(scrambled.out == run({"compute", "-g", "1", "-d", "2,0"}).out);

  const auto zero = run({"compute", "-g", "1", "-d", "0"});
  CHECK(zero.code == 0);
  CHECK(zero.out == "0\n-inf\n");
}

TEST_CASE("usage errors exit 2, domain errors exit 1") {
  CHECK(run({"compute", "-g", "2"}).code == 2);          // missing -d
  CHECK(run({"compute", "--bogus", "1"}).code == 2);     // unknown flag
  CHECK(run({}).code == 2);                              // no subcommand
  const auto bad = run({"table", "-g", "0", "-n", "2"});  // unstable class
  CHECK(bad.code == 1);
  CHECK(bad.err.rfind("error:", 0) == 0);
  CHECK(bad.err.find('\n') == bad.err.size() - 1);  // one line
}

TEST_CASE("table output, plain and json") {
  const auto plain = run({"table", "-g", "1", "-n", "2"});
  CHECK(plain.code == 0);
  CHECK(plain.out == "2,0\t1/24\n1,1\t1/24\n");

  const auto json = run({"table", "-g", "1", "-n", "2", "--json"});
  CHECK(json.code == 0);
  const auto parsed = nlohmann::json::parse(json.out);
  REQUIRE(parsed.is_array());
  REQUIRE(parsed.size() == 2);
  // Table records round-trip through the dataset record parser.
  const auto record = airygeom::record_from_json(parsed[0].dump());
  CHECK(record.g == 1);
  CHECK(record.n == 2);
  CHECK(record.target == "1/24");
}

TEST_CASE("verify suites") {
  for (const std::string suite : {"dilaton", "onepoint", "symmetry", "selection"}) {
    const auto r = run({"verify", "--suite", suite, "--euler-max", "4"});
    CHECK(r.code == 0);
    CHECK(r.out.find("checks passed") != std::string::npos);
  }
  CHECK(run({"verify", "--suite", "nonsense"}).code == 1);
}

TEST_CASE("dataset build and shuffle through the cli") {
  const auto dir = std::filesystem::temp_directory_path() / "airygeom_cli_ds";
  const auto shuffled_dir = std::filesystem::temp_directory_path() / "airygeom_cli_ds_shuffled";
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(shuffled_dir);

  const auto build = run({"dataset", "build", "--g-min", "1", "--g-max", "2", "--dim-max",
                          "5", "--out", dir.string()});
  CHECK(build.code == 0);
  CHECK(std::filesystem::exists(dir / "meta.json"));
  CHECK(std::filesystem::exists(dir / "B.jsonl"));
  CHECK(std::filesystem::exists(dir / "records.jsonl"));

  const auto shuffle = run({"dataset", "shuffle", "--in", dir.string(), "--out",
                            shuffled_dir.string(), "--modality", "d", "--seed", "7"});
  CHECK(shuffle.code == 0);
  const auto original = airygeom::read_dataset(dir);
  const auto shuffled = airygeom::read_dataset(shuffled_dir);
  CHECK(original.records.size() == shuffled.records.size());
  bool moved = false;
  for (std::size_t i = 0; i < original.records.size(); ++i) {
    CHECK(original.records[i].target == shuffled.records[i].target);
    if (original.records[i].d != shuffled.records[i].d) moved = true;
  }
  CHECK(moved);

  CHECK(run({"dataset", "shuffle", "--in", dir.string(), "--out", shuffled_dir.string(),
             "--modality", "q", "--seed", "1"})
            .code == 1);

  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(shuffled_dir);
}

TEST_CASE("asymptotics command") {
  const auto csv = run({"asymptotics", "--n", "1", "--g-min", "2", "--g-max", "4", "--csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("g,n,partition,ratio\n", 0) == 0);
  CHECK(csv.out.find("2,1,4,0.7635") != std::string::npos);

  const auto fit = run({"asymptotics", "--n", "1", "--g-min", "3", "--g-max", "8",
                        "--fit-order", "2"});
  CHECK(fit.code == 0);
  CHECK(fit.out.find("alpha1") != std::string::npos);
}

TEST_CASE("conformal command") {
  const auto path = std::filesystem::temp_directory_path() / "airygeom_cli_samples.csv";
  {
    std::ofstream out(path);
    out << "prediction,truth,n,covariate\n";
    for (int i = 0; i < 60; ++i)
      out << i << ',' << i + 0.5 << ",1," << i << "\n";
  }
  const auto r = run({"conformal", "--input", path.string(), "--alpha", "0.1", "--window",
                      "20"});
  CHECK(r.code == 0);
  const auto parsed = nlohmann::json::parse(r.out);
  CHECK(parsed.at("coverage").get<double>() == 1.0);
  std::filesystem::remove(path);

  CHECK(run({"conformal", "--input", "/nonexistent.csv"}).code == 1);
}

TEST_CASE("dra-demo smoke run emits csv") {
  const auto r = run({"dra-demo", "--activation", "relu", "--seeds", "1", "--steps", "60",
                      "--csv"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("n,truth,prediction\n", 0) == 0);
  // 201 data rows for n = 0..200 plus the header.
  std::size_t lines = 0;
  for (char ch : r.out)
    if (ch == '\n') ++lines;
  CHECK(lines == 202);

  CHECK(run({"dra-demo", "--activation", "bogus"}).code == 1);
}

TEST_CASE("probe synth then scan-A") {
  const auto path = std::filesystem::temp_directory_path() / "airygeom_cli_features.csv";
  const auto synth = run({"probe", "synth", "--out", path.string(), "--g-min", "2",
                          "--g-max", "5", "--n-max", "2", "--seed", "0"});
  CHECK(synth.code == 0);

  const auto scan = run({"probe", "scan-A", "--features", path.string(), "--top", "3"});
  CHECK(scan.code == 0);
  CHECK(scan.out.find("best value: 2/3") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("cache directory round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "airygeom_cli_cache";
  std::filesystem::remove_all(dir);
  setenv("AIRYGEOM_CACHE_DIR", dir.c_str(), 1);
  const auto first = run({"compute", "-g", "2", "-d", "4"});
  CHECK(first.code == 0);
  CHECK(std::filesystem::exists(dir / "amplitudes.jsonl"));
  const auto second = run({"compute", "-g", "2", "-d", "4"});
  CHECK(second.out == first.out);
  unsetenv("AIRYGEOM_CACHE_DIR");
  std::filesystem::remove_all(dir);
}
