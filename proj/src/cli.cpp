#include "airygeom/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "airygeom/analysis.hpp"
#include "airygeom/asymptotics.hpp"
#include "airygeom/conformal.hpp"
#include "airygeom/dataset.hpp"
#include "airygeom/dra.hpp"
#include "airygeom/numerics.hpp"
#include "airygeom/recursion.hpp"
#include "airygeom/reference.hpp"
#include "json.hpp"

namespace airygeom {

namespace {

// Optional cross-run persistence of the amplitude cache.
class CacheSession {
 public:
  explicit CacheSession(RecursionEngine& engine) : engine_(engine) {
    if (const char* dir = std::getenv("AIRYGEOM_CACHE_DIR")) {
      file_ = std::filesystem::path(dir) / "amplitudes.jsonl";
      if (std::filesystem::exists(*file_)) load_cache(engine_.cache(), *file_);
    }
  }
  void persist() {
    if (!file_) return;
    std::filesystem::create_directories(file_->parent_path());
    save_cache(engine_.cache(), *file_);
  }

 private:
  RecursionEngine& engine_;
  std::optional<std::filesystem::path> file_;
};

std::string log10_line(const Rational& value) {
  const LogValue lv = log10_of_rational(value);
  if (lv.sign == 0) return "-inf";
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << lv.log10_magnitude;
  return os.str();
}

nlohmann::json table_json(int g, int n,
                          const std::vector<std::pair<Partition, Rational>>& table) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& [p, value] : table) {
    records.push_back({{"g", g},
                       {"n", n},
                       {"d", p.parts()},
                       {"target", value.to_string()},
                       {"log10_target", log10_of_rational(value).log10_magnitude}});
  }
  return records;
}

std::vector<SurfaceClass> stable_classes_up_to(int euler_max) {
  std::vector<SurfaceClass> out;
  for (int g = 0; 2 * g - 1 <= euler_max; ++g)
    for (int n = 1; 2 * g - 2 + n <= euler_max; ++n)
      if (SurfaceClass{g, n}.stable()) out.push_back({g, n});
  return out;
}

int verify_suite(const std::string& suite, int euler_max, std::ostream& out) {
  RecursionEngine engine;
  CacheSession session(engine);
  std::size_t checks = 0;
  if (suite == "dilaton") {
    for (const auto& sc : stable_classes_up_to(euler_max)) {
      for (const auto& p : partitions_fixed_length(static_cast<unsigned>(sc.dimension()),
                                                   static_cast<unsigned>(sc.n))) {
        if (!engine.dilaton_residual(sc.g, p).is_zero()) {
          out << "FAIL dilaton g=" << sc.g << " d=" << p.to_string() << "\n";
          return 1;
        }
        ++checks;
      }
    }
  } else if (suite == "onepoint") {
    for (int g = 1; 2 * g - 1 <= euler_max; ++g) {
      BigInt denom = 1;
      for (int i = 1; i <= g; ++i) denom *= 24 * i;  // 24^g g!
      const Rational expected(BigInt(1), denom);
      if (engine.intersection_number(g, Partition({static_cast<unsigned>(3 * g - 2)})) !=
          expected) {
        out << "FAIL onepoint g=" << g << "\n";
        return 1;
      }
      ++checks;
    }
  } else if (suite == "symmetry") {
    std::mt19937_64 rng(12345);
    for (const auto& sc : stable_classes_up_to(euler_max)) {
      if (sc.n < 2) continue;
      for (const auto& p : partitions_fixed_length(static_cast<unsigned>(sc.dimension()),
                                                   static_cast<unsigned>(sc.n))) {
        const Rational canonical = engine.amplitude(sc.g, p);
        std::vector<unsigned> shuffled = p.parts();
        for (int trial = 0; trial < 4; ++trial) {
          std::shuffle(shuffled.begin(), shuffled.end(), rng);
          if (engine.amplitude(sc.g, Partition(shuffled)) != canonical) {
            out << "FAIL symmetry g=" << sc.g << " d=" << p.to_string() << "\n";
            return 1;
          }
          ++checks;
        }
      }
    }
  } else if (suite == "selection") {
    for (const auto& sc : stable_classes_up_to(euler_max)) {
      const unsigned dim = static_cast<unsigned>(sc.dimension());
      for (unsigned w = 0; w <= dim + 2; ++w) {
        if (w == dim) continue;
        for (const auto& p :
             partitions_fixed_length(w, static_cast<unsigned>(sc.n))) {
          if (!engine.intersection_number(sc.g, p).is_zero()) {
            out << "FAIL selection g=" << sc.g << " d=" << p.to_string() << "\n";
            return 1;
          }
          ++checks;
        }
      }
    }
  } else {
    throw std::invalid_argument("unknown suite '" + suite + "'");
  }
  session.persist();
  out << "suite " << suite << ": " << checks << " checks passed\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact psi-class intersection numbers by topological recursion, "
               "with asymptotics, dataset, conformal, and probing tools"};
  app.require_subcommand(1);

  // compute
  auto* compute = app.add_subcommand("compute", "Exact intersection number for one (g, d)");
  int compute_g = 0;
  std::string compute_d;
  compute->add_option("-g", compute_g, "Genus")->required();
  compute->add_option("-d", compute_d, "Partition, comma-separated (any order)")->required();

  // table
  auto* table = app.add_subcommand("table", "All intersection numbers for a surface class");
  int table_g = 0, table_n = 0, table_threads = 1;
  bool table_as_json = false;
  table->add_option("-g", table_g, "Genus")->required();
  table->add_option("-n", table_n, "Marked points")->required();
  table->add_flag("--json", table_as_json, "Emit dataset-style JSON records");
  table->add_option("--threads", table_threads, "Worker threads");

  // verify
  auto* verify = app.add_subcommand("verify", "Engine self-checks");
  std::string verify_suite_name;
  int verify_euler = 6;
  verify->add_option("--suite", verify_suite_name, "dilaton|onepoint|symmetry|selection")
      ->required();
  verify->add_option("--euler-max", verify_euler, "Euler characteristic bound");

  // dataset build / shuffle
  auto* dataset = app.add_subcommand("dataset", "Training-set generation");
  dataset->require_subcommand(1);
  auto* build = dataset->add_subcommand("build", "Generate records and the shared B tensor");
  BuildOptions build_options;
  std::string build_out;
  int build_n_min = -1, build_n_max = -1;
  build->add_option("--g-min", build_options.g_min, "Lowest genus")->required();
  build->add_option("--g-max", build_options.g_max, "Highest genus")->required();
  build->add_option("--dim-max", build_options.dim_max, "Cap on 3g-3+n");
  build->add_option("--n-min", build_n_min, "Lowest marked-point count");
  build->add_option("--n-max", build_n_max, "Highest marked-point count");
  build->add_option("--threads", build_options.threads, "Worker threads");
  build->add_option("--out", build_out, "Output directory")->required();

  auto* shuffle = dataset->add_subcommand("shuffle", "Counterfactual modality re-binding");
  std::string shuffle_in, shuffle_out, shuffle_modality;
  std::uint64_t shuffle_seed = 0;
  shuffle->add_option("--in", shuffle_in, "Input dataset directory")->required();
  shuffle->add_option("--out", shuffle_out, "Output dataset directory")->required();
  shuffle->add_option("--modality", shuffle_modality, "n|B|d")->required();
  shuffle->add_option("--seed", shuffle_seed, "Permutation seed")->required();

  // asymptotics
  auto* asym = app.add_subcommand("asymptotics", "Growth-law ratios and subleading fit");
  int asym_n = 1, asym_g_min = 2, asym_g_max = 8, asym_fit_order = 0;
  bool asym_csv = false;
  asym->add_option("--n", asym_n, "Marked points");
  asym->add_option("--g-min", asym_g_min, "Lowest genus");
  asym->add_option("--g-max", asym_g_max, "Highest genus")->required();
  asym->add_option("--fit-order", asym_fit_order, "Subleading fit order (0 = no fit)");
  asym->add_flag("--csv", asym_csv, "Emit the ratio series as CSV");

  // conformal
  auto* conformal = app.add_subcommand("conformal", "Sliding-window interval calibration");
  std::string conformal_input;
  double conformal_alpha = 0.1;
  std::size_t conformal_window = 20;
  conformal->add_option("--input", conformal_input, "CSV or JSONL samples")->required();
  conformal->add_option("--alpha", conformal_alpha, "Miscoverage level");
  conformal->add_option("--window", conformal_window, "Rolling window size");

  // dra-demo
  auto* demo = app.add_subcommand("dra-demo", "Recursive-sequence extrapolation experiment");
  std::string demo_activation = "dra";
  int demo_seeds = 5, demo_steps = 20000, demo_threads = 1;
  double demo_lr = 2e-3;
  bool demo_csv = false;
  demo->add_option("--activation", demo_activation, "dra|relu|tanh|snake");
  demo->add_option("--seeds", demo_seeds, "Seeds for best-of-k");
  demo->add_option("--steps", demo_steps, "Optimizer steps");
  demo->add_option("--lr", demo_lr, "Learning rate");
  demo->add_option("--threads", demo_threads, "Parallel seed runs");
  demo->add_flag("--csv", demo_csv, "Emit n,truth,prediction rows");

  // probe scan-A / synth
  auto* probe = app.add_subcommand("probe", "Feature-space probing");
  probe->require_subcommand(1);
  auto* scan = probe->add_subcommand("scan-A", "Growth-constant hypothesis grid");
  std::string scan_features, scan_kind = "linear";
  double scan_ridge = 1e-6;
  int scan_threads = 1, scan_top = 10;
  scan->add_option("--features", scan_features, "Feature CSV (g,n,d,f0,...)")->required();
  scan->add_option("--kind", scan_kind, "linear|nonlinear");
  scan->add_option("--ridge", scan_ridge, "Ridge strength for linear probes");
  scan->add_option("--threads", scan_threads, "Parallel hypotheses");
  scan->add_option("--top", scan_top, "Ranked rows to print");

  auto* synth = probe->add_subcommand("synth", "Synthetic feature matrix for the scan");
  std::string synth_out;
  int synth_g_min = 2, synth_g_max = 6, synth_n_max = 3;
  std::uint64_t synth_seed = 0;
  double synth_noise = 0.02;
  synth->add_option("--out", synth_out, "Output CSV")->required();
  synth->add_option("--g-min", synth_g_min, "Lowest genus");
  synth->add_option("--g-max", synth_g_max, "Highest genus");
  synth->add_option("--n-max", synth_n_max, "Highest marked-point count");
  synth->add_option("--seed", synth_seed, "Noise seed");
  synth->add_option("--noise", synth_noise, "Noise scale (fraction of column sd)");

  std::vector<const char*> argv;
  argv.push_back("airygeom");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*compute) {
      RecursionEngine engine;
      CacheSession session(engine);
      const Partition d = Partition::parse(compute_d);
      const Rational value = engine.intersection_number(compute_g, d);
      out << value.to_string() << "\n" << log10_line(value) << "\n";
      session.persist();
      return 0;
    }
    if (*table) {
      RecursionEngine engine;
      CacheSession session(engine);
      const auto rows = engine.amplitude_table(table_g, table_n, table_threads);
      if (table_as_json) {
        out << table_json(table_g, table_n, rows).dump(2) << "\n";
      } else {
        for (const auto& [p, value] : rows)
          out << p.to_string() << "\t" << value.to_string() << "\n";
      }
      session.persist();
      return 0;
    }
    if (*verify) return verify_suite(verify_suite_name, verify_euler, out);
    if (*build) {
      if (build_n_min >= 0) build_options.n_min = build_n_min;
      if (build_n_max >= 0) build_options.n_max = build_n_max;
      RecursionEngine engine;
      CacheSession session(engine);
      const Dataset ds = build_records(engine, build_options);
      write_dataset(ds, build_out);
      session.persist();
      out << "wrote " << ds.records.size() << " records, " << ds.b_coo.size()
          << " B entries to " << build_out << "\n";
      return 0;
    }
    if (*shuffle) {
      Dataset ds = read_dataset(shuffle_in);
      ds.records = counterfactual_shuffle(ds.records, modality_from_string(shuffle_modality),
                                          shuffle_seed);
      // Recount blocks: the n modality changes (g, n) membership.
      std::map<std::pair<int, int>, std::uint64_t> counts;
      for (const auto& r : ds.records) counts[{r.g, r.n}]++;
      ds.manifest.counts.clear();
      for (const auto& [gn, c] : counts)
        ds.manifest.counts.push_back({gn.first, gn.second, c});
      write_dataset(ds, shuffle_out);
      out << "shuffled modality " << shuffle_modality << " with seed " << shuffle_seed
          << " into " << shuffle_out << "\n";
      return 0;
    }
    if (*asym) {
      RecursionEngine engine;
      CacheSession session(engine);
      const RatioSeries series = build_ratio_series(engine, asym_n, asym_g_min, asym_g_max);
      if (asym_csv) {
        out << ratio_series_csv(series);
      } else {
        out << std::fixed << std::setprecision(6);
        for (const auto& e : series.entries) {
          out << "g=" << e.g << " n=" << e.n << " d=" << e.d.to_string('-')
              << " ratio=" << e.ratio;
          if (!e.in_theorem_regime) out << "  [outside n = o(sqrt g) regime]";
          out << "\n";
        }
      }
      if (asym_fit_order > 0) {
        const FitReport fit = fit_subleading(series, asym_fit_order);
        out << "fit order " << asym_fit_order << ":";
        for (double c : fit.coefficients) out << " " << c;
        out << "\nalpha1 = " << fit.alpha1() << "  rss = " << std::scientific << fit.rss
            << "\n";
      }
      session.persist();
      return 0;
    }
    if (*conformal) {
      const auto samples = read_samples(conformal_input);
      const IntervalReport report =
          calibrate_intervals(samples, conformal_alpha, conformal_window);
      out << report_to_json(report) << "\n";
      return 0;
    }
    if (*demo) {
      NetConfig config;
      config.activation = activation_from_string(demo_activation);
      config.steps = demo_steps;
      config.learning_rate = demo_lr;
      const std::pair<int, int> train_range{0, 120}, test_range{121, 200};
      const TrainReport best =
          best_of_seeds(config, demo_seeds, train_range, test_range, demo_threads);
      if (demo_csv) {
        const auto seq = recursive_sequence(test_range.second);
        out << "n,truth,prediction\n";
        for (int n = best.range_lo; n <= test_range.second; ++n)
          out << n << ',' << seq[static_cast<std::size_t>(n)] << ','
              << best.predictions[static_cast<std::size_t>(n - best.range_lo)] << "\n";
      } else {
        out << "activation=" << to_string(best.activation) << " best_seed=" << best.seed
            << " train_r2=" << best.train_r2 << " test_r2=" << best.test_r2
            << (best.diverged ? " DIVERGED" : "") << "\n";
      }
      return 0;
    }
    if (*scan) {
      const auto [features, keys] = read_features_csv(scan_features);
      ProbeConfig config;
      config.kind = scan_kind == "nonlinear" ? ProbeKind::NonLinear : ProbeKind::Linear;
      config.ridge = scan_ridge;
      const auto ranked = scan_growth_constant(features, keys, config, scan_threads);
      out << "rank\tA\tr2\n";
      for (std::size_t i = 0; i < ranked.size() && i < static_cast<std::size_t>(scan_top);
           ++i) {
        const auto& e = ranked[i];
        out << (i + 1) << "\t" << e.hypothesis.num << "/" << e.hypothesis.den << "\t"
            << e.r2 << "\n";
      }
      const auto collapsed = collapse_by_value(ranked);
      out << "best value: " << collapsed.front().first.to_string()
          << " (r2=" << collapsed.front().second << ")\n";
      return 0;
    }
    if (*synth) {
      RecursionEngine engine;
      CacheSession session(engine);
      std::vector<AmplitudeKey> keys;
      for (int g = synth_g_min; g <= synth_g_max; ++g)
        for (int n = 1; n <= synth_n_max; ++n) {
          const SurfaceClass sc{g, n};
          if (!sc.stable()) continue;
          for (const auto& p : partitions_fixed_length(
                   static_cast<unsigned>(sc.dimension()), static_cast<unsigned>(n)))
            keys.push_back({g, p});
        }
      const FeatureMatrix features =
          synthetic_features(engine, keys, {synth_seed, synth_noise});
      write_features_csv(synth_out, features, keys);
      session.persist();
      out << "wrote " << features.rows << " rows x " << features.cols << " features to "
          << synth_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "usage error: no subcommand\n";
  return 2;
}

}  // namespace airygeom
