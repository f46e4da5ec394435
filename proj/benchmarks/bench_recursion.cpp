// Times the naive serial recursion against the level-ordered engine (one
// thread and several) over every stable surface class up to a given Euler
// characteristic, and cross-checks that all three produce identical exact
// values.
#include <chrono>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "airygeom/partition.hpp"
#include "airygeom/recursion.hpp"
#include "airygeom/reference.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<airygeom::SurfaceClass> classes_up_to(int euler_max) {
  std::vector<airygeom::SurfaceClass> out;
  for (int g = 0; 2 * g - 1 <= euler_max; ++g)
    for (int n = 1; 2 * g - 2 + n <= euler_max; ++n)
      if (airygeom::SurfaceClass{g, n}.stable()) out.push_back({g, n});
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  int euler_max = 9;
  int threads = 4;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--euler-max") == 0 && i + 1 < argc)
      euler_max = std::atoi(argv[++i]);
    else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc)
      threads = std::atoi(argv[++i]);
    else {
      std::cerr << "usage: airygeom_bench [--euler-max E] [--threads T]\n";
      return 2;
    }
  }

  const auto classes = classes_up_to(euler_max);
  std::size_t amplitude_count = 0;
  for (const auto& sc : classes)
    amplitude_count += airygeom::partitions_fixed_length(
                           static_cast<unsigned>(sc.dimension()),
                           static_cast<unsigned>(sc.n))
                           .size();
  std::cout << "surface classes with 2g-2+n <= " << euler_max << ": " << classes.size()
            << ", top-level amplitudes: " << amplitude_count << "\n";
#if defined(_OPENMP)
  std::cout << "openmp enabled, hardware threads: " << omp_get_num_procs() << "\n";
#else
  std::cout << "openmp not available, parallel pass runs serially\n";
#endif

  // Serial reference: naive recursion, one memo per top-level call.
  std::vector<std::vector<std::pair<airygeom::Partition, airygeom::Rational>>> reference_tables;
  auto start = Clock::now();
  for (const auto& sc : classes) {
    std::vector<std::pair<airygeom::Partition, airygeom::Rational>> table;
    for (const auto& p : airygeom::partitions_fixed_length(
             static_cast<unsigned>(sc.dimension()), static_cast<unsigned>(sc.n)))
      table.emplace_back(p, airygeom::reference::amplitude(sc.g, p.parts()));
    reference_tables.push_back(std::move(table));
  }
  const double t_reference = seconds_since(start);
  std::cout << "reference (serial, per-call memo):  " << t_reference << " s\n";

  // Engine, one thread.
  airygeom::RecursionEngine engine_serial;
  start = Clock::now();
  std::vector<std::vector<std::pair<airygeom::Partition, airygeom::Rational>>> engine_tables;
  for (const auto& sc : classes)
    engine_tables.push_back(engine_serial.amplitude_table(sc.g, sc.n, 1));
  const double t_engine1 = seconds_since(start);
  std::cout << "engine   (1 thread, shared cache):  " << t_engine1 << " s  (speedup "
            << t_reference / t_engine1 << "x)\n";

  // Engine, parallel levels.
  airygeom::RecursionEngine engine_parallel;
  start = Clock::now();
  std::vector<std::vector<std::pair<airygeom::Partition, airygeom::Rational>>> parallel_tables;
  for (const auto& sc : classes)
    parallel_tables.push_back(engine_parallel.amplitude_table(sc.g, sc.n, threads));
  const double t_engineN = seconds_since(start);
  std::cout << "engine   (" << threads << " threads, shared cache): " << t_engineN
            << " s  (speedup " << t_reference / t_engineN << "x)\n";

  if (engine_tables != reference_tables || parallel_tables != reference_tables) {
    std::cerr << "MISMATCH between evaluation paths\n";
    return 1;
  }
  std::cout << "all " << amplitude_count << " amplitudes identical across paths\n";
  return 0;
}
