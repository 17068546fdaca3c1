// Benchmarks the parallel sweep kernel against the serial reference on a
// representative amplitude grid and checks that the two tables agree
// bit for bit.

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <iostream>

#ifdef CATREP_HAVE_OPENMP
#include <omp.h>
#endif

#include "catrep/csv.hpp"
#include "catrep/explorer.hpp"

int main(int argc, char **argv) {
  int points = 20000;
  if (argc > 1) points = std::atoi(argv[1]);
  if (points < 1) {
    std::cerr << "usage: bench_sweep [grid points]\n";
    return 2;
  }

  catrep::explorer::SweepSpec spec;
  spec.base.code = {1.0, 1};
  spec.base.usd = catrep::rate::UsdConvention::damped;
  spec.base.desired_residues = {0};
  spec.base.l_total_km = 1000.0;
  spec.base.l0_km = 1.0;
  spec.param = "alpha";
  spec.values = catrep::explorer::linspace(0.4, 2.2, points);

  auto time_run = [&](auto &&fn) {
    auto start = std::chrono::steady_clock::now();
    auto result = fn(spec);
    auto stop = std::chrono::steady_clock::now();
    double elapsed = std::chrono::duration<double>(stop - start).count();
    return std::pair{elapsed, std::move(result)};
  };

  auto [t_serial, serial] = time_run(catrep::explorer::sweep_serial);
  auto [t_parallel, parallel] = time_run(catrep::explorer::sweep);

#ifdef CATREP_HAVE_OPENMP
  std::cout << "threads: " << omp_get_max_threads() << "\n";
#else
  std::cout << "threads: 1 (built without OpenMP)\n";
#endif
  std::cout << "grid points: " << points << "\n";
  std::cout << "serial:   " << t_serial << " s\n";
  std::cout << "parallel: " << t_parallel << " s\n";
  std::cout << "speedup:  " << t_serial / t_parallel << "x\n";

  bool identical = serial.size() == parallel.size();
  for (std::size_t i = 0; identical && i < serial.size(); ++i) {
    std::vector<double> a = catrep::csv::report_row(serial[i]);
    std::vector<double> b = catrep::csv::report_row(parallel[i]);
    identical = std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
  }
  std::cout << "tables identical: " << (identical ? "yes" : "NO") << "\n";
  return identical ? 0 : 1;
}
