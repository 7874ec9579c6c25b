// Times the OpenMP point tables against their serial references.
//
//   bench_tables [points] [repeats]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "contact_spinor/numeric.hpp"

using namespace contact_spinor::numeric;

namespace {

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 2000;
  int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
  std::mt19937_64 rng(20240611);
  FrameField f = random_polynomial_frame(rng);
  auto pts = random_points(rng, n);

  // warm caches (compiled polynomials, thread pool)
  psi_table(f, {pts.front()});
  system_table(f, {pts.front()});

  std::printf("threads %d, points %zu, best of %d\n", omp_get_max_threads(), n, repeats);
  std::printf("%-14s %12s %12s %8s\n", "table", "serial s", "parallel s", "speedup");
  double s = best_of(repeats, [&] { psi_table_serial(f, pts); });
  double p = best_of(repeats, [&] { psi_table(f, pts); });
  std::printf("%-14s %12.4f %12.4f %8.2f\n", "psi", s, p, s / p);
  s = best_of(repeats, [&] { system_table_serial(f, pts); });
  p = best_of(repeats, [&] { system_table(f, pts); });
  std::printf("%-14s %12.4f %12.4f %8.2f\n", "system", s, p, s / p);
  return 0;
}
