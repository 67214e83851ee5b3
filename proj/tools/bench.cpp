// Times the O(n^2) pair kernels, serial reference vs OpenMP, across sizes.
#include <chrono>
#include <cstdio>
#include <vector>

#include "fpxl/exponents.hpp"
#include "fpxl/kernels.hpp"
#include "fpxl/mesh.hpp"
#include "fpxl/rng.hpp"
#include "fpxl/types.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

template <typename F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = clock_type::now();
    f();
    const auto t1 = clock_type::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main() {
  std::printf("threads: %d\n", fpxl::kernels::thread_count());
  std::printf("%-18s %6s %12s %12s %9s\n", "kernel", "n", "serial [s]", "openmp [s]", "speedup");

  for (std::size_t n : {128, 256, 512, 1024}) {
    fpxl::Box box{1, {1.0, 1.0}};
    fpxl::Mesh mesh = fpxl::Mesh::build(box, 1.0 / static_cast<double>(n));
    auto p = [](std::span<const double> x, std::span<const double> y) {
      return 2.0 + 0.25 * (x[0] + y[0]);
    };
    auto r = [](std::span<const double>) { return 1.5; };
    fpxl::ExponentField field = fpxl::ExponentField::build(p, r, mesh);

    std::vector<double> table(n * n);
    fpxl::Rng rng(7);
    fpxl::GridFunction u(n);
    for (auto& v : u.values) v = rng.uniform(-1.0, 1.0);
    std::vector<double> out(n);

    const int reps = n <= 256 ? 20 : 8;

    double ts = best_of(reps, [&] {
      fpxl::kernels::assemble_kernel_serial(mesh, 0.5, field, table);
    });
    double tp = best_of(reps, [&] {
      fpxl::kernels::assemble_kernel_omp(mesh, 0.5, field, table);
    });
    std::printf("%-18s %6zu %12.6f %12.6f %8.2fx\n", "assemble_kernel", n, ts, tp, ts / tp);

    ts = best_of(reps, [&] {
      fpxl::kernels::gagliardo_sum_serial(table, field, u.values, 1.0);
    });
    tp = best_of(reps, [&] {
      fpxl::kernels::gagliardo_sum_omp(table, field, u.values, 1.0);
    });
    std::printf("%-18s %6zu %12.6f %12.6f %8.2fx\n", "gagliardo_sum", n, ts, tp, ts / tp);

    ts = best_of(reps, [&] {
      fpxl::kernels::nonlocal_apply_serial(table, field, u.values, out);
    });
    tp = best_of(reps, [&] {
      fpxl::kernels::nonlocal_apply_omp(table, field, u.values, out);
    });
    std::printf("%-18s %6zu %12.6f %12.6f %8.2fx\n", "nonlocal_apply", n, ts, tp, ts / tp);

    ts = best_of(reps, [&] { fpxl::kernels::pair_energy_serial(table, field, u.values); });
    tp = best_of(reps, [&] { fpxl::kernels::pair_energy_omp(table, field, u.values); });
    std::printf("%-18s %6zu %12.6f %12.6f %8.2fx\n", "pair_energy", n, ts, tp, ts / tp);
  }
  return 0;
}
