#include "fpxl/kernels.hpp"

#include <omp.h>

#include <atomic>
#include <cmath>
#include <vector>

#include "fpxl/exponents.hpp"
#include "fpxl/mesh.hpp"
#include "fpxl/types.hpp"

namespace fpxl::kernels {

namespace {
std::atomic<bool> g_parallel{true};
}

void set_parallel(bool on) { g_parallel.store(on); }
bool parallel_enabled() { return g_parallel.load(); }
int thread_count() { return omp_get_max_threads(); }

// ---------------------------------------------------------------------------
// kernel table assembly
// ---------------------------------------------------------------------------

namespace {

inline void assemble_row(const Mesh& mesh, double s, const ExponentField& field, std::size_t i,
                         std::span<double> out) {
  const std::size_t n = mesh.size();
  const double N = static_cast<double>(mesh.dim());
  const double wi = mesh.weight(i);
  auto prow = field.pRow(i);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) {
      out[i * n + j] = 0.0;
      continue;
    }
    const double d = mesh.distance(i, j);
    out[i * n + j] = wi * mesh.weight(j) / std::pow(d, N + s * prow[j]);
  }
}

}  // namespace

void assemble_kernel_serial(const Mesh& mesh, double s, const ExponentField& field,
                            std::span<double> out) {
  for (std::size_t i = 0; i < mesh.size(); ++i) assemble_row(mesh, s, field, i, out);
}

void assemble_kernel_omp(const Mesh& mesh, double s, const ExponentField& field,
                         std::span<double> out) {
  const auto n = static_cast<long>(mesh.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) assemble_row(mesh, s, field, static_cast<std::size_t>(i), out);
}

void assemble_kernel(const Mesh& mesh, double s, const ExponentField& field,
                     std::span<double> out) {
  if (parallel_enabled())
    assemble_kernel_omp(mesh, s, field, out);
  else
    assemble_kernel_serial(mesh, s, field, out);
}

// ---------------------------------------------------------------------------
// pair modular
// ---------------------------------------------------------------------------

namespace {

inline double gagliardo_row(std::span<const double> kernel, const ExponentField& field,
                            std::span<const double> u, double scale, std::size_t i) {
  const std::size_t n = u.size();
  const double ui = u[i];
  auto prow = field.pRow(i);
  const double* krow = kernel.data() + i * n;
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    const double diff = scale * (ui - u[j]);
    if (diff == 0.0) continue;
    acc += krow[j] * std::pow(std::abs(diff), prow[j]);
  }
  return acc;
}

}  // namespace

double gagliardo_sum_serial(std::span<const double> kernel, const ExponentField& field,
                            std::span<const double> u, double scale) {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += gagliardo_row(kernel, field, u, scale, i);
  return acc;
}

double gagliardo_sum_omp(std::span<const double> kernel, const ExponentField& field,
                         std::span<const double> u, double scale) {
  const auto n = static_cast<long>(u.size());
  std::vector<double> partial(static_cast<std::size_t>(omp_get_max_threads()), 0.0);
#pragma omp parallel
  {
    double acc = 0.0;
#pragma omp for schedule(static)
    for (long i = 0; i < n; ++i)
      acc += gagliardo_row(kernel, field, u, scale, static_cast<std::size_t>(i));
    partial[static_cast<std::size_t>(omp_get_thread_num())] = acc;
  }
  // combine in thread order: bit-stable for a fixed thread count
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double gagliardo_sum(std::span<const double> kernel, const ExponentField& field,
                     std::span<const double> u, double scale) {
  return parallel_enabled() ? gagliardo_sum_omp(kernel, field, u, scale)
                            : gagliardo_sum_serial(kernel, field, u, scale);
}

// ---------------------------------------------------------------------------
// operator rows
// ---------------------------------------------------------------------------

namespace {

inline double apply_row(std::span<const double> kernel, const ExponentField& field,
                        std::span<const double> u, std::size_t i) {
  const std::size_t n = u.size();
  const double ui = u[i];
  auto prow = field.pRow(i);
  const double* krow = kernel.data() + i * n;
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    acc += krow[j] * signed_power(ui - u[j], prow[j]);
  }
  return 2.0 * acc;
}

}  // namespace

void nonlocal_apply_serial(std::span<const double> kernel, const ExponentField& field,
                           std::span<const double> u, std::span<double> out) {
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = apply_row(kernel, field, u, i);
}

void nonlocal_apply_omp(std::span<const double> kernel, const ExponentField& field,
                        std::span<const double> u, std::span<double> out) {
  const auto n = static_cast<long>(u.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i)
    out[i] = apply_row(kernel, field, u, static_cast<std::size_t>(i));
}

void nonlocal_apply(std::span<const double> kernel, const ExponentField& field,
                    std::span<const double> u, std::span<double> out) {
  if (parallel_enabled())
    nonlocal_apply_omp(kernel, field, u, out);
  else
    nonlocal_apply_serial(kernel, field, u, out);
}

// ---------------------------------------------------------------------------
// pair energy
// ---------------------------------------------------------------------------

namespace {

inline double energy_row(std::span<const double> kernel, const ExponentField& field,
                         std::span<const double> u, std::size_t i) {
  const std::size_t n = u.size();
  const double ui = u[i];
  auto prow = field.pRow(i);
  const double* krow = kernel.data() + i * n;
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    const double diff = ui - u[j];
    if (diff == 0.0) continue;
    const double p = prow[j];
    acc += krow[j] * std::pow(std::abs(diff), p) / p;
  }
  return acc;
}

}  // namespace

double pair_energy_serial(std::span<const double> kernel, const ExponentField& field,
                          std::span<const double> u) {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += energy_row(kernel, field, u, i);
  return acc;
}

double pair_energy_omp(std::span<const double> kernel, const ExponentField& field,
                       std::span<const double> u) {
  const auto n = static_cast<long>(u.size());
  std::vector<double> partial(static_cast<std::size_t>(omp_get_max_threads()), 0.0);
#pragma omp parallel
  {
    double acc = 0.0;
#pragma omp for schedule(static)
    for (long i = 0; i < n; ++i)
      acc += energy_row(kernel, field, u, static_cast<std::size_t>(i));
    partial[static_cast<std::size_t>(omp_get_thread_num())] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double pair_energy(std::span<const double> kernel, const ExponentField& field,
                   std::span<const double> u) {
  return parallel_enabled() ? pair_energy_omp(kernel, field, u)
                            : pair_energy_serial(kernel, field, u);
}

}  // namespace fpxl::kernels
