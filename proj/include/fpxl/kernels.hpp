#pragma once

#include <cstddef>
#include <span>

namespace fpxl {

class Mesh;
class ExponentField;

/// The O(n^2) pair loops, each in an OpenMP variant and a serial reference
/// variant. The public entry points dispatch on set_parallel(); tests compare
/// the two paths, the benchmark times them.
///
/// Reductions accumulate per-thread partials with a static schedule and
/// combine them in thread order, so results are bit-reproducible for a fixed
/// thread count. With one thread the OpenMP path sums in the exact order of
/// the serial reference.
namespace kernels {

void set_parallel(bool on);
bool parallel_enabled();

/// Number of threads the parallel path will use.
int thread_count();

// --- kernel table assembly: out is n*n row-major, diagonal set to zero ---
void assemble_kernel_serial(const Mesh& mesh, double s, const ExponentField& field,
                            std::span<double> out);
void assemble_kernel_omp(const Mesh& mesh, double s, const ExponentField& field,
                         std::span<double> out);
void assemble_kernel(const Mesh& mesh, double s, const ExponentField& field,
                     std::span<double> out);

// --- pair modular: sum_{i != j} K(i,j) |scale (u_i - u_j)|^{p(i,j)} ---
double gagliardo_sum_serial(std::span<const double> kernel, const ExponentField& field,
                            std::span<const double> u, double scale);
double gagliardo_sum_omp(std::span<const double> kernel, const ExponentField& field,
                         std::span<const double> u, double scale);
double gagliardo_sum(std::span<const double> kernel, const ExponentField& field,
                     std::span<const double> u, double scale);

// --- operator rows: out_i = 2 sum_{j != i} K(i,j) |u_i-u_j|^{p(i,j)-2} (u_i-u_j) ---
void nonlocal_apply_serial(std::span<const double> kernel, const ExponentField& field,
                           std::span<const double> u, std::span<double> out);
void nonlocal_apply_omp(std::span<const double> kernel, const ExponentField& field,
                        std::span<const double> u, std::span<double> out);
void nonlocal_apply(std::span<const double> kernel, const ExponentField& field,
                    std::span<const double> u, std::span<double> out);

// --- pair energy: sum_{i != j} K(i,j) |u_i - u_j|^{p(i,j)} / p(i,j) ---
double pair_energy_serial(std::span<const double> kernel, const ExponentField& field,
                          std::span<const double> u);
double pair_energy_omp(std::span<const double> kernel, const ExponentField& field,
                       std::span<const double> u);
double pair_energy(std::span<const double> kernel, const ExponentField& field,
                   std::span<const double> u);

}  // namespace kernels
}  // namespace fpxl
