#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace fpxl {

/// Real nodal values on a mesh. A grid function is implicitly zero outside
/// the domain; the Dirichlet volume condition additionally pins the collar
/// nodes (see Mesh::isInterior) to zero for admissible states.
struct GridFunction {
  std::vector<double> values;

  GridFunction() = default;
  explicit GridFunction(std::size_t n, double fill = 0.0) : values(n, fill) {}
  explicit GridFunction(std::vector<double> v) : values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::span<const double> span() const { return values; }
};

/// Nodal representation of a functional; pairing is <F, v> = sum_i F_i v_i
/// (quadrature weights are already folded into the entries).
struct DualVector {
  std::vector<double> values;

  DualVector() = default;
  explicit DualVector(std::size_t n, double fill = 0.0) : values(n, fill) {}
  explicit DualVector(std::vector<double> v) : values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::span<const double> span() const { return values; }
};

inline double pairing(const DualVector& f, const GridFunction& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f.values[i] * v.values[i];
  return s;
}

inline double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// |t|^{p-2} t, extended continuously by 0 at t = 0 (valid for p > 1).
inline double signed_power(double t, double p) {
  if (t == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(t), p - 1.0), t);
}

}  // namespace fpxl
