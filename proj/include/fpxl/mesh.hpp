#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "fpxl/types.hpp"

namespace fpxl {

class ExponentField;

/// Axis-aligned box domain (0, L1) x ... x (0, Ldim), dim in {1,2}.
struct Box {
  int dim = 1;
  std::array<double, 2> extents{1.0, 1.0};

  double volume() const {
    double v = 1.0;
    for (int k = 0; k < dim; ++k) v *= extents[k];
    return v;
  }
};

/// Uniform cell-center discretization of a box. Each axis uses
/// m_k = ceil(L_k / h) cells of width L_k / m_k, so the requested spacing is
/// an upper bound and the cell volumes sum to |Omega| exactly.
///
/// The outermost cell layer is the Dirichlet collar: those nodes carry the
/// homogeneous volume condition (value pinned to 0) and the solver unknowns
/// are the strict-interior nodes.
class Mesh {
 public:
  static Mesh build(const Box& box, double h);

  int dim() const { return box_.dim; }
  std::size_t size() const { return nNodes_; }
  double h() const { return h_; }
  double weight(std::size_t) const { return cellVolume_; }
  double cellVolume() const { return cellVolume_; }
  double volume() const { return box_.volume(); }
  const Box& box() const { return box_; }
  std::size_t cells(int axis) const { return shape_[static_cast<std::size_t>(axis)]; }
  double spacing(int axis) const { return spacing_[static_cast<std::size_t>(axis)]; }

  std::span<const double> node(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(box_.dim),
            static_cast<std::size_t>(box_.dim)};
  }

  /// Euclidean distance between nodes i and j.
  double distance(std::size_t i, std::size_t j) const;

  bool isInterior(std::size_t i) const { return interiorMask_[i]; }
  std::span<const std::size_t> interiorNodes() const { return interior_; }
  std::size_t interiorCount() const { return interior_.size(); }

  /// Index of the mirror node under reflection of axis `axis` (x -> L - x).
  std::size_t reflect(std::size_t i, int axis) const;

  /// Gather the interior entries of a full nodal vector.
  std::vector<double> restrictInterior(std::span<const double> full) const;

  /// Scatter interior values into a full nodal vector, zero on the collar.
  GridFunction injectInterior(std::span<const double> x) const;

 private:
  Box box_;
  std::array<std::size_t, 2> shape_{1, 1};
  std::array<double, 2> spacing_{0.0, 0.0};
  std::size_t nNodes_ = 0;
  double cellVolume_ = 0.0;
  double h_ = 0.0;
  std::vector<double> coords_;  // row-major, nNodes x dim
  std::vector<char> interiorMask_;
  std::vector<std::size_t> interior_;
};

/// Dense table of the singular pair interaction
///   K(i,j) = w_i w_j / |x_i - x_j|^{N + s p(i,j)},  i != j,
/// with the diagonal excluded (the weak form only sees differences, so the
/// i = j term vanishes identically and no principal-value correction enters).
class KernelTable {
 public:
  static KernelTable build(const Mesh& mesh, double s, const ExponentField& field);

  std::size_t size() const { return n_; }
  double s() const { return s_; }

  double operator()(std::size_t i, std::size_t j) const { return k_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {k_.data() + i * n_, n_}; }
  std::span<const double> table() const { return k_; }

 private:
  std::size_t n_ = 0;
  double s_ = 0.0;
  std::vector<double> k_;
};

}  // namespace fpxl
