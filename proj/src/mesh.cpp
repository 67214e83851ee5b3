#include "fpxl/mesh.hpp"

#include <cmath>
#include <string>

#include "fpxl/errors.hpp"
#include "fpxl/exponents.hpp"
#include "fpxl/kernels.hpp"

namespace fpxl {

Mesh Mesh::build(const Box& box, double h) {
  if (box.dim != 1 && box.dim != 2)
    throw EmptyMesh("mesh dimension must be 1 or 2, got " + std::to_string(box.dim));
  if (!(h > 0.0)) throw EmptyMesh("mesh spacing must be positive, got " + std::to_string(h));
  for (int k = 0; k < box.dim; ++k) {
    if (!(box.extents[static_cast<std::size_t>(k)] > 0.0))
      throw EmptyMesh("box extent along axis " + std::to_string(k) + " must be positive");
  }

  Mesh m;
  m.box_ = box;
  m.cellVolume_ = 1.0;
  m.nNodes_ = 1;
  for (int k = 0; k < box.dim; ++k) {
    const double L = box.extents[static_cast<std::size_t>(k)];
    const auto cells = static_cast<std::size_t>(std::ceil(L / h));
    m.shape_[static_cast<std::size_t>(k)] = cells;
    m.spacing_[static_cast<std::size_t>(k)] = L / static_cast<double>(cells);
    m.cellVolume_ *= m.spacing_[static_cast<std::size_t>(k)];
    m.h_ = std::max(m.h_, m.spacing_[static_cast<std::size_t>(k)]);
    m.nNodes_ *= cells;
  }
  if (m.nNodes_ == 0) throw EmptyMesh("box too small for a single cell");

  m.coords_.resize(m.nNodes_ * static_cast<std::size_t>(box.dim));
  m.interiorMask_.assign(m.nNodes_, 0);
  const std::size_t mx = m.shape_[0];
  const std::size_t my = box.dim == 2 ? m.shape_[1] : 1;
  for (std::size_t iy = 0; iy < my; ++iy) {
    for (std::size_t ix = 0; ix < mx; ++ix) {
      const std::size_t i = iy * mx + ix;
      m.coords_[i * static_cast<std::size_t>(box.dim)] =
          (static_cast<double>(ix) + 0.5) * m.spacing_[0];
      bool interior = ix >= 1 && ix + 2 <= mx;
      if (box.dim == 2) {
        m.coords_[i * 2 + 1] = (static_cast<double>(iy) + 0.5) * m.spacing_[1];
        interior = interior && iy >= 1 && iy + 2 <= my;
      }
      m.interiorMask_[i] = interior ? 1 : 0;
      if (interior) m.interior_.push_back(i);
    }
  }
  return m;
}

double Mesh::distance(std::size_t i, std::size_t j) const {
  const auto d = static_cast<std::size_t>(box_.dim);
  double sum = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double diff = coords_[i * d + k] - coords_[j * d + k];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

std::size_t Mesh::reflect(std::size_t i, int axis) const {
  const std::size_t mx = shape_[0];
  std::size_t ix = i % mx;
  std::size_t iy = i / mx;
  if (axis == 0)
    ix = mx - 1 - ix;
  else
    iy = shape_[1] - 1 - iy;
  return iy * mx + ix;
}

std::vector<double> Mesh::restrictInterior(std::span<const double> full) const {
  std::vector<double> x(interior_.size());
  for (std::size_t k = 0; k < interior_.size(); ++k) x[k] = full[interior_[k]];
  return x;
}

GridFunction Mesh::injectInterior(std::span<const double> x) const {
  GridFunction u(nNodes_);
  for (std::size_t k = 0; k < interior_.size(); ++k) u.values[interior_[k]] = x[k];
  return u;
}

KernelTable KernelTable::build(const Mesh& mesh, double s, const ExponentField& field) {
  if (!(s > 0.0 && s < 1.0))
    throw InvalidOrder("fractional order s must lie in (0,1), got " + std::to_string(s));

  KernelTable t;
  t.n_ = mesh.size();
  t.s_ = s;
  t.k_.assign(t.n_ * t.n_, 0.0);
  kernels::assemble_kernel(mesh, s, field, t.k_);
  return t;
}

}  // namespace fpxl
