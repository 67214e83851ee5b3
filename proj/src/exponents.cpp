#include "fpxl/exponents.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fpxl/errors.hpp"

namespace fpxl {

namespace {

std::string pair_text(const Mesh& mesh, std::size_t i, std::size_t j) {
  auto xi = mesh.node(i);
  std::string s = "node " + std::to_string(i) + " (";
  for (std::size_t k = 0; k < xi.size(); ++k) s += (k ? "," : "") + std::to_string(xi[k]);
  s += ")";
  if (j != i) {
    auto xj = mesh.node(j);
    s += " / node " + std::to_string(j) + " (";
    for (std::size_t k = 0; k < xj.size(); ++k) s += (k ? "," : "") + std::to_string(xj[k]);
    s += ")";
  }
  return s;
}

}  // namespace

ExponentField ExponentField::build(const TwoPointFn& pExpr, const OnePointFn& rExpr,
                                   const Mesh& mesh) {
  const std::size_t n = mesh.size();
  ExponentField f;
  f.n_ = n;
  f.p_.resize(n * n);
  f.q_.resize(n);
  f.r_.resize(n);

  // Symmetrize by averaging before any validation; averaging preserves the
  // admissible bounds, so non-symmetric input is repaired, not rejected.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double pij = pExpr(mesh.node(i), mesh.node(j));
      const double pji = pExpr(mesh.node(j), mesh.node(i));
      const double v = 0.5 * (pij + pji);
      f.p_[i * n + j] = v;
      f.p_[j * n + i] = v;
    }
    f.q_[i] = f.p_[i * n + i];
    f.r_[i] = rExpr(mesh.node(i));
  }

  f.pMinus_ = std::numeric_limits<double>::infinity();
  f.pPlus_ = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = f.p_[i * n + j];
      if (!std::isfinite(v))
        throw ExponentOutOfRange("two-point exponent is not finite at " + pair_text(mesh, i, j), i,
                                 j, v);
      f.pMinus_ = std::min(f.pMinus_, v);
      f.pPlus_ = std::max(f.pPlus_, v);
    }
  }
  if (!(f.pMinus_ > 1.0)) {
    // report an offending pair, scanned again for the location
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (f.p_[i * n + j] == f.pMinus_)
          throw ExponentOutOfRange(
              "two-point exponent must satisfy inf p > 1; p = " + std::to_string(f.pMinus_) +
                  " at " + pair_text(mesh, i, j),
              i, j, f.pMinus_);
  }

  f.qMinus_ = std::numeric_limits<double>::infinity();
  f.qPlus_ = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    f.qMinus_ = std::min(f.qMinus_, f.q_[i]);
    f.qPlus_ = std::max(f.qPlus_, f.q_[i]);
  }

  f.rMinus_ = std::numeric_limits<double>::infinity();
  f.rPlus_ = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = f.r_[i];
    if (!std::isfinite(v))
      throw ExponentOutOfRange("source exponent is not finite at " + pair_text(mesh, i, i), i, i,
                               v);
    f.rMinus_ = std::min(f.rMinus_, v);
    f.rPlus_ = std::max(f.rPlus_, v);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(f.r_[i] > 1.0))
      throw ExponentOutOfRange("source exponent must satisfy inf r > 1; r = " +
                                   std::to_string(f.r_[i]) + " at " + pair_text(mesh, i, i),
                               i, i, f.r_[i]);
    if (!(f.r_[i] < f.pMinus_))
      throw ExponentOutOfRange(
          "exponent bound violated: requires 1 < inf r <= sup r < inf p over the mesh; r = " +
              std::to_string(f.r_[i]) + " at " + pair_text(mesh, i, i) +
              " but inf p = " + std::to_string(f.pMinus_),
          i, i, f.r_[i]);
  }
  return f;
}

ConjugateExponent conjugate(const ExponentField& field) {
  ConjugateExponent c;
  c.pPrime.resize(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double q = field.q(i);
    c.pPrime[i] = q / (q - 1.0);
  }
  return c;
}

}  // namespace fpxl
