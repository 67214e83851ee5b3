#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fpxl/mesh.hpp"

namespace fpxl {

using TwoPointFn = std::function<double(std::span<const double>, std::span<const double>)>;
using OnePointFn = std::function<double(std::span<const double>)>;

/// The variable exponents of the problem, sampled on a mesh:
///   p(i,j)  symmetric two-point exponent (symmetrized by averaging),
///   q(i) = p(i,i)  its trace,
///   r(i)  the source exponent,
/// together with their cached extrema. Validated on construction:
///   1 < pMinus <= p(i,j) <= pPlus < inf,
///   1 < rMinus <= r(i) <= rPlus < pMinus.
/// Immutable afterwards; safe to share across threads.
class ExponentField {
 public:
  static ExponentField build(const TwoPointFn& pExpr, const OnePointFn& rExpr, const Mesh& mesh);

  std::size_t size() const { return n_; }

  double p(std::size_t i, std::size_t j) const { return p_[i * n_ + j]; }
  double q(std::size_t i) const { return q_[i]; }
  double r(std::size_t i) const { return r_[i]; }

  std::span<const double> pTable() const { return p_; }
  std::span<const double> pRow(std::size_t i) const { return {p_.data() + i * n_, n_}; }
  std::span<const double> qValues() const { return q_; }
  std::span<const double> rValues() const { return r_; }

  double pMinus() const { return pMinus_; }
  double pPlus() const { return pPlus_; }
  double qMinus() const { return qMinus_; }
  double qPlus() const { return qPlus_; }
  double rMinus() const { return rMinus_; }
  double rPlus() const { return rPlus_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> p_;  // n x n, symmetric
  std::vector<double> q_;  // diagonal trace
  std::vector<double> r_;
  double pMinus_ = 0, pPlus_ = 0, qMinus_ = 0, qPlus_ = 0, rMinus_ = 0, rPlus_ = 0;
};

/// Pointwise conjugate p'(i) = q(i) / (q(i) - 1), so 1/q + 1/p' = 1.
struct ConjugateExponent {
  std::vector<double> pPrime;
};

ConjugateExponent conjugate(const ExponentField& field);

}  // namespace fpxl
