#pragma once

#include <cstddef>

#include "fpxl/exponents.hpp"
#include "fpxl/mesh.hpp"
#include "fpxl/modular.hpp"
#include "fpxl/rng.hpp"
#include "fpxl/types.hpp"

namespace fpxl {

/// Everything a solve needs: discretization, exponents, kernel, and the
/// spectral parameter lambda. Components are built together so node counts
/// always agree.
struct ProblemData {
  Mesh mesh;
  ExponentField field;
  KernelTable kernel;
  double lambda = 0.0;

  static ProblemData make(const Box& box, double h, double s, const TwoPointFn& pExpr,
                          const OnePointFn& rExpr, double lambda);

  std::size_t size() const { return mesh.size(); }
};

/// Nonlocal monotone operator:
///   (Lu)_i = 2 sum_{j != i} K(i,j) |u_i - u_j|^{p(i,j)-2} (u_i - u_j).
/// The factor 2 counts both orderings of each pair, so <Lu, u> equals the
/// pair modular exactly.
DualVector apply_L(const GridFunction& u, const ProblemData& data);

/// Lower-order terms: (Su)_i = w_i (|u_i|^{q_i-2} u_i - lambda |u_i|^{r_i-2} u_i).
DualVector apply_S(const GridFunction& u, const ProblemData& data);

/// E(u) = sum_{i != j} K |u_i-u_j|^p / p + sum_i w_i (|u_i|^q / q - lambda |u_i|^r / r).
/// Its gradient is apply_L(u) + apply_S(u).
double energy(const GridFunction& u, const ProblemData& data);

DualVector energy_gradient(const GridFunction& u, const ProblemData& data);

/// Inverse of L on the Dirichlet subspace (collar pinned to zero): returns
/// the admissible u minimizing the strictly convex
///   J(u) = sum_{i != j} K |u_i - u_j|^{p(i,j)} / p(i,j) - <v, u>,
/// i.e. (Lu)_i = v_i on every interior node, |.|_inf residual <= tol.
/// Throws NoConvergenceError (best iterate attached) past maxIter.
GridFunction apply_T(const DualVector& v, const ProblemData& data, double tol,
                     int maxIter = 50000);

/// Largest observed ratio ||w||_{expo} / ||w||_{W0} over `samples` random
/// admissible states (plus `include`, when given). A sampled stand-in for the
/// discrete embedding constant of W0 into the weighted Lebesgue space.
double estimate_embedding(const ProblemData& data, std::span<const double> expo, int samples,
                          Rng& rng, const GridFunction* include = nullptr);

/// Boundedness of the lower-order operator's image, in the form used to show
/// S maps bounded sets to bounded sets. phiIdentity checks the exact discrete
/// identity rho_{q'}(phi u) = rho_q(u) for phi u = |u|^{q-2} u; the chain
/// slacks are relative, >= 0 on pass.
struct SBoundVerdict {
  bool pass = false;
  double phiIdentity = 0.0;   // relative error of rho_{q'}(phi u) vs rho_q(u)
  double phiChain = 0.0;      // ||phi u||_{q'} <= rho_q(u) + 1
  double phiEmbedding = 0.0;  // ||phi u||_{q'} <= Cq^{q-}+... polynomial in ||u||_{W0}
  double psiChain = 0.0;      // ||psi u||_{q'} <= rho_{q'}(psi u) + 1
  double psiEmbedding = 0.0;  // ||psi u||_{q'} <= polynomial in ||u||_{W0} via alpha
  double worst = 0.0;
};

SBoundVerdict check_s_bounded(const GridFunction& u, const ProblemData& data, double embedQ,
                              double embedAlpha);

/// alpha(i) = (r_i - 1) q'(i), the exponent through which the psi-part of S
/// is controlled; alpha <= q holds whenever r <= q.
std::vector<double> alpha_exponent(const ProblemData& data);

}  // namespace fpxl
