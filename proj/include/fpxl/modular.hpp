#pragma once

#include <functional>
#include <span>

#include "fpxl/exponents.hpp"
#include "fpxl/mesh.hpp"
#include "fpxl/types.hpp"

namespace fpxl {

/// Result of a Luxemburg gauge computation.
/// modular   = rho(u) at scale 1,
/// luxemburg = inf{ lambda > 0 : rho(u/lambda) <= 1 },
/// bracketLow/bracketHigh = final bisection bracket, iterations = evaluations
/// spent after bracketing. For nonzero u, rho(u/luxemburg) is within tol of 1.
struct NormReport {
  double modular = 0.0;
  double luxemburg = 0.0;
  double bracketLow = 0.0;
  double bracketHigh = 0.0;
  int iterations = 0;
};

inline constexpr double kDefaultNormTol = 1e-10;

/// rho_{p(.)}(scale * u) = sum_i w_i |scale u_i|^{expo_i}.
double modular_lebesgue(const GridFunction& u, std::span<const double> expo, const Mesh& mesh,
                        double scale = 1.0);

/// rho_{p(.,.)}(scale * u) = sum_{i != j} K(i,j) |scale (u_i - u_j)|^{p(i,j)};
/// both orderings of each pair are counted, matching the double integral.
double modular_gagliardo(const GridFunction& u, const KernelTable& kernel,
                         const ExponentField& field, double scale = 1.0);

/// Luxemburg gauge of an abstract modular. `modularAt(lambda)` must evaluate
/// rho(u/lambda) and be strictly decreasing in lambda whenever it is nonzero.
/// Bisection starts from lambda = 1 and expands the bracket by doubling or
/// halving; more than 1000 expansions throws BracketFailure (non-finite
/// modular). Zero modular short-circuits to a zero report.
NormReport luxemburg(const std::function<double(double)>& modularAt, double tol = kDefaultNormTol);

/// Luxemburg norm on the variable-exponent Lebesgue space.
NormReport lebesgue_norm(const GridFunction& u, std::span<const double> expo, const Mesh& mesh,
                         double tol = kDefaultNormTol);

/// Gagliardo seminorm with variable exponent (the W0 norm).
NormReport gagliardo_norm(const GridFunction& u, const KernelTable& kernel,
                          const ExponentField& field, double tol = kDefaultNormTol);

/// Verdict of the modular/norm comparison identities for one sample.
/// Slacks are relative: slack(a <= b) = (b - a) / max(1, |a|, |b|); a pass is
/// slack >= -1e-12. signEquiv encodes the sign equivalence
///   ||u|| < 1 (= 1; > 1)  <=>  rho(u) < 1 (= 1; > 1)
/// as the margin by which the two sides agree, negative on disagreement.
struct SandwichVerdict {
  bool pass = false;
  double norm = 0.0;
  double modular = 0.0;
  double unitModular = 0.0;  // rho(u / ||u||), 1 by definition for u != 0
  double signEquiv = 0.0;
  double sandwichLow = 0.0;   // ||u||^{p_lo} <= rho  (exponent depends on side of 1)
  double sandwichHigh = 0.0;  // rho <= ||u||^{p_hi}
  double e1 = 0.0;            // ||u|| <= rho + 1
  double ineq1 = 0.0;         // rho <= ||u||^{p-} + ||u||^{p+}
  double worst = 0.0;
};

/// Check the Lebesgue-modular comparison identities on one grid function:
/// sign equivalence, both sandwich implications, and the derived bounds
/// e1 and ineq1. `tol` drives the Luxemburg gauge.
SandwichVerdict check_prop1(const GridFunction& u, std::span<const double> expo, const Mesh& mesh,
                            double tol = 1e-13);

/// Same identities for the pair modular and the Gagliardo norm.
SandwichVerdict check_prop2(const GridFunction& u, const KernelTable& kernel,
                            const ExponentField& field, double tol = 1e-13);

}  // namespace fpxl
