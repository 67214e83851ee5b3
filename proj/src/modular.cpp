#include "fpxl/modular.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fpxl/errors.hpp"
#include "fpxl/kernels.hpp"

namespace fpxl {

double modular_lebesgue(const GridFunction& u, std::span<const double> expo, const Mesh& mesh,
                        double scale) {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double v = scale * u[i];
    if (v == 0.0) continue;
    acc += mesh.weight(i) * std::pow(std::abs(v), expo[i]);
  }
  return acc;
}

double modular_gagliardo(const GridFunction& u, const KernelTable& kernel,
                         const ExponentField& field, double scale) {
  return kernels::gagliardo_sum(kernel.table(), field, u.span(), scale);
}

NormReport luxemburg(const std::function<double(double)>& modularAt, double tol) {
  NormReport rep;
  rep.modular = modularAt(1.0);
  if (rep.modular == 0.0) return rep;  // inf over all lambda > 0 is 0

  // Bracket by doubling/halving from lambda = 1. The modular is strictly
  // decreasing in lambda while nonzero, so a sign change of (rho - 1) gives
  // a bracket.
  double lo = 1.0, hi = 1.0;
  double m = rep.modular;
  if (m > 1.0 || !std::isfinite(m)) {
    int k = 0;
    while (!(m <= 1.0)) {
      if (++k > 1000)
        throw BracketFailure("luxemburg bracket expansion exceeded 1000 doublings (modular stays "
                             "above 1; non-finite modular?)",
                             hi, m);
      lo = hi;
      hi *= 2.0;
      m = modularAt(hi);
    }
  } else {
    while (true) {
      const double next = lo * 0.5;
      if (next < 1e-300) {
        // numerically zero function: the infimum is below representable scale
        rep.luxemburg = 0.0;
        rep.bracketLow = 0.0;
        rep.bracketHigh = next;
        return rep;
      }
      const double mNext = modularAt(next);
      if (mNext > 1.0) {
        hi = lo;
        lo = next;
        break;
      }
      lo = next;
    }
  }

  // Bisect until the bracket is narrow and the modular at the midpoint is
  // within tol of 1 (both are promised to callers). The resolution floor
  // guards tolerances below evaluation noise.
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 500; ++it) {
    if (mid == lo || mid == hi) break;  // double resolution reached
    m = modularAt(mid);
    ++rep.iterations;
    if (m > 1.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= tol * std::max(1.0, mid) && std::abs(m - 1.0) <= tol) break;
    mid = 0.5 * (lo + hi);
  }
  rep.luxemburg = mid;
  rep.bracketLow = lo;
  rep.bracketHigh = hi;
  return rep;
}

NormReport lebesgue_norm(const GridFunction& u, std::span<const double> expo, const Mesh& mesh,
                         double tol) {
  return luxemburg(
      [&](double lambda) { return modular_lebesgue(u, expo, mesh, 1.0 / lambda); }, tol);
}

NormReport gagliardo_norm(const GridFunction& u, const KernelTable& kernel,
                          const ExponentField& field, double tol) {
  return luxemburg(
      [&](double lambda) { return modular_gagliardo(u, kernel, field, 1.0 / lambda); }, tol);
}

namespace {

double rel_slack(double lhs, double rhs) {
  return (rhs - lhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

SandwichVerdict check_impl(double norm, double rho, double unitModular, double pLo, double pHi,
                           double tol) {
  SandwichVerdict v;
  v.norm = norm;
  v.modular = rho;
  v.unitModular = unitModular;

  // sign equivalence around the unit ball boundary
  const double band = std::max(8.0 * tol, 1e-12);
  if (std::abs(norm - 1.0) <= band) {
    v.signEquiv = (pHi + 1.0) * band - std::abs(rho - 1.0);
  } else if (norm > 1.0) {
    v.signEquiv = rel_slack(1.0, rho);
  } else {
    v.signEquiv = rel_slack(rho, 1.0);
  }

  // sandwich, branch picked by the side of 1
  if (norm >= 1.0) {
    v.sandwichLow = rel_slack(std::pow(norm, pLo), rho);
    v.sandwichHigh = rel_slack(rho, std::pow(norm, pHi));
  } else {
    v.sandwichLow = rel_slack(std::pow(norm, pHi), rho);
    v.sandwichHigh = rel_slack(rho, std::pow(norm, pLo));
  }

  v.e1 = rel_slack(norm, rho + 1.0);
  v.ineq1 = rel_slack(rho, std::pow(norm, pLo) + std::pow(norm, pHi));

  v.worst = std::min({v.signEquiv, v.sandwichLow, v.sandwichHigh, v.e1, v.ineq1});
  const bool unitOk = std::abs(unitModular - 1.0) <= std::max(2.0 * tol, 1e-12);
  v.pass = v.worst >= -1e-12 && unitOk;
  return v;
}

}  // namespace

SandwichVerdict check_prop1(const GridFunction& u, std::span<const double> expo, const Mesh& mesh,
                            double tol) {
  double pLo = expo[0], pHi = expo[0];
  for (double e : expo) {
    pLo = std::min(pLo, e);
    pHi = std::max(pHi, e);
  }
  const double rho = modular_lebesgue(u, expo, mesh);
  if (rho == 0.0) return check_impl(0.0, 0.0, 1.0, pLo, pHi, tol);
  const NormReport rep = lebesgue_norm(u, expo, mesh, tol);
  const double unit = modular_lebesgue(u, expo, mesh, 1.0 / rep.luxemburg);
  return check_impl(rep.luxemburg, rho, unit, pLo, pHi, tol);
}

SandwichVerdict check_prop2(const GridFunction& u, const KernelTable& kernel,
                            const ExponentField& field, double tol) {
  const double rho = modular_gagliardo(u, kernel, field);
  if (rho == 0.0) return check_impl(0.0, 0.0, 1.0, field.pMinus(), field.pPlus(), tol);
  const NormReport rep = gagliardo_norm(u, kernel, field, tol);
  const double unit = modular_gagliardo(u, kernel, field, 1.0 / rep.luxemburg);
  return check_impl(rep.luxemburg, rho, unit, field.pMinus(), field.pPlus(), tol);
}

}  // namespace fpxl
