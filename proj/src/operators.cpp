#include "fpxl/operators.hpp"

#include <cmath>
#include <string>

#include "descent.hpp"
#include "fpxl/errors.hpp"
#include "fpxl/kernels.hpp"

namespace fpxl {

ProblemData ProblemData::make(const Box& box, double h, double s, const TwoPointFn& pExpr,
                              const OnePointFn& rExpr, double lambda) {
  Mesh mesh = Mesh::build(box, h);
  ExponentField field = ExponentField::build(pExpr, rExpr, mesh);
  KernelTable kernel = KernelTable::build(mesh, s, field);
  return ProblemData{std::move(mesh), std::move(field), std::move(kernel), lambda};
}

DualVector apply_L(const GridFunction& u, const ProblemData& data) {
  DualVector out(u.size());
  kernels::nonlocal_apply(data.kernel.table(), data.field, u.span(), out.values);
  return out;
}

DualVector apply_S(const GridFunction& u, const ProblemData& data) {
  DualVector out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i] = data.mesh.weight(i) * (signed_power(u[i], data.field.q(i)) -
                                    data.lambda * signed_power(u[i], data.field.r(i)));
  }
  return out;
}

double energy(const GridFunction& u, const ProblemData& data) {
  double e = kernels::pair_energy(data.kernel.table(), data.field, u.span());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0) continue;
    const double a = std::abs(u[i]);
    const double q = data.field.q(i);
    const double r = data.field.r(i);
    e += data.mesh.weight(i) * (std::pow(a, q) / q - data.lambda * std::pow(a, r) / r);
  }
  return e;
}

DualVector energy_gradient(const GridFunction& u, const ProblemData& data) {
  DualVector g = apply_L(u, data);
  const DualVector s = apply_S(u, data);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += s[i];
  return g;
}

GridFunction apply_T(const DualVector& v, const ProblemData& data, double tol, int maxIter) {
  const Mesh& mesh = data.mesh;
  const std::vector<double> y = mesh.restrictInterior(v.span());

  bool zero = true;
  for (double yi : y) zero = zero && yi == 0.0;
  if (zero) return GridFunction(mesh.size());  // L(0) = 0 and L is injective here

  // Minimize J(x) = sum K |u_i-u_j|^p / p - <y, x> over interior values x;
  // the gradient of J is L(u) - y restricted to the interior, so the
  // stationarity residual is exactly the inversion residual.
  detail::DescentProblem prob;
  prob.value = [&](std::span<const double> x) {
    const GridFunction u = mesh.injectInterior(x);
    double J = kernels::pair_energy(data.kernel.table(), data.field, u.span());
    for (std::size_t k = 0; k < x.size(); ++k) J -= y[k] * x[k];
    return J;
  };
  prob.gradient = [&](std::span<const double> x, std::span<double> g) {
    const GridFunction u = mesh.injectInterior(x);
    DualVector lu(u.size());
    kernels::nonlocal_apply(data.kernel.table(), data.field, u.span(), lu.values);
    const auto interior = mesh.interiorNodes();
    for (std::size_t k = 0; k < interior.size(); ++k) g[k] = lu[interior[k]] - y[k];
  };

  detail::DescentOptions opt;
  opt.gradTol = tol;
  opt.maxIter = maxIter;
  auto outcome = detail::descend(prob, std::vector<double>(y.size(), 0.0), opt);
  if (!outcome.converged) {
    GridFunction best = mesh.injectInterior(outcome.x);
    throw NoConvergenceError("inverse operator did not reach residual " + std::to_string(tol) +
                                 " in " + std::to_string(maxIter) +
                                 " iterations (best " + std::to_string(outcome.gradSup) + ")",
                             std::move(best.values), outcome.gradSup, outcome.iterations);
  }
  return mesh.injectInterior(outcome.x);
}

double estimate_embedding(const ProblemData& data, std::span<const double> expo, int samples,
                          Rng& rng, const GridFunction* include) {
  const Mesh& mesh = data.mesh;
  double best = 0.0;
  auto ratio = [&](const GridFunction& w) {
    const double den = gagliardo_norm(w, data.kernel, data.field).luxemburg;
    if (den == 0.0) return 0.0;
    return lebesgue_norm(w, expo, mesh).luxemburg / den;
  };
  for (int s = 0; s < samples; ++s) {
    GridFunction w(mesh.size());
    for (std::size_t i : mesh.interiorNodes()) w[i] = rng.uniform(-1.0, 1.0);
    best = std::max(best, ratio(w));
  }
  if (include != nullptr) best = std::max(best, ratio(*include));
  return best;
}

std::vector<double> alpha_exponent(const ProblemData& data) {
  const ConjugateExponent qPrime = conjugate(data.field);
  std::vector<double> alpha(data.size());
  for (std::size_t i = 0; i < alpha.size(); ++i)
    alpha[i] = (data.field.r(i) - 1.0) * qPrime.pPrime[i];
  return alpha;
}

namespace {
double rel_slack(double lhs, double rhs) {
  return (rhs - lhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}
}  // namespace

SBoundVerdict check_s_bounded(const GridFunction& u, const ProblemData& data, double embedQ,
                              double embedAlpha) {
  const Mesh& mesh = data.mesh;
  const ExponentField& field = data.field;
  const ConjugateExponent qPrime = conjugate(field);
  const std::size_t n = u.size();

  GridFunction phi(n), psi(n);
  for (std::size_t i = 0; i < n; ++i) {
    phi[i] = signed_power(u[i], field.q(i));
    psi[i] = -data.lambda * signed_power(u[i], field.r(i));
  }

  SBoundVerdict v;
  const double rhoQ = modular_lebesgue(u, field.qValues(), mesh);
  const double rhoPhi = modular_lebesgue(phi, qPrime.pPrime, mesh);
  v.phiIdentity = std::abs(rhoPhi - rhoQ) / std::max(1.0, std::abs(rhoQ));

  const double normPhi = lebesgue_norm(phi, qPrime.pPrime, mesh).luxemburg;
  v.phiChain = rel_slack(normPhi, rhoQ + 1.0);

  const double w0 = gagliardo_norm(u, data.kernel, field).luxemburg;
  const double cq = std::max(embedQ, 1e-300);
  v.phiEmbedding = rel_slack(normPhi, std::pow(cq * w0, field.qMinus()) +
                                          std::pow(cq * w0, field.qPlus()) + 1.0);

  const double rhoPsi = modular_lebesgue(psi, qPrime.pPrime, mesh);
  const double normPsi = lebesgue_norm(psi, qPrime.pPrime, mesh).luxemburg;
  v.psiChain = rel_slack(normPsi, rhoPsi + 1.0);

  const std::vector<double> alpha = alpha_exponent(data);
  double aLo = alpha[0], aHi = alpha[0];
  for (double a : alpha) {
    aLo = std::min(aLo, a);
    aHi = std::max(aHi, a);
  }
  double qpLo = qPrime.pPrime[0], qpHi = qPrime.pPrime[0];
  for (double qp : qPrime.pPrime) {
    qpLo = std::min(qpLo, qp);
    qpHi = std::max(qpHi, qp);
  }
  const double absL = std::abs(data.lambda);
  const double lambdaFactor =
      absL == 0.0 ? 0.0 : std::max(std::pow(absL, qpLo), std::pow(absL, qpHi));
  const double ca = std::max(embedAlpha, 1e-300);
  v.psiEmbedding = rel_slack(
      normPsi, lambdaFactor * (std::pow(ca * w0, aLo) + std::pow(ca * w0, aHi)) + 1.0);

  v.worst = std::min({v.phiChain, v.phiEmbedding, v.psiChain, v.psiEmbedding});
  v.pass = v.worst >= -1e-12 && v.phiIdentity <= 1e-12;
  return v;
}

}  // namespace fpxl
