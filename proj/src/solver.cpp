#include "fpxl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "descent.hpp"
#include "fpxl/errors.hpp"

namespace fpxl {

Strategy parse_strategy(const std::string& name) {
  if (name == "minimize") return Strategy::Minimize;
  if (name == "picard") return Strategy::Picard;
  if (name == "continuation") return Strategy::Continuation;
  throw ConfigError("unknown strategy '" + name + "' (minimize | picard | continuation)");
}

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Minimize: return "minimize";
    case Strategy::Picard: return "picard";
    case Strategy::Continuation: return "continuation";
  }
  return "?";
}

std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::NoConvergence: return "no_convergence";
    case SolveStatus::Diverged: return "diverged";
    case SolveStatus::ContinuationStall: return "continuation_stall";
  }
  return "?";
}

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw ConfigError("solver tol must be positive");
  if (maxIter < 1) throw ConfigError("solver maxIter must be >= 1");
  if (!(damping > 0.0 && damping <= 1.0)) throw ConfigError("damping must lie in (0,1]");
  if (continuationSteps < 2) throw ConfigError("continuationSteps must be >= 2");
}

GridFunction seed_function(const std::string& name, const Mesh& mesh, Rng& rng) {
  GridFunction u(mesh.size());
  if (name == "zero") return u;
  if (name == "constant") {
    for (std::size_t i : mesh.interiorNodes()) u[i] = 1.0;
    return u;
  }
  if (name == "random") {
    for (std::size_t i : mesh.interiorNodes()) u[i] = rng.uniform(-1.0, 1.0);
    return u;
  }
  if (name == "bump") {
    // distance-to-boundary profile, sup normalized to 1
    double peak = 0.0;
    for (std::size_t i : mesh.interiorNodes()) {
      auto x = mesh.node(i);
      double b = 1.0;
      for (int k = 0; k < mesh.dim(); ++k) {
        const double L = mesh.box().extents[static_cast<std::size_t>(k)];
        b *= std::min(x[static_cast<std::size_t>(k)], L - x[static_cast<std::size_t>(k)]);
      }
      u[i] = b;
      peak = std::max(peak, b);
    }
    if (peak > 0.0)
      for (double& v : u.values) v /= peak;
    return u;
  }
  throw ConfigError("unknown seed function '" + name + "' (zero | constant | random | bump)");
}

namespace {

double weak_residual(const GridFunction& u, const ProblemData& data) {
  const DualVector g = energy_gradient(u, data);
  double res = 0.0;
  for (std::size_t i : data.mesh.interiorNodes()) res = std::max(res, std::abs(g[i]));
  return res;
}

void require_unknowns(const ProblemData& data) {
  if (data.mesh.interiorCount() == 0)
    throw EmptyMesh("mesh has no interior unknowns; refine h so every axis has at least 3 cells");
}

/// Fill the measured fields of the report from the returned u. The residual
/// is always recomputed here; the iteration's own estimate is discarded.
void finalize(SolveReport& rep, const ProblemData& data, const SolverConfig& cfg) {
  rep.tol = cfg.tol;
  rep.interiorNodes = data.mesh.interiorCount();
  rep.collarNodes = data.mesh.size() - data.mesh.interiorCount();
  rep.residual = weak_residual(rep.u, data);
  rep.energy = energy(rep.u, data);
  constexpr double normTol = 1e-12;
  rep.normW0 = gagliardo_norm(rep.u, data.kernel, data.field, normTol).luxemburg;
  rep.normQ = lebesgue_norm(rep.u, data.field.qValues(), data.mesh, normTol).luxemburg;
  rep.normR = lebesgue_norm(rep.u, data.field.rValues(), data.mesh, normTol).luxemburg;
  rep.nontrivial = sup_norm(rep.u.span()) > 100.0 * cfg.tol;
  if (rep.status == SolveStatus::Converged && rep.residual > cfg.tol)
    rep.status = SolveStatus::NoConvergence;
}

// Interior restrictions of S and T (the solve state lives on the unknowns).
std::vector<double> s_interior(const ProblemData& data, const GridFunction& u) {
  const DualVector s = apply_S(u, data);
  return data.mesh.restrictInterior(s.span());
}

}  // namespace

SolveReport solve_minimize(const ProblemData& data, const SolverConfig& cfg) {
  cfg.validate();
  require_unknowns(data);
  SolveReport rep;

  Rng rng(cfg.seed);
  const GridFunction seed = seed_function(cfg.seedFunction, data.mesh, rng);

  detail::DescentProblem prob;
  prob.value = [&](std::span<const double> x) {
    return energy(data.mesh.injectInterior(x), data);
  };
  prob.gradient = [&](std::span<const double> x, std::span<double> g) {
    const DualVector grad = energy_gradient(data.mesh.injectInterior(x), data);
    const auto interior = data.mesh.interiorNodes();
    for (std::size_t k = 0; k < interior.size(); ++k) g[k] = grad[interior[k]];
  };

  detail::DescentOptions opt;
  opt.gradTol = 0.9 * cfg.tol;
  opt.maxIter = cfg.maxIter;
  opt.onIterate = [&](int, double gradSup, double value) {
    rep.trajectory.push_back({gradSup, value});
  };

  auto outcome = detail::descend(prob, data.mesh.restrictInterior(seed.span()), opt);
  rep.u = data.mesh.injectInterior(outcome.x);
  rep.iterations = outcome.iterations;
  rep.status = outcome.converged ? SolveStatus::Converged : SolveStatus::NoConvergence;
  finalize(rep, data, cfg);
  return rep;
}

SolveReport solve_picard(const ProblemData& data, const SolverConfig& cfg) {
  cfg.validate();
  require_unknowns(data);
  SolveReport rep;

  Rng rng(cfg.seed);
  const GridFunction seed = seed_function(cfg.seedFunction, data.mesh, rng);
  const DualVector lSeed = apply_L(seed, data);
  std::vector<double> v = data.mesh.restrictInterior(lSeed.span());

  const double innerTol = cfg.tol * cfg.innerTolFactor;
  const double guard = 1e6 * std::max(1.0, sup_norm(v));
  GridFunction u(data.mesh.size());

  for (int it = 0; it < cfg.maxIter; ++it) {
    try {
      u = apply_T(DualVector(data.mesh.injectInterior(v).values), data, innerTol,
                  cfg.innerMaxIter);
    } catch (const NoConvergenceError& e) {
      rep.u = GridFunction(e.best_iterate);
      rep.iterations = it;
      rep.status = SolveStatus::NoConvergence;
      finalize(rep, data, cfg);
      return rep;
    }
    const std::vector<double> su = s_interior(data, u);

    double fpRes = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) fpRes = std::max(fpRes, std::abs(v[k] + su[k]));
    rep.trajectory.push_back({fpRes, energy(u, data)});
    rep.iterations = it;

    if (fpRes + innerTol <= 0.95 * cfg.tol) {
      rep.u = u;
      rep.status = SolveStatus::Converged;
      finalize(rep, data, cfg);
      return rep;
    }
    for (std::size_t k = 0; k < v.size(); ++k)
      v[k] = (1.0 - cfg.damping) * v[k] - cfg.damping * su[k];

    if (sup_norm(v) > guard) {
      rep.u = u;
      rep.status = SolveStatus::Diverged;
      finalize(rep, data, cfg);
      return rep;
    }
  }
  rep.u = u;
  rep.status = SolveStatus::NoConvergence;
  finalize(rep, data, cfg);
  return rep;
}

namespace {

/// Damped fixed-point solve of H(t,v) = v + t S(T(v)) = 0 from a warm start.
/// Returns true on success; v holds the root (or the last iterate).
bool continuation_inner(const ProblemData& data, const SolverConfig& cfg, double t,
                        std::vector<double>& v, double& lastRes) {
  const double innerTol = cfg.tol * cfg.innerTolFactor;
  const double guard = 1e6 * std::max(1.0, sup_norm(v));
  for (int it = 0; it < cfg.maxIter; ++it) {
    GridFunction u;
    try {
      u = apply_T(DualVector(data.mesh.injectInterior(v).values), data, innerTol,
                  cfg.innerMaxIter);
    } catch (const NoConvergenceError&) {
      return false;
    }
    const std::vector<double> su = s_interior(data, u);
    double res = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k)
      res = std::max(res, std::abs(v[k] + t * su[k]));
    lastRes = res;
    if (res + innerTol <= 0.95 * cfg.tol) return true;
    for (std::size_t k = 0; k < v.size(); ++k)
      v[k] = (1.0 - cfg.damping) * v[k] - cfg.damping * t * su[k];
    if (sup_norm(v) > guard) return false;
  }
  return false;
}

}  // namespace

SolveReport solve_continuation(const ProblemData& data, const SolverConfig& cfg) {
  cfg.validate();
  require_unknowns(data);
  SolveReport rep;

  Rng rng(cfg.seed);
  const GridFunction seed = seed_function(cfg.seedFunction, data.mesh, rng);
  const DualVector lSeed = apply_L(seed, data);
  const std::vector<double> vSeed = data.mesh.restrictInterior(lSeed.span());

  const int m = cfg.continuationSteps;
  std::vector<double> v(vSeed.size(), 0.0);  // t = 0 root, exactly
  rep.trajectory.push_back({0.0, 0.0});

  for (int k = 1; k < m; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(m - 1);
    // v = 0 solves H(t, .) = 0 for every t; escape the trivial branch once
    // by starting the first positive step from the seed's dual image.
    if (k == 1) v = vSeed;
    double res = 0.0;
    if (!continuation_inner(data, cfg, t, v, res)) {
      GridFunction u;
      try {
        u = apply_T(DualVector(data.mesh.injectInterior(v).values), data,
                    cfg.tol * cfg.innerTolFactor, cfg.innerMaxIter);
      } catch (const NoConvergenceError& e) {
        u = GridFunction(e.best_iterate);
      }
      rep.u = u;
      rep.iterations = k;
      rep.status = SolveStatus::ContinuationStall;
      rep.stallT = t;
      finalize(rep, data, cfg);
      return rep;
    }
    GridFunction ut = apply_T(DualVector(data.mesh.injectInterior(v).values), data,
                              cfg.tol * cfg.innerTolFactor, cfg.innerMaxIter);
    rep.trajectory.push_back({res, energy(ut, data)});
    if (k == m - 1) rep.u = std::move(ut);
  }
  rep.iterations = m - 1;
  rep.status = SolveStatus::Converged;
  finalize(rep, data, cfg);
  return rep;
}

SolveReport solve(const ProblemData& data, const SolverConfig& cfg) {
  switch (cfg.strategy) {
    case Strategy::Minimize: return solve_minimize(data, cfg);
    case Strategy::Picard: return solve_picard(data, cfg);
    case Strategy::Continuation: return solve_continuation(data, cfg);
  }
  throw ConfigError("unreachable strategy");
}

AprioriRecord verify_apriori(const SolveReport& report, const ProblemData& data, Rng& rng,
                             double residualGate) {
  AprioriRecord rec;
  rec.residualGate = residualGate > 0.0 ? residualGate : 10.0 * std::max(report.tol, 1e-14);

  const double res = weak_residual(report.u, data);
  if (res > rec.residualGate) {
    rec.branch = "refused";
    rec.holds = false;
    return rec;
  }

  constexpr double normTol = 1e-12;
  rec.normW0 = gagliardo_norm(report.u, data.kernel, data.field, normTol).luxemburg;
  const double pMinus = data.field.pMinus();
  rec.lhs = std::pow(rec.normW0, pMinus);
  rec.pairing = pairing(apply_L(report.u, data), report.u);

  if (rec.normW0 <= 1.0) {
    rec.branch = "trivial";
    rec.rhs = 1.0;
    rec.holds = rec.lhs <= rec.rhs + 1e-12;
    return rec;
  }

  rec.branch = "chain";
  rec.embedQ = estimate_embedding(data, data.field.qValues(), 64, rng, &report.u);
  rec.embedR = estimate_embedding(data, data.field.rValues(), 64, rng, &report.u);

  const double qPlus = data.field.qPlus();
  const double rPlus = data.field.rPlus();
  const double A = 2.0 * std::pow(std::max(rec.embedQ, 1.0), qPlus);
  const double B = 2.0 * std::abs(data.lambda) * std::pow(std::max(rec.embedR, 1.0), rPlus);
  rec.rhs = A * std::pow(rec.normW0, qPlus) + B * std::pow(rec.normW0, rPlus);
  rec.holds = rec.lhs <= rec.rhs * (1.0 + 1e-12);
  return rec;
}

std::vector<SweepRow> sweep_lambda(const ProblemData& base, std::span<const double> lambdas,
                                   const SolverConfig& cfg) {
  std::vector<SweepRow> rows(lambdas.size());
  const auto count = static_cast<long>(lambdas.size());
#pragma omp parallel for schedule(dynamic)
  for (long idx = 0; idx < count; ++idx) {
    const auto i = static_cast<std::size_t>(idx);
    ProblemData data = base;
    data.lambda = lambdas[i];
    SolverConfig local = cfg;
    local.seed = cfg.seed + 1000003ull * i;  // independent random seeds per run

    SweepRow row;
    row.lambda = lambdas[i];
    SolveReport rep = solve(data, local);
    row.status = rep.status;
    row.residual = rep.residual;
    row.energy = rep.energy;
    row.normW0 = rep.normW0;
    row.supNorm = sup_norm(rep.u.span());
    row.nontrivial = rep.nontrivial;
    if (rep.status == SolveStatus::Converged) {
      Rng rng(local.seed ^ 0x5bf03635ull);
      const AprioriRecord rec = verify_apriori(rep, data, rng);
      row.aprioriHolds = rec.holds;
      row.aprioriBranch = rec.branch;
    }
    rows[i] = std::move(row);
  }
  return rows;
}

}  // namespace fpxl
