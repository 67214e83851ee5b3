#include <doctest.h>

#include <cmath>

#include "fpxl/errors.hpp"
#include "fpxl/solver.hpp"
#include "test_support.hpp"

using namespace fpxl;
using namespace fpxl::testing;

namespace {

ProblemData fixed_instance(double lambda) {
  return make_1d_constant(16, 0.5, 2.0, 1.5, lambda);
}

ProblemData variable_instance(double lambda) {
  auto p = [](std::span<const double> x, std::span<const double> y) {
    return 2.0 + 0.2 * (x[0] + y[0]);
  };
  auto r = [](std::span<const double> x) { return 1.3 + 0.2 * std::abs(x[0] - 0.5); };
  return make_1d(16, 0.5, p, r, lambda);
}

SolverConfig base_config(Strategy strategy) {
  SolverConfig cfg;
  cfg.strategy = strategy;
  cfg.tol = 1e-9;
  cfg.maxIter = 40000;
  cfg.seedFunction = "constant";
  cfg.seed = 7;
  return cfg;
}

double sup_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("lambda = 0 yields the trivial solution from every seed") {
  ProblemData d = fixed_instance(0.0);
  for (const char* seed : {"zero", "constant", "random", "bump"}) {
    SolverConfig cfg = base_config(Strategy::Minimize);
    cfg.seedFunction = seed;
    const SolveReport rep = solve_minimize(d, cfg);
    CHECK(rep.status == SolveStatus::Converged);
    CHECK(rep.residual <= cfg.tol);
    CHECK(!rep.nontrivial);
    CHECK(sup_norm(rep.u.span()) <= 100.0 * cfg.tol);
  }
}

TEST_CASE("picard from the zero seed fixes v = 0 immediately") {
  ProblemData d = fixed_instance(0.0);
  SolverConfig cfg = base_config(Strategy::Picard);
  cfg.seedFunction = "zero";
  const SolveReport rep = solve_picard(d, cfg);
  CHECK(rep.status == SolveStatus::Converged);
  CHECK(rep.iterations == 0);
  CHECK(sup_norm(rep.u.span()) == 0.0);
}

TEST_CASE("large lambda produces a nontrivial negative-energy solution") {
  ProblemData d = fixed_instance(10.0);
  const SolveReport rep = solve_minimize(d, base_config(Strategy::Minimize));
  CHECK(rep.status == SolveStatus::Converged);
  CHECK(rep.residual <= 1e-9);
  CHECK(rep.nontrivial);
  CHECK(rep.energy < 0.0);

  // odd symmetry: the mirrored state solves the same problem
  GridFunction neg(rep.u.values);
  for (double& v : neg.values) v = -v;
  const DualVector g = energy_gradient(neg, d);
  double res = 0.0;
  for (std::size_t i : d.mesh.interiorNodes()) res = std::max(res, std::abs(g[i]));
  CHECK(res <= 1e-9);
  CHECK(energy(neg, d) == doctest::Approx(rep.energy).epsilon(1e-12));
}

TEST_CASE("three strategies agree on the fixed instance") {
  ProblemData d = fixed_instance(10.0);
  const SolveReport a = solve_minimize(d, base_config(Strategy::Minimize));
  const SolveReport b = solve_picard(d, base_config(Strategy::Picard));
  const SolveReport c = solve_continuation(d, base_config(Strategy::Continuation));
  REQUIRE(a.status == SolveStatus::Converged);
  REQUIRE(b.status == SolveStatus::Converged);
  REQUIRE(c.status == SolveStatus::Converged);
  CHECK(sup_diff(a.u, b.u) <= 10.0 * a.tol);
  CHECK(sup_diff(a.u, c.u) <= 10.0 * a.tol);
  CHECK(sup_diff(b.u, c.u) <= 10.0 * b.tol);
}

TEST_CASE("three strategies agree on a variable-exponent instance") {
  ProblemData d = variable_instance(10.0);
  const SolveReport a = solve_minimize(d, base_config(Strategy::Minimize));
  const SolveReport b = solve_picard(d, base_config(Strategy::Picard));
  const SolveReport c = solve_continuation(d, base_config(Strategy::Continuation));
  REQUIRE(a.status == SolveStatus::Converged);
  REQUIRE(b.status == SolveStatus::Converged);
  REQUIRE(c.status == SolveStatus::Converged);
  CHECK(sup_diff(a.u, b.u) <= 10.0 * a.tol);
  CHECK(sup_diff(a.u, c.u) <= 10.0 * a.tol);
}

TEST_CASE("energy never increases along an accepted minimize trajectory") {
  ProblemData d = fixed_instance(10.0);
  const SolveReport rep = solve_minimize(d, base_config(Strategy::Minimize));
  for (std::size_t k = 1; k < rep.trajectory.size(); ++k)
    CHECK(rep.trajectory[k].energy <= rep.trajectory[k - 1].energy + 1e-14);
}

TEST_CASE("continuation records the exact trivial root at t = 0") {
  ProblemData d = fixed_instance(10.0);
  const SolveReport rep = solve_continuation(d, base_config(Strategy::Continuation));
  REQUIRE(!rep.trajectory.empty());
  CHECK(rep.trajectory.front().residual == 0.0);
  CHECK(rep.trajectory.front().energy == 0.0);
}

TEST_CASE("continuation stays on the trivial branch when lambda = 0") {
  ProblemData d = fixed_instance(0.0);
  const SolveReport rep = solve_continuation(d, base_config(Strategy::Continuation));
  CHECK(rep.status == SolveStatus::Converged);
  CHECK(sup_norm(rep.u.span()) <= 1e-7);
}

TEST_CASE("undamped picard on a stiff instance reports its failure honestly") {
  ProblemData d = fixed_instance(120.0);
  SolverConfig cfg = base_config(Strategy::Picard);
  cfg.damping = 1.0;
  cfg.maxIter = 60;
  const SolveReport rep = solve_picard(d, cfg);
  if (rep.status == SolveStatus::Converged) {
    CHECK(rep.residual <= cfg.tol);  // convergence must be genuine
  } else {
    CHECK((rep.status == SolveStatus::Diverged || rep.status == SolveStatus::NoConvergence));
  }
}

TEST_CASE("continuation stall is reported with the failing t") {
  ProblemData d = fixed_instance(10.0);
  SolverConfig cfg = base_config(Strategy::Continuation);
  cfg.maxIter = 1;  // inner budget too small to track the branch
  const SolveReport rep = solve_continuation(d, cfg);
  CHECK(rep.status == SolveStatus::ContinuationStall);
  CHECK(rep.stallT > 0.0);
  CHECK(rep.stallT <= 1.0);
}

TEST_CASE("solutions on a symmetric instance inherit the mesh symmetry") {
  ProblemData d = fixed_instance(10.0);
  SolverConfig cfg = base_config(Strategy::Minimize);
  cfg.seedFunction = "bump";
  const SolveReport rep = solve_minimize(d, cfg);
  REQUIRE(rep.status == SolveStatus::Converged);
  for (std::size_t i = 0; i < d.size(); ++i)
    CHECK(std::abs(rep.u[i] - rep.u[d.mesh.reflect(i, 0)]) <= 1e-8);
}

TEST_CASE("a priori bound: trivial, chain, and refused branches") {
  Rng rng(73);

  ProblemData d0 = fixed_instance(0.0);
  const SolveReport trivial = solve_minimize(d0, base_config(Strategy::Minimize));
  const AprioriRecord recTrivial = verify_apriori(trivial, d0, rng);
  CHECK(recTrivial.branch == "trivial");
  CHECK(recTrivial.holds);

  ProblemData d = fixed_instance(10.0);
  const SolveReport rep = solve_minimize(d, base_config(Strategy::Minimize));
  REQUIRE(rep.status == SolveStatus::Converged);
  const AprioriRecord rec = verify_apriori(rep, d, rng);
  CHECK(rec.holds);
  CHECK((rec.branch == "chain" || rec.branch == "trivial"));
  if (rec.branch == "chain") {
    CHECK(rec.lhs <= rec.rhs * (1.0 + 1e-12));
    CHECK(rec.pairing == doctest::Approx(modular_gagliardo(rep.u, d.kernel, d.field))
                             .epsilon(1e-12));
  }

  SolveReport scaled = rep;
  for (double& v : scaled.u.values) v *= 5.0;  // not a solution
  const AprioriRecord refused = verify_apriori(scaled, d, rng);
  CHECK(refused.branch == "refused");
  CHECK(!refused.holds);
}

TEST_CASE("lambda sweep finds the nontrivial branch and is deterministic") {
  ProblemData base = fixed_instance(0.0);
  std::vector<double> lambdas;
  for (int k = 0; k <= 12; ++k) lambdas.push_back(static_cast<double>(k));

  SolverConfig cfg = base_config(Strategy::Minimize);
  const auto rows = sweep_lambda(base, lambdas, cfg);
  REQUIRE(rows.size() == lambdas.size());

  bool sawNontrivial = false;
  for (const auto& row : rows) {
    CHECK(row.status == SolveStatus::Converged);
    if (row.nontrivial && row.energy < 0.0) sawNontrivial = true;
    if (row.status == SolveStatus::Converged && row.nontrivial) CHECK(row.aprioriHolds);
  }
  CHECK(sawNontrivial);
  CHECK(rows.front().lambda == 0.0);
  CHECK(!rows.front().nontrivial);

  const auto rows2 = sweep_lambda(base, lambdas, cfg);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].energy == rows2[i].energy);
    CHECK(rows[i].residual == rows2[i].residual);
    CHECK(rows[i].normW0 == rows2[i].normW0);
  }
}

TEST_CASE("solver rejects meshes without interior unknowns") {
  ProblemData d = make_1d_constant(2, 0.5, 2.0, 1.5, 1.0);
  CHECK_THROWS_AS(solve_minimize(d, base_config(Strategy::Minimize)), EmptyMesh);
}

TEST_CASE("reported residual is recomputed from the returned state") {
  ProblemData d = variable_instance(6.0);
  const SolveReport rep = solve_minimize(d, base_config(Strategy::Minimize));
  REQUIRE(rep.status == SolveStatus::Converged);
  const DualVector g = energy_gradient(rep.u, d);
  double res = 0.0;
  for (std::size_t i : d.mesh.interiorNodes()) res = std::max(res, std::abs(g[i]));
  CHECK(rep.residual == res);
}
