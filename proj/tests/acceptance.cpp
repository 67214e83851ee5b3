// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Tolerances and budgets are pinned here, not configurable.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "fpxl/config.hpp"
#include "fpxl/degree.hpp"
#include "fpxl/errors.hpp"
#include "fpxl/presets.hpp"
#include "fpxl/run.hpp"
#include "fpxl/solver.hpp"
#include "test_support.hpp"

using namespace fpxl;
using namespace fpxl::testing;
namespace fs = std::filesystem;

namespace {

using clock_type = std::chrono::steady_clock;

struct Criterion {
  int id;
  const char* title;
  bool pass = true;
  std::string detail;
  double seconds = 0.0;

  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

std::vector<ExponentSpec> five_presets() {
  return {
      ExponentSpec{"constant", {{"value", 2.5}}},
      ExponentSpec{"affine", {{"base", 2.0}, {"gx", 0.4}}},
      ExponentSpec{"radial", {{"base", 2.2}, {"amp", 0.5}}},
      ExponentSpec{"separation", {{"base", 2.0}, {"amp", 0.8}}},
      ExponentSpec{"oscillatory", {{"base", 2.4}, {"amp", 0.3}, {"freq", 3.0}}},
  };
}

ProblemData preset_instance(const ExponentSpec& spec, std::size_t cells, int dim) {
  Box box{dim, {1.0, 1.0}};
  const double h = 1.0 / static_cast<double>(dim == 1 ? cells
                                                      : static_cast<std::size_t>(
                                                            std::sqrt(double(cells))));
  return ProblemData::make(box, h, 0.5, make_two_point(spec, box),
                           make_one_point(ExponentSpec{"constant", {{"value", 1.2}}}, box), 0.0);
}

ProblemData fixed_instance(double lambda) {
  return make_1d_constant(16, 0.5, 2.0, 1.5, lambda);
}

ProblemData variable_instance(double lambda) {
  Box box{1, {1.0, 1.0}};
  return ProblemData::make(
      box, 1.0 / 16, 0.5, make_two_point(ExponentSpec{"affine", {{"base", 2.0}, {"gx", 0.4}}}, box),
      make_one_point(ExponentSpec{"radial", {{"base", 1.3}, {"amp", 0.2}}}, box), lambda);
}

double sup_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double recomputed_residual(const GridFunction& u, const ProblemData& d) {
  const DualVector g = energy_gradient(u, d);
  double res = 0.0;
  for (std::size_t i : d.mesh.interiorNodes()) res = std::max(res, std::abs(g[i]));
  return res;
}

// --- criterion 1: Luxemburg correctness --------------------------------------

Criterion criterion1() {
  Criterion c{1, "Luxemburg correctness (unit modular, closed forms, <= 10 s)"};
  const auto t0 = clock_type::now();
  Rng rng(2024);

  const auto presets = five_presets();
  int samples = 0;
  double worst = 0.0;

  for (const auto& spec : presets) {  // 80 Lebesgue samples each at n = 512
    ProblemData d = preset_instance(spec, 512, 1);
    for (int k = 0; k < 80; ++k) {
      const double scale = std::pow(10.0, rng.uniform(-2.0, 2.0));
      GridFunction u = random_function(d.mesh, rng, scale);
      const NormReport rep = lebesgue_norm(u, d.field.qValues(), d.mesh, 1e-10);
      if (rep.luxemburg <= 0.0) {
        c.fail("zero norm on a random sample");
        continue;
      }
      const double unit = modular_lebesgue(u, d.field.qValues(), d.mesh, 1.0 / rep.luxemburg);
      worst = std::max(worst, std::abs(unit - 1.0));
      ++samples;
    }
  }
  for (const auto& spec : presets) {  // 20 Gagliardo samples each at n = 64
    ProblemData d = preset_instance(spec, 64, 1);
    for (int k = 0; k < 20; ++k) {
      GridFunction u = random_function(d.mesh, rng, k % 2 ? 0.1 : 10.0);
      const NormReport rep = gagliardo_norm(u, d.kernel, d.field, 1e-10);
      if (rep.luxemburg <= 0.0) {
        c.fail("zero seminorm on a random sample");
        continue;
      }
      const double unit = modular_gagliardo(u, d.kernel, d.field, 1.0 / rep.luxemburg);
      worst = std::max(worst, std::abs(unit - 1.0));
      ++samples;
    }
  }
  if (samples != 500) c.fail("expected 500 samples, ran " + std::to_string(samples));
  if (worst > 1e-9) c.fail("unit modular off by " + std::to_string(worst));

  // constant exponents: ||c|| = |Omega|^{1/p} |c| on Omega = (0,2)
  double worstClosed = 0.0;
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    ProblemData d = make_1d_constant(512, 0.5, p, 1.2, 0.0, 2.0);
    for (double cval : {0.5, -2.0, 10.0}) {
      GridFunction u(d.size(), cval);
      const double norm = lebesgue_norm(u, d.field.qValues(), d.mesh, 1e-12).luxemburg;
      const double closed = std::pow(2.0, 1.0 / p) * std::abs(cval);
      worstClosed = std::max(worstClosed, std::abs(norm - closed));
    }
  }
  if (worstClosed > 1e-9) c.fail("closed form off by " + std::to_string(worstClosed));

  c.seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
  if (c.seconds > 10.0) c.fail("runtime budget exceeded");
  c.detail += "worst unit-modular deviation " + std::to_string(worst) +
              ", worst closed-form deviation " + std::to_string(worstClosed);
  return c;
}

// --- criterion 2: propositions 1 and 2 ---------------------------------------

Criterion criterion2() {
  Criterion c{2, "modular/norm sandwiches and sign equivalences (<= 30 s)"};
  const auto t0 = clock_type::now();
  Rng rng(77);
  const auto presets = five_presets();

  double worst1 = 1.0, worst2 = 1.0;
  int n1 = 0, n2 = 0;

  for (const auto& spec : presets) {
    ProblemData big = preset_instance(spec, 512, 1);
    for (int k = 0; k < 100; ++k) {
      const double scale = std::pow(10.0, rng.uniform(-2.0, 2.0));
      GridFunction u = random_function(big.mesh, rng, scale);
      const auto expo = (k % 2 == 0) ? big.field.qValues() : big.field.rValues();
      const SandwichVerdict v = check_prop1(u, expo, big.mesh);
      worst1 = std::min(worst1, v.worst);
      if (!v.pass) c.fail("prop1 sample failed");
      ++n1;
    }
    ProblemData small = preset_instance(spec, 40, 1);
    for (int k = 0; k < 100; ++k) {
      const double scale = std::pow(10.0, rng.uniform(-2.0, 2.0));
      GridFunction u = random_function(small.mesh, rng, scale);
      const SandwichVerdict v = check_prop2(u, small.kernel, small.field);
      worst2 = std::min(worst2, v.worst);
      if (!v.pass) c.fail("prop2 sample failed");
      ++n2;
    }
  }
  if (n1 != 500 || n2 != 500) c.fail("sample counts off");
  if (worst1 < -1e-12) c.fail("prop1 slack " + std::to_string(worst1));
  if (worst2 < -1e-12) c.fail("prop2 slack " + std::to_string(worst2));

  c.seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
  if (c.seconds > 30.0) c.fail("runtime budget exceeded");
  c.detail += "worst slack prop1 " + std::to_string(worst1) + ", prop2 " + std::to_string(worst2);
  return c;
}

// --- criterion 3: operator identities ----------------------------------------

Criterion criterion3() {
  Criterion c{3, "duality identity, strict monotonicity, gradient consistency"};
  const auto t0 = clock_type::now();
  Rng rng(101);

  ProblemData d1 = variable_instance(2.0);
  ProblemData d2 = make_2d(7, 0.5, constant_p(2.4), constant_r(1.5), 1.0);

  double worstDuality = 0.0;
  for (int k = 0; k < 500; ++k) {
    const ProblemData& d = (k % 2 == 0) ? d1 : d2;
    GridFunction u = random_function(d.mesh, rng, k % 3 ? 1.0 : 15.0);
    const double lhs = pairing(apply_L(u, d), u);
    const double rho = modular_gagliardo(u, d.kernel, d.field);
    worstDuality = std::max(worstDuality, std::abs(lhs - rho) / std::max(1.0, rho));
  }
  if (worstDuality > 1e-12) c.fail("duality relative error " + std::to_string(worstDuality));

  int monotone = 0;
  for (int k = 0; k < 500; ++k) {
    const ProblemData& d = (k % 2 == 0) ? d1 : d2;
    GridFunction u = random_function(d.mesh, rng, 2.0);
    GridFunction w = random_function(d.mesh, rng, 2.0);
    double diff = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) diff = std::max(diff, std::abs(u[i] - w[i]));
    if (diff <= 1e-8) continue;
    const DualVector lu = apply_L(u, d), lw = apply_L(w, d);
    double inner = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) inner += (lu[i] - lw[i]) * (u[i] - w[i]);
    if (inner > 0.0) ++monotone;
  }
  if (monotone != 500) c.fail("monotonicity held on " + std::to_string(monotone) + "/500 pairs");

  ProblemData dg = make_1d(48, 0.5,
                           [](std::span<const double> x, std::span<const double> y) {
                             return 1.8 + 0.4 * (x[0] + y[0]) / 2.0;
                           },
                           constant_r(1.3), 3.0);
  double worstGrad = 0.0;
  const double step = 1e-6;
  for (int k = 0; k < 50; ++k) {
    GridFunction u = random_function(dg.mesh, rng, 1.0);
    const DualVector g = energy_gradient(u, dg);
    for (std::size_t i = 0; i < u.size(); ++i) {
      GridFunction up(u.values), um(u.values);
      up[i] += step;
      um[i] -= step;
      const double fd = (energy(up, dg) - energy(um, dg)) / (2.0 * step);
      worstGrad = std::max(worstGrad, std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i])));
    }
  }
  if (worstGrad > 1e-5) c.fail("gradient fd relative error " + std::to_string(worstGrad));

  c.seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
  c.detail += "duality " + std::to_string(worstDuality) + ", fd " + std::to_string(worstGrad);
  return c;
}

// --- criterion 4: inverse round trip ------------------------------------------

Criterion criterion4() {
  Criterion c{4, "inverse round trip and the dense p = 2 oracle"};
  const auto t0 = clock_type::now();
  Rng rng(113);

  std::vector<ProblemData> instances;
  instances.push_back(make_1d_constant(16, 0.5, 2.0, 1.5, 0.0));
  instances.push_back(make_1d_constant(24, 0.5, 1.5, 1.2, 0.0));  // p < 2 throughout
  instances.push_back(make_1d(32, 0.5,
                              [](std::span<const double> x, std::span<const double> y) {
                                return 1.6 + 0.3 * (x[0] + y[0]) / 2.0;  // p < 2 region
                              },
                              constant_r(1.2), 0.0));
  instances.push_back(make_2d(5, 0.5, constant_p(2.8), constant_r(1.5), 0.0));
  instances.push_back(make_1d(64, 0.5,
                              [](std::span<const double> x, std::span<const double> y) {
                                return 2.0 + 0.8 * std::abs(x[0] - y[0]);
                              },
                              constant_r(1.4), 0.0));

  double worstTrip = 0.0;
  int trips = 0;
  for (const auto& d : instances) {
    for (int k = 0; k < 10; ++k) {
      GridFunction u0 = random_function(d.mesh, rng, 1.0, true);
      const DualVector v = apply_L(u0, d);
      const GridFunction back = apply_T(v, d, 1e-10);
      worstTrip = std::max(worstTrip, sup_diff(back, u0));
      ++trips;
    }
  }
  if (trips != 50) c.fail("expected 50 round trips");
  if (worstTrip > 1e-6) c.fail("round-trip error " + std::to_string(worstTrip));

  ProblemData lin = make_1d_constant(32, 0.5, 2.0, 1.5, 0.0);
  double worstLin = 0.0;
  for (int k = 0; k < 5; ++k) {
    GridFunction u0 = random_function(lin.mesh, rng, 1.0, true);
    const DualVector v = apply_L(u0, lin);
    const auto x = dense_solve(linear_operator_matrix(lin), lin.mesh.restrictInterior(v.span()));
    const GridFunction direct = lin.mesh.injectInterior(x);
    const GridFunction iter = apply_T(v, lin, 1e-11);
    worstLin = std::max(worstLin, sup_diff(direct, iter));
  }
  if (worstLin > 1e-8) c.fail("dense-solve mismatch " + std::to_string(worstLin));

  c.seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
  c.detail += "worst trip " + std::to_string(worstTrip) + ", dense mismatch " +
              std::to_string(worstLin);
  return c;
}

// --- criteria 5/6: solver soundness and the a priori bound --------------------

void criterion56(Criterion& c5, Criterion& c6) {
  const auto t0 = clock_type::now();

  SolverConfig cfg;
  cfg.tol = 1e-9;
  cfg.maxIter = 60000;
  cfg.seedFunction = "constant";
  cfg.seed = 7;

  // lambda = 0 gives the trivial solution from every seed preset and strategy
  {
    ProblemData d = fixed_instance(0.0);
    for (const char* seed : {"zero", "constant", "random", "bump"}) {
      SolverConfig scfg = cfg;
      scfg.seedFunction = seed;
      for (Strategy strat : {Strategy::Minimize, Strategy::Picard, Strategy::Continuation}) {
        scfg.strategy = strat;
        const SolveReport rep = solve(d, scfg);
        if (rep.status != SolveStatus::Converged)
          c5.fail(std::string("lambda=0 ") + strategy_name(strat) + "/" + seed +
                  " did not converge");
        if (rep.nontrivial || sup_norm(rep.u.span()) > 100.0 * scfg.tol)
          c5.fail(std::string("lambda=0 ") + strategy_name(strat) + "/" + seed +
                  " returned a nontrivial state");
        if (recomputed_residual(rep.u, d) > scfg.tol)
          c5.fail("lambda=0 residual recomputation exceeded tol");
      }
    }
  }

  // cross-strategy agreement on the fixed and a variable-exponent instance
  for (int which = 0; which < 2; ++which) {
    ProblemData d = which == 0 ? fixed_instance(10.0) : variable_instance(10.0);
    const char* tag = which == 0 ? "fixed" : "variable";
    SolverConfig a = cfg;
    a.strategy = Strategy::Minimize;
    SolverConfig b = cfg;
    b.strategy = Strategy::Picard;
    SolverConfig e = cfg;
    e.strategy = Strategy::Continuation;
    const SolveReport ra = solve(d, a), rb = solve(d, b), rc = solve(d, e);
    for (const SolveReport* rep : {&ra, &rb, &rc}) {
      if (rep->status != SolveStatus::Converged) {
        c5.fail(std::string(tag) + " instance: a strategy did not converge");
      } else if (recomputed_residual(rep->u, d) > cfg.tol) {
        c5.fail(std::string(tag) + " instance: reported solution fails the residual recheck");
      }
    }
    if (sup_diff(ra.u, rb.u) > 10.0 * cfg.tol || sup_diff(ra.u, rc.u) > 10.0 * cfg.tol ||
        sup_diff(rb.u, rc.u) > 10.0 * cfg.tol)
      c5.fail(std::string(tag) + " instance: strategies disagree beyond 10 tol (" +
              std::to_string(sup_diff(ra.u, rb.u)) + ", " + std::to_string(sup_diff(ra.u, rc.u)) +
              ")");
  }

  // lambda sweep: a nontrivial negative-energy branch must appear
  {
    ProblemData base = fixed_instance(0.0);
    std::vector<double> lambdas;
    for (int k = 0; k <= 12; ++k) lambdas.push_back(static_cast<double>(k));
    SolverConfig scfg = cfg;
    scfg.seedFunction = "bump";
    const auto rows = sweep_lambda(base, lambdas, scfg);

    double foundLambda = -1.0;
    for (const auto& row : rows) {
      if (row.status != SolveStatus::Converged)
        c5.fail("sweep solve at lambda " + std::to_string(row.lambda) + " did not converge");
      if (row.status == SolveStatus::Converged && row.residual > scfg.tol)
        c5.fail("sweep row residual above tol");
      if (row.nontrivial && row.energy < 0.0 && row.supNorm > 1e-4 && foundLambda < 0.0)
        foundLambda = row.lambda;
    }
    if (foundLambda < 0.0)
      c5.fail("no nontrivial negative-energy solution in the swept lambda range");
    else
      c5.detail += "nontrivial branch from lambda " + std::to_string(foundLambda);

    int checked = 0;
    for (const auto& row : rows) {
      if (row.status == SolveStatus::Converged && row.nontrivial) {
        ++checked;
        if (!row.aprioriHolds)
          c6.fail("a priori bound failed at lambda " + std::to_string(row.lambda) +
                  " (branch " + row.aprioriBranch + ")");
      }
    }
    if (checked == 0)
      c6.fail("no converged nontrivial solutions to check");
    else
      c6.detail = "checked " + std::to_string(checked) + " nontrivial sweep solutions";
  }

  c5.seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
  if (c5.seconds > 120.0) c5.fail("runtime budget exceeded");
}

// --- criterion 7: degree engine -----------------------------------------------

Criterion criterion7() {
  Criterion c{7, "degree engine: normalization, signs, winding, additivity, homotopy"};
  const auto t0 = clock_type::now();

  auto interval = [](BoxMap map, double a, double b, double target) {
    DegreeProblem prob;
    prob.map = std::move(map);
    prob.dim = 1;
    prob.lo = {a, a};
    prob.hi = {b, b};
    prob.target = {target, 0.0};
    return prob;
  };
  auto plane = [](BoxMap map) {
    DegreeProblem prob;
    prob.map = std::move(map);
    prob.dim = 2;
    prob.lo = {-1.0, -1.0};
    prob.hi = {1.0, 1.0};
    return prob;
  };

  try {
    if (degree_1d(interval(make_degree_map("identity", {}, 1), -1, 1, 0.0)).degree != 1)
      c.fail("d(I) != 1 on the line");
    if (degree_2d(plane(make_degree_map("identity", {}, 2))).degree != 1)
      c.fail("d(I) != 1 in the plane");
    if (degree_1d(interval(make_degree_map("negate", {}, 1), -1, 1, 0.0)).degree != -1)
      c.fail("d(-I) != -1 on the line");
    if (degree_2d(plane(make_degree_map("negate", {}, 2))).degree != 1)
      c.fail("d(-I) != +1 in the plane");
    if (degree_2d(plane(make_degree_map("zsquare", {}, 2))).degree != 2)
      c.fail("d(z^2) != 2");

    const std::map<std::string, double> roots{{"a", -0.6}, {"b", 0.1}, {"c", 0.7}};
    BoxMap cubic = make_degree_map("cubic", roots, 1);
    const int whole = degree_1d(interval(cubic, -1, 1, 0.0)).degree;
    const int left = degree_1d(interval(cubic, -1.0, -0.2, 0.0)).degree;
    const int mid = degree_1d(interval(cubic, -0.2, 0.4, 0.0)).degree;
    const int right = degree_1d(interval(cubic, 0.4, 1.0, 0.0)).degree;
    if (whole != left + mid + right || whole != 1)
      c.fail("additivity violated: " + std::to_string(whole) + " vs " + std::to_string(left) +
             "+" + std::to_string(mid) + "+" + std::to_string(right));
  } catch (const Error& e) {
    c.fail(std::string("degree computation threw: ") + e.what());
  }

  try {
    ProblemData d = make_1d_constant(3, 0.5, 2.0, 1.5, 10.0);
    SolverConfig cfg;
    cfg.tol = 1e-9;
    cfg.maxIter = 60000;
    cfg.seedFunction = "constant";
    const HomotopyVerdict v = verify_homotopy_invariance(d, cfg);
    if (v.degrees.size() != 5) c.fail("homotopy audit did not cover five t values");
    for (int deg : v.degrees)
      if (deg != 1) c.fail("homotopy degree " + std::to_string(deg) + " != 1");
    if (!v.rootFound) c.fail("existence axiom: no root located at t = 1");
    if (v.rootMatchSup > 1e-6)
      c.fail("root/picard mismatch " + std::to_string(v.rootMatchSup));
    c.detail += "root match " + std::to_string(v.rootMatchSup);
  } catch (const Error& e) {
    c.fail(std::string("homotopy audit threw: ") + e.what());
  }

  c.seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
  if (c.seconds > 30.0) c.fail("runtime budget exceeded");
  return c;
}

// --- criterion 8: determinism --------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Criterion criterion8() {
  Criterion c{8, "bit-identical reports for identical manifests"};
  const auto t0 = clock_type::now();

  const fs::path dir = fs::temp_directory_path() / "fpxl_acceptance_det";
  fs::remove_all(dir);

  nlohmann::json j{
      {"domain", {{"dim", 1}, {"extents", {1.0}}}},
      {"h", 1.0 / 16},
      {"s", 0.5},
      {"exponents",
       {{"p", {{"preset", "constant"}, {"value", 2.0}}},
        {"r", {{"preset", "constant"}, {"value", 1.5}}}}},
      {"lambda", 10.0},
      {"solver",
       {{"strategy", "minimize"}, {"tol", 1e-9}, {"maxIter", 60000}, {"seedFunction", "random"}}},
      {"seed", 99},
      {"out", (dir / "a").string()}};

  std::ostringstream log;
  RunConfig cfgA = config_from_json(j);
  if (run_command("solve", cfgA, log) != kExitOk) c.fail("first run failed");

  j["out"] = (dir / "b").string();
  RunConfig cfgB = config_from_json(j);
  if (run_command("solve", cfgB, log) != kExitOk) c.fail("second run failed");

  if (slurp(dir / "a" / "report.json") != slurp(dir / "b" / "report.json"))
    c.fail("reports differ between identical runs");

  // and through the manifest, which is the stronger statement
  RunConfig replay = load_config((dir / "a" / "manifest.json").string());
  replay.out = (dir / "c").string();
  if (run_command("solve", replay, log) != kExitOk) c.fail("manifest replay failed");
  if (slurp(dir / "a" / "report.json") != slurp(dir / "c" / "report.json"))
    c.fail("manifest replay changed the report");

  c.seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
  return c;
}

}  // namespace

int main() {
  std::vector<Criterion> results;
  results.push_back(criterion1());
  results.push_back(criterion2());
  results.push_back(criterion3());
  results.push_back(criterion4());
  {
    Criterion c5{5, "solver soundness (residuals, trivial branch, agreement, sweep, <= 2 min)"};
    Criterion c6{6, "a priori bound on every converged nontrivial sweep solution"};
    criterion56(c5, c6);
    results.push_back(c5);
    results.push_back(c6);
  }
  results.push_back(criterion7());
  results.push_back(criterion8());

  int failures = 0;
  for (const auto& c : results) {
    if (!c.pass) ++failures;
    std::printf("[%s] criterion %d: %s (%.2fs)%s%s\n", c.pass ? "PASS" : "FAIL", c.id, c.title,
                c.seconds, c.detail.empty() ? "" : " -- ", c.detail.c_str());
  }
  return failures;
}
