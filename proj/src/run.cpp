#include "fpxl/run.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "fpxl/degree.hpp"
#include "fpxl/errors.hpp"
#include "fpxl/kernels.hpp"
#include "fpxl/version.hpp"

namespace fpxl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void write_solution_csv(const fs::path& path, const Mesh& mesh, const GridFunction& u) {
  std::string csv = mesh.dim() == 1 ? "x,value\n" : "x,y,value\n";
  for (std::size_t i = 0; i < mesh.size(); ++i) {
    auto x = mesh.node(i);
    for (double c : x) csv += fmt(c) + ",";
    csv += fmt(u[i]) + "\n";
  }
  write_text(path, csv);
}

json apriori_to_json(const AprioriRecord& rec) {
  return json{{"branch", rec.branch}, {"holds", rec.holds},       {"lhs", rec.lhs},
              {"rhs", rec.rhs},       {"normW0", rec.normW0},     {"pairing", rec.pairing},
              {"embedQ", rec.embedQ}, {"embedR", rec.embedR},     {"residualGate", rec.residualGate}};
}

json report_to_json(const SolveReport& rep, const std::string& strategy) {
  json j{{"strategy", strategy},
         {"status", status_name(rep.status)},
         {"iterations", rep.iterations},
         {"residual", rep.residual},
         {"energy", rep.energy},
         {"norms", {{"w0", rep.normW0}, {"lebesgue_q", rep.normQ}, {"lebesgue_r", rep.normR}}},
         {"nontrivial", rep.nontrivial},
         {"tol", rep.tol},
         {"truncation",
          {{"interiorNodes", rep.interiorNodes}, {"collarNodes", rep.collarNodes}}}};
  if (rep.apriori) j["apriori"] = apriori_to_json(*rep.apriori);
  if (rep.stallT >= 0.0) j["stallT"] = rep.stallT;
  json traj = json::array();
  for (const auto& pt : rep.trajectory) traj.push_back({pt.residual, pt.energy});
  j["trajectory"] = std::move(traj);
  return j;
}

struct Verdict {
  std::string property;
  int samples = 0;
  double worstSlack = 0.0;
  bool pass = false;
};

json verdicts_to_json(const std::vector<Verdict>& verdicts) {
  json arr = json::array();
  for (const auto& v : verdicts)
    arr.push_back({{"property", v.property},
                   {"samples", v.samples},
                   {"worstSlack", v.worstSlack},
                   {"pass", v.pass}});
  return arr;
}

GridFunction random_state(const Mesh& mesh, Rng& rng, double scale, bool admissible) {
  GridFunction u(mesh.size());
  if (admissible) {
    for (std::size_t i : mesh.interiorNodes()) u[i] = rng.uniform(-scale, scale);
  } else {
    for (std::size_t i = 0; i < mesh.size(); ++i) u[i] = rng.uniform(-scale, scale);
  }
  return u;
}

double sample_scale(int k) {
  constexpr double scales[] = {0.05, 1.0, 20.0};
  return scales[k % 3];
}

/// The randomized property suite behind the `verify` subcommand.
std::vector<Verdict> run_verify_suite(const ProblemData& data, int samples, Rng& rng) {
  const Mesh& mesh = data.mesh;
  const ExponentField& field = data.field;
  std::vector<Verdict> out;

  auto min_into = [](Verdict& v, double slack) { v.worstSlack = std::min(v.worstSlack, slack); };

  {  // unit-ball characterization of the gauge, both modular families
    Verdict v{"luxemburg_unit_modular", samples, 1.0, false};
    const double band = 1e-9;
    v.worstSlack = band;
    for (int k = 0; k < samples; ++k) {
      GridFunction u = random_state(mesh, rng, sample_scale(k), false);
      const NormReport lq = lebesgue_norm(u, field.qValues(), mesh, 1e-12);
      if (lq.luxemburg > 0.0)
        min_into(v, band - std::abs(modular_lebesgue(u, field.qValues(), mesh,
                                                     1.0 / lq.luxemburg) -
                                    1.0));
      const NormReport gg = gagliardo_norm(u, data.kernel, field, 1e-12);
      if (gg.luxemburg > 0.0)
        min_into(v, band - std::abs(modular_gagliardo(u, data.kernel, field,
                                                      1.0 / gg.luxemburg) -
                                    1.0));
    }
    v.pass = v.worstSlack >= 0.0;
    out.push_back(v);
  }

  {  // absolute homogeneity ||c u|| = |c| ||u||
    Verdict v{"luxemburg_homogeneity", samples, 1.0, false};
    const double band = 1e-8;
    v.worstSlack = band;
    for (int k = 0; k < samples; ++k) {
      GridFunction u = random_state(mesh, rng, sample_scale(k), false);
      const double c = rng.uniform(-8.0, 8.0);
      GridFunction cu(u.values);
      for (double& x : cu.values) x *= c;
      const double nu = lebesgue_norm(u, field.qValues(), mesh, 1e-12).luxemburg;
      const double ncu = lebesgue_norm(cu, field.qValues(), mesh, 1e-12).luxemburg;
      const double err = std::abs(ncu - std::abs(c) * nu) / std::max(1.0, std::abs(c) * nu);
      min_into(v, band - err);
    }
    v.pass = v.worstSlack >= 0.0;
    out.push_back(v);
  }

  {  // triangle inequality of the gauge
    Verdict v{"luxemburg_triangle", samples, 1.0, false};
    for (int k = 0; k < samples; ++k) {
      GridFunction u = random_state(mesh, rng, sample_scale(k), false);
      GridFunction w = random_state(mesh, rng, sample_scale(k + 1), false);
      GridFunction uw(u.values);
      for (std::size_t i = 0; i < w.size(); ++i) uw.values[i] += w[i];
      const double nu = lebesgue_norm(u, field.qValues(), mesh, 1e-12).luxemburg;
      const double nw = lebesgue_norm(w, field.qValues(), mesh, 1e-12).luxemburg;
      const double nuw = lebesgue_norm(uw, field.qValues(), mesh, 1e-12).luxemburg;
      min_into(v, (nu + nw - nuw) / std::max({1.0, nu + nw, nuw}));
    }
    v.pass = v.worstSlack >= -1e-12;
    out.push_back(v);
  }

  {  // modular/norm comparison, Lebesgue family (q and r exponents alternate)
    Verdict v{"prop1_sandwich", samples, 1.0, false};
    bool allPass = true;
    for (int k = 0; k < samples; ++k) {
      GridFunction u = random_state(mesh, rng, sample_scale(k), false);
      const auto expo = (k % 2 == 0) ? field.qValues() : field.rValues();
      const SandwichVerdict sv = check_prop1(u, expo, mesh);
      min_into(v, sv.worst);
      allPass = allPass && sv.pass;
    }
    v.pass = allPass && v.worstSlack >= -1e-12;
    out.push_back(v);
  }

  {  // modular/norm comparison, pair family
    Verdict v{"prop2_sandwich", samples, 1.0, false};
    bool allPass = true;
    for (int k = 0; k < samples; ++k) {
      GridFunction u = random_state(mesh, rng, sample_scale(k), false);
      const SandwichVerdict sv = check_prop2(u, data.kernel, field);
      min_into(v, sv.worst);
      allPass = allPass && sv.pass;
    }
    v.pass = allPass && v.worstSlack >= -1e-12;
    out.push_back(v);
  }

  {  // <Lu, u> = rho(u), exactly at the discrete level
    Verdict v{"duality_identity", samples, 1.0, false};
    const double band = 1e-12;
    v.worstSlack = band;
    for (int k = 0; k < samples; ++k) {
      GridFunction u = random_state(mesh, rng, sample_scale(k), false);
      const double lhs = pairing(apply_L(u, data), u);
      const double rho = modular_gagliardo(u, data.kernel, field);
      min_into(v, band - std::abs(lhs - rho) / std::max(1.0, rho));
    }
    v.pass = v.worstSlack >= 0.0;
    out.push_back(v);
  }

  {  // strict monotonicity of L on distinct pairs
    Verdict v{"strict_monotonicity", samples, 1.0, false};
    for (int k = 0; k < samples; ++k) {
      GridFunction u = random_state(mesh, rng, sample_scale(k), true);
      GridFunction w = random_state(mesh, rng, sample_scale(k + 2), true);
      double diffSup = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i)
        diffSup = std::max(diffSup, std::abs(u[i] - w[i]));
      if (diffSup <= 1e-8) continue;
      const DualVector lu = apply_L(u, data);
      const DualVector lw = apply_L(w, data);
      double inner = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) inner += (lu[i] - lw[i]) * (u[i] - w[i]);
      min_into(v, inner);
    }
    v.pass = v.worstSlack > 0.0;
    out.push_back(v);
  }

  {  // odd symmetry of both operators
    Verdict v{"odd_symmetry", samples, 1.0, false};
    const double band = 1e-13;
    v.worstSlack = band;
    for (int k = 0; k < samples; ++k) {
      GridFunction u = random_state(mesh, rng, sample_scale(k), false);
      GridFunction nu(u.values);
      for (double& x : nu.values) x = -x;
      const DualVector lu = apply_L(u, data), lnu = apply_L(nu, data);
      const DualVector su = apply_S(u, data), snu = apply_S(nu, data);
      double err = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        err = std::max(err, std::abs(lnu[i] + lu[i]));
        err = std::max(err, std::abs(snu[i] + su[i]));
      }
      min_into(v, band - err / std::max(1.0, sup_norm(lu.span())));
    }
    v.pass = v.worstSlack >= 0.0;
    out.push_back(v);
  }

  {  // energy gradient vs central differences (a light draw; the dedicated
     // test suite covers every coordinate)
    Verdict v{"energy_gradient_fd", std::max(4, samples / 25), 1.0, false};
    const double band = 1e-5;
    v.worstSlack = band;
    for (int k = 0; k < v.samples; ++k) {
      GridFunction u = random_state(mesh, rng, 1.0, false);
      const DualVector g = energy_gradient(u, data);
      const double step = 1e-6;
      for (int probe = 0; probe < 4; ++probe) {
        const std::size_t i = static_cast<std::size_t>(rng.below(mesh.size()));
        GridFunction up(u.values), um(u.values);
        up[i] += step;
        um[i] -= step;
        const double fd = (energy(up, data) - energy(um, data)) / (2.0 * step);
        const double rel = std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i]));
        min_into(v, band - rel);
      }
    }
    v.pass = v.worstSlack >= 0.0;
    out.push_back(v);
  }

  {  // boundedness of the lower-order image (the compactness ingredient
     // that survives discretization)
    Verdict v{"s_image_bounded", std::max(8, samples / 8), 1.0, false};
    const std::vector<double> alpha = alpha_exponent(data);
    const double embedQ = estimate_embedding(data, field.qValues(), 32, rng);
    const double embedA = estimate_embedding(data, alpha, 32, rng);
    bool allPass = true;
    for (int k = 0; k < v.samples; ++k) {
      GridFunction u = random_state(mesh, rng, sample_scale(k), true);
      const SBoundVerdict sb = check_s_bounded(u, data, embedQ, embedA);
      min_into(v, sb.worst);
      allPass = allPass && sb.pass;
    }
    v.pass = allPass;
    out.push_back(v);
  }

  {  // kernel symmetry, exact
    Verdict v{"kernel_symmetry", 1, 1.0, false};
    double worst = 0.0;
    for (std::size_t i = 0; i < mesh.size(); ++i)
      for (std::size_t j = i + 1; j < mesh.size(); ++j)
        worst = std::max(worst, std::abs(data.kernel(i, j) - data.kernel(j, i)));
    v.worstSlack = -worst;
    v.pass = worst == 0.0;
    out.push_back(v);
  }

  {  // inverse round trip on admissible states
    Verdict v{"inverse_round_trip", std::max(8, samples / 8), 1.0, false};
    const double band = 1e-6;
    v.worstSlack = band;
    for (int k = 0; k < v.samples; ++k) {
      GridFunction u = random_state(mesh, rng, 1.0, true);
      const DualVector lu = apply_L(u, data);
      const GridFunction back = apply_T(lu, data, 1e-10);
      double err = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i)
        err = std::max(err, std::abs(back[i] - u[i]));
      min_into(v, band - err);
    }
    v.pass = v.worstSlack >= 0.0;
    out.push_back(v);
  }

  return out;
}

int command_solve(const RunConfig& cfg, const fs::path& outDir, std::ostream& log,
                  bool continuation) {
  ProblemData data = build_problem(cfg);
  SolverConfig scfg = cfg.solver;
  if (continuation) scfg.strategy = Strategy::Continuation;

  SolveReport rep = solve(data, scfg);
  if (rep.status == SolveStatus::Converged) {
    Rng rng(cfg.seed ^ 0xa5a5a5a5ull);
    rep.apriori = verify_apriori(rep, data, rng);
  }

  json j = report_to_json(rep, strategy_name(scfg.strategy));
  j["command"] = continuation ? "continuation" : "solve";
  write_json(outDir / "report.json", j);
  write_solution_csv(outDir / "solution.csv", data.mesh, rep.u);

  if (continuation) {
    std::string csv = "step,residual,energy\n";
    for (std::size_t k = 0; k < rep.trajectory.size(); ++k)
      csv += std::to_string(k) + "," + fmt(rep.trajectory[k].residual) + "," +
             fmt(rep.trajectory[k].energy) + "\n";
    write_text(outDir / "path.csv", csv);
  }

  log << "status: " << status_name(rep.status) << "  residual: " << rep.residual
      << "  energy: " << rep.energy << "  nontrivial: " << (rep.nontrivial ? "yes" : "no")
      << "\n";
  return rep.status == SolveStatus::Converged ? kExitOk : kExitNoConvergence;
}

int command_sweep(const RunConfig& cfg, const fs::path& outDir, std::ostream& log) {
  if (!cfg.sweep) throw ConfigError("sweep subcommand needs a 'sweep' section in the config");
  ProblemData data = build_problem(cfg);
  std::vector<double> lambdas(static_cast<std::size_t>(cfg.sweep->count));
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    lambdas[i] = cfg.sweep->from +
                 (cfg.sweep->to - cfg.sweep->from) * static_cast<double>(i) /
                     static_cast<double>(lambdas.size() - 1);

  const auto rows = sweep_lambda(data, lambdas, cfg.solver);

  std::string csv = "lambda,status,residual,energy,normW0,supNorm,nontrivial,aprioriHolds\n";
  json arr = json::array();
  bool anyFailed = false;
  for (const auto& row : rows) {
    csv += fmt(row.lambda) + "," + status_name(row.status) + "," + fmt(row.residual) + "," +
           fmt(row.energy) + "," + fmt(row.normW0) + "," + fmt(row.supNorm) + "," +
           (row.nontrivial ? "1" : "0") + "," + (row.aprioriHolds ? "1" : "0") + "\n";
    arr.push_back({{"lambda", row.lambda},
                   {"status", status_name(row.status)},
                   {"residual", row.residual},
                   {"energy", row.energy},
                   {"normW0", row.normW0},
                   {"supNorm", row.supNorm},
                   {"nontrivial", row.nontrivial},
                   {"aprioriHolds", row.aprioriHolds},
                   {"aprioriBranch", row.aprioriBranch}});
    anyFailed = anyFailed || row.status != SolveStatus::Converged;
  }
  write_text(outDir / "sweep.csv", csv);
  write_json(outDir / "report.json", json{{"command", "sweep"}, {"rows", arr}});
  log << "sweep rows: " << rows.size() << (anyFailed ? " (some solves did not converge)" : "")
      << "\n";
  return anyFailed ? kExitNoConvergence : kExitOk;
}

int command_verify(const RunConfig& cfg, const fs::path& outDir, std::ostream& log) {
  ProblemData data = build_problem(cfg);
  Rng rng(cfg.seed);
  const auto verdicts = run_verify_suite(data, cfg.verifySamples, rng);
  bool allPass = true;
  for (const auto& v : verdicts) {
    allPass = allPass && v.pass;
    log << (v.pass ? "pass " : "FAIL ") << v.property << "  samples " << v.samples
        << "  worst slack " << v.worstSlack << "\n";
  }
  write_json(outDir / "report.json",
             json{{"command", "verify"}, {"allPass", allPass}, {"verdicts", verdicts_to_json(verdicts)}});
  return allPass ? kExitOk : kExitNoConvergence;
}

int command_norms(const RunConfig& cfg, const fs::path& outDir, std::ostream& log) {
  ProblemData data = build_problem(cfg);
  Rng rng(cfg.seed);
  const GridFunction u = seed_function(cfg.function, data.mesh, rng);

  const NormReport nq = lebesgue_norm(u, data.field.qValues(), data.mesh, 1e-12);
  const NormReport nr = lebesgue_norm(u, data.field.rValues(), data.mesh, 1e-12);
  const NormReport nw = gagliardo_norm(u, data.kernel, data.field, 1e-12);
  const SandwichVerdict p1 = check_prop1(u, data.field.qValues(), data.mesh);
  const SandwichVerdict p2 = check_prop2(u, data.kernel, data.field);

  auto norm_json = [](const NormReport& r) {
    return json{{"modular", r.modular},
                {"luxemburg", r.luxemburg},
                {"bracketLow", r.bracketLow},
                {"bracketHigh", r.bracketHigh},
                {"iterations", r.iterations}};
  };
  auto verdict_json = [](const SandwichVerdict& v) {
    return json{{"pass", v.pass},           {"norm", v.norm},
                {"modular", v.modular},     {"unitModular", v.unitModular},
                {"signEquiv", v.signEquiv}, {"sandwichLow", v.sandwichLow},
                {"sandwichHigh", v.sandwichHigh}, {"e1", v.e1},
                {"ineq1", v.ineq1},         {"worst", v.worst}};
  };
  write_json(outDir / "report.json", json{{"command", "norms"},
                                          {"function", cfg.function},
                                          {"lebesgue_q", norm_json(nq)},
                                          {"lebesgue_r", norm_json(nr)},
                                          {"gagliardo", norm_json(nw)},
                                          {"prop1", verdict_json(p1)},
                                          {"prop2", verdict_json(p2)}});
  write_solution_csv(outDir / "solution.csv", data.mesh, u);
  log << "||u||_q = " << nq.luxemburg << "  ||u||_r = " << nr.luxemburg
      << "  [u]_W0 = " << nw.luxemburg << "\n";
  return (p1.pass && p2.pass) ? kExitOk : kExitNoConvergence;
}

int command_degree(const RunConfig& cfg, const fs::path& outDir, std::ostream& log) {
  DegreeProblem prob;
  prob.dim = cfg.degree.dim;
  prob.map = make_degree_map(cfg.degree.map, cfg.degree.params, cfg.degree.dim);
  prob.lo = cfg.degree.lo;
  prob.hi = cfg.degree.hi;
  prob.target = cfg.degree.target;
  prob.boundaryResolution = cfg.degree.boundaryResolution;

  const DegreeResult res = compute_degree(prob);
  write_json(outDir / "report.json",
             json{{"command", "degree"},
                  {"map", cfg.degree.map},
                  {"degree", res.degree},
                  {"certificate",
                   {{"minBoundaryDistance", res.minBoundaryDistance},
                    {"modulusEstimate", res.modulusEstimate},
                    {"samples", res.samples}}}});
  log << "degree " << res.degree << "  (min boundary distance " << res.minBoundaryDistance
      << ", modulus " << res.modulusEstimate << ", samples " << res.samples << ")\n";
  return kExitOk;
}

}  // namespace

int run_command(const std::string& command, RunConfig cfg, std::ostream& log) {
  fs::path outDir;
  try {
    apply_env_overrides(cfg);
    if (cfg.threads <= 0) cfg.threads = omp_get_max_threads();
    omp_set_num_threads(cfg.threads);
    cfg.solver.seed = cfg.seed;

    outDir = cfg.out;
    fs::create_directories(outDir);
    write_json(outDir / "manifest.json", json{{"version", kVersion},
                                              {"command", command},
                                              {"config", config_to_json(cfg)}});

    if (command == "solve") return command_solve(cfg, outDir, log, false);
    if (command == "continuation") return command_solve(cfg, outDir, log, true);
    if (command == "sweep") return command_sweep(cfg, outDir, log);
    if (command == "verify") return command_verify(cfg, outDir, log);
    if (command == "norms") return command_norms(cfg, outDir, log);
    if (command == "degree") return command_degree(cfg, outDir, log);
    throw ConfigError("unknown subcommand '" + command + "'");
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    if (!outDir.empty()) {
      std::error_code ec;
      fs::create_directories(outDir, ec);
      if (!ec) {
        try {
          write_json(outDir / "report.json",
                     json{{"command", command}, {"error", e.what()}});
        } catch (...) {
        }
      }
    }
    return kExitValidation;
  }
}

}  // namespace fpxl
