#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fpxl/operators.hpp"
#include "fpxl/rng.hpp"

namespace fpxl {

enum class Strategy { Minimize, Picard, Continuation };

Strategy parse_strategy(const std::string& name);
std::string strategy_name(Strategy s);

struct SolverConfig {
  Strategy strategy = Strategy::Minimize;
  int maxIter = 20000;
  double tol = 1e-9;        // sup-norm residual of the weak form
  double damping = 0.5;     // in (0,1]
  int continuationSteps = 11;
  std::string seedFunction = "bump";  // zero | constant | random | bump
  std::uint64_t seed = 1;             // stream for the random seed preset
  double innerTolFactor = 1e-2;       // T is solved to tol * innerTolFactor
  int innerMaxIter = 200000;

  void validate() const;
};

enum class SolveStatus { Converged, NoConvergence, Diverged, ContinuationStall };

std::string status_name(SolveStatus s);

/// One entry of the iteration trace.
struct TrajectoryPoint {
  double residual = 0.0;
  double energy = 0.0;
};

/// Outcome of the a priori bound check on a solution with ||u||_W0 > 1:
///   ||u||_W0^{p-}  <=  A ||u||_W0^{q+} + B ||u||_W0^{r+}
/// with A, B assembled from sampled embedding constants and |lambda|. For
/// ||u||_W0 <= 1 the bound is trivial and branch = "trivial"; non-solutions
/// (residual above the gate) are refused.
struct AprioriRecord {
  std::string branch;  // "chain" | "trivial" | "refused"
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double normW0 = 0.0;
  double pairing = 0.0;  // <Lu, u> = rho(u), the middle of the chain
  double embedQ = 0.0;
  double embedR = 0.0;
  double residualGate = 0.0;
};

struct SolveReport {
  GridFunction u;
  SolveStatus status = SolveStatus::NoConvergence;
  int iterations = 0;
  double residual = 0.0;  // recomputed from the returned u, never trusted from the loop
  double energy = 0.0;
  double normW0 = 0.0;
  double normQ = 0.0;
  double normR = 0.0;
  bool nontrivial = false;  // ||u||_inf > 100 tol
  double tol = 0.0;
  std::size_t interiorNodes = 0;  // truncation metadata
  std::size_t collarNodes = 0;
  std::optional<AprioriRecord> apriori;
  std::vector<TrajectoryPoint> trajectory;
  double stallT = -1.0;  // continuation only: last t that failed (-1 = none)
};

/// Seed presets on the admissible subspace (zero collar values).
GridFunction seed_function(const std::string& name, const Mesh& mesh, Rng& rng);

/// Energy descent (monotone, Armijo backtracking) from the configured seed.
SolveReport solve_minimize(const ProblemData& data, const SolverConfig& cfg);

/// Damped fixed-point iteration v <- (1-d) v - d S(T(v)) on the dual of the
/// unknown space; returns u = T(v). Divergence (||v|| beyond 1e6 x initial
/// scale) is reported as Diverged.
SolveReport solve_picard(const ProblemData& data, const SolverConfig& cfg);

/// Path following for H(t,v) = v + t S(T(v)) on a uniform t-grid, warm
/// starting each inner solve from the previous root; the t=0 root is v=0
/// exactly. The first positive step starts from the seed's dual image, since
/// v=0 solves H(t,.)=0 for every t and would otherwise trap the path on the
/// trivial branch.
SolveReport solve_continuation(const ProblemData& data, const SolverConfig& cfg);

SolveReport solve(const ProblemData& data, const SolverConfig& cfg);

/// Evaluate the a priori bound chain on a reported solution. Refuses inputs
/// whose recomputed residual exceeds `residualGate` (default 10 x report tol).
AprioriRecord verify_apriori(const SolveReport& report, const ProblemData& data, Rng& rng,
                             double residualGate = 0.0);

struct SweepRow {
  double lambda = 0.0;
  SolveStatus status = SolveStatus::NoConvergence;
  double residual = 0.0;
  double energy = 0.0;
  double normW0 = 0.0;
  double supNorm = 0.0;
  bool nontrivial = false;
  bool aprioriHolds = false;
  std::string aprioriBranch;
};

/// Solve the same instance across a lambda range (solves run concurrently,
/// rows returned in lambda order).
std::vector<SweepRow> sweep_lambda(const ProblemData& base, std::span<const double> lambdas,
                                   const SolverConfig& cfg);

}  // namespace fpxl
