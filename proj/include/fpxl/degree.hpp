#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "fpxl/operators.hpp"
#include "fpxl/solver.hpp"

namespace fpxl {

/// Continuous map R^n -> R^n, n in {1,2}: writes F(x) into fx.
using BoxMap = std::function<void(std::span<const double> x, std::span<double> fx)>;

/// Degree problem on an axis-aligned box region. The target must stay away
/// from the image of the boundary: certification requires
///   min_boundary |F - h| > certFactor * (sampling modulus estimate),
/// where the modulus estimate is the largest image jump between adjacent
/// boundary samples. Sampling evidence, not a proof.
struct DegreeProblem {
  BoxMap map;
  int dim = 1;
  std::array<double, 2> lo{-1.0, -1.0};
  std::array<double, 2> hi{1.0, 1.0};
  std::array<double, 2> target{0.0, 0.0};
  int boundaryResolution = 128;  // initial samples per edge
  long maxSamples = 1L << 20;
  double certFactor = 10.0;
};

struct DegreeResult {
  int degree = 0;
  double minBoundaryDistance = 0.0;
  double modulusEstimate = 0.0;
  long samples = 0;
};

/// n = 1: (sign(F(b)-h) - sign(F(a)-h)) / 2, after certifying both endpoints.
DegreeResult degree_1d(const DegreeProblem& prob);

/// n = 2: winding number of F(gamma(t)) - h along the boundary loop, with
/// adaptive refinement until every step turns by less than pi/2. Throws
/// RefinementLimit past maxSamples and BoundaryHit when certification fails.
DegreeResult degree_2d(const DegreeProblem& prob);

DegreeResult compute_degree(const DegreeProblem& prob);

/// Existence axiom, constructively: when the degree over the box is nonzero,
/// subdivision descends into a child of nonzero degree until the box is
/// smaller than tol. Returns midpoints of all root boxes found at the finest
/// level (1d scans sign changes and returns every root).
std::vector<std::vector<double>> locate_roots(const DegreeProblem& prob, double tol);

/// Finite-dimensional homotopy audit of H(t,v) = v + t S(T(v)) on a coarse
/// mesh with <= 2 interior unknowns: the degree over a ball holding all
/// tracked roots must be 1 at every t in {0, .25, .5, .75, 1}, a root must
/// exist at t = 1 (existence axiom), and that root must match solve_picard.
/// BoundaryHit enlarges the ball, up to 5 doublings.
struct HomotopyVerdict {
  bool pass = false;
  std::vector<double> ts;
  std::vector<int> degrees;
  double radius = 0.0;
  int enlargements = 0;
  std::vector<double> rootAtOne;   // interior coordinates of the matched root
  double rootMatchSup = 0.0;       // sup distance to the picard solution (u-space)
  bool rootFound = false;
};

HomotopyVerdict verify_homotopy_invariance(const ProblemData& data, const SolverConfig& cfg);

}  // namespace fpxl
