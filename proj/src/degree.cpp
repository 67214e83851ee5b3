#include "fpxl/degree.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <numbers>
#include <string>

#include "fpxl/errors.hpp"

namespace fpxl {

namespace {

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

}  // namespace

DegreeResult degree_1d(const DegreeProblem& prob) {
  if (prob.dim != 1) throw ConfigError("degree_1d requires a one-dimensional problem");
  const double a = prob.lo[0], b = prob.hi[0];
  double fa = 0.0, fb = 0.0;
  prob.map(std::span<const double>(&a, 1), std::span<double>(&fa, 1));
  prob.map(std::span<const double>(&b, 1), std::span<double>(&fb, 1));
  fa -= prob.target[0];
  fb -= prob.target[0];

  DegreeResult res;
  res.samples = 2;
  res.minBoundaryDistance = std::min(std::abs(fa), std::abs(fb));
  res.modulusEstimate = 0.0;
  const double scale = std::max({1.0, std::abs(fa), std::abs(fb)});
  if (res.minBoundaryDistance <= 1e-12 * scale)
    throw BoundaryHit("target lies on the image of an interval endpoint", res.minBoundaryDistance,
                      1e-12 * scale);
  res.degree = (sign_of(fb) - sign_of(fa)) / 2;
  return res;
}

namespace {

struct LoopSample {
  double pos = 0.0;          // arclength-like parameter in [0,4)
  std::array<double, 2> w{}; // F(gamma(pos)) - target
};

// boundary loop of the box, counterclockwise, parameter in [0,4)
std::array<double, 2> loop_point(const DegreeProblem& prob, double pos) {
  const double lx = prob.lo[0], hx = prob.hi[0], ly = prob.lo[1], hy = prob.hi[1];
  const double f = pos - std::floor(pos / 4.0) * 4.0;
  if (f < 1.0) return {lx + f * (hx - lx), ly};
  if (f < 2.0) return {hx, ly + (f - 1.0) * (hy - ly)};
  if (f < 3.0) return {hx - (f - 2.0) * (hx - lx), hy};
  return {lx, hy - (f - 3.0) * (hy - ly)};
}

LoopSample eval_loop(const DegreeProblem& prob, double pos) {
  LoopSample s;
  s.pos = pos;
  const std::array<double, 2> x = loop_point(prob, pos);
  std::array<double, 2> fx{};
  prob.map(x, fx);
  s.w = {fx[0] - prob.target[0], fx[1] - prob.target[1]};
  return s;
}

double turn_angle(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::atan2(a[0] * b[1] - a[1] * b[0], a[0] * b[0] + a[1] * b[1]);
}

}  // namespace

DegreeResult degree_2d(const DegreeProblem& prob) {
  if (prob.dim != 2) throw ConfigError("degree_2d requires a two-dimensional problem");
  const int perEdge = std::max(prob.boundaryResolution, 4);
  long samples = 0;

  std::list<LoopSample> loop;
  for (int e = 0; e < 4; ++e)
    for (int k = 0; k < perEdge; ++k) {
      loop.push_back(eval_loop(prob, e + static_cast<double>(k) / perEdge));
      ++samples;
    }

  // refine until every step turns by less than pi/2 and the boundary
  // certificate (min distance > certFactor * largest image jump) holds
  constexpr double maxTurn = std::numbers::pi / 2.0;
  while (true) {
    bool refined = false;
    double minDist = std::numeric_limits<double>::infinity();
    double maxJump = 0.0;

    for (auto it = loop.begin(); it != loop.end();) {
      auto next = std::next(it);
      const LoopSample& s0 = *it;
      const LoopSample& s1 = next == loop.end() ? loop.front() : *next;
      minDist = std::min(minDist, std::hypot(s0.w[0], s0.w[1]));

      const double jump = std::hypot(s1.w[0] - s0.w[0], s1.w[1] - s0.w[1]);
      const bool tooSharp = std::abs(turn_angle(s0.w, s1.w)) >= maxTurn;
      if (tooSharp) {
        double mid = 0.5 * (s0.pos + (next == loop.end() ? s1.pos + 4.0 : s1.pos));
        if (samples >= prob.maxSamples)
          throw RefinementLimit("boundary refinement exceeded " +
                                std::to_string(prob.maxSamples) + " samples");
        loop.insert(next, eval_loop(prob, mid));
        ++samples;
        refined = true;
        continue;  // re-check the halved segment
      }
      maxJump = std::max(maxJump, jump);
      ++it;
    }

    if (refined) continue;
    if (minDist > prob.certFactor * maxJump) {
      DegreeResult res;
      res.minBoundaryDistance = minDist;
      res.modulusEstimate = maxJump;
      res.samples = samples;
      double total = 0.0;
      for (auto it = loop.begin(); it != loop.end(); ++it) {
        auto next = std::next(it);
        total += turn_angle(it->w, next == loop.end() ? loop.front().w : next->w);
      }
      const double winding = total / (2.0 * std::numbers::pi);
      res.degree = static_cast<int>(std::lround(winding));
      if (std::abs(winding - res.degree) > 0.25)
        throw RefinementLimit("winding sum did not close to an integer (" +
                              std::to_string(winding) + ")");
      return res;
    }

    // certificate failed: split the largest jumps, within budget
    bool split = false;
    for (auto it = loop.begin(); it != loop.end(); ++it) {
      auto next = std::next(it);
      const LoopSample& s0 = *it;
      const LoopSample& s1 = next == loop.end() ? loop.front() : *next;
      const double jump = std::hypot(s1.w[0] - s0.w[0], s1.w[1] - s0.w[1]);
      if (jump * prob.certFactor > minDist) {
        if (samples >= prob.maxSamples) {
          throw BoundaryHit("boundary certificate failed within the sample budget: min distance " +
                                std::to_string(minDist) + " vs modulus " + std::to_string(jump),
                            minDist, prob.certFactor * jump);
        }
        const double hiPos = next == loop.end() ? s1.pos + 4.0 : s1.pos;
        loop.insert(next, eval_loop(prob, 0.5 * (s0.pos + hiPos)));
        ++samples;
        split = true;
      }
    }
    if (!split)
      throw BoundaryHit("boundary certificate failed: min distance " + std::to_string(minDist),
                        0.0, 0.0);
  }
}

DegreeResult compute_degree(const DegreeProblem& prob) {
  return prob.dim == 1 ? degree_1d(prob) : degree_2d(prob);
}

namespace {

void locate_roots_2d(const DegreeProblem& prob, double tol, std::vector<std::vector<double>>& out,
                     int depth) {
  const double dx = prob.hi[0] - prob.lo[0];
  const double dy = prob.hi[1] - prob.lo[1];
  if (std::hypot(dx, dy) < tol) {
    out.push_back({prob.lo[0] + 0.5 * dx, prob.lo[1] + 0.5 * dy});
    return;
  }
  if (depth > 60) return;

  // split on the longer axis; wiggle the cut if a child boundary is not
  // certifiable (a root sitting on the cut line)
  const int axis = dx >= dy ? 0 : 1;
  for (double shift : {0.0, 0.031, -0.047, 0.083, -0.117}) {
    const double cut = prob.lo[axis] + (0.5 + shift) * (axis == 0 ? dx : dy);
    DegreeProblem left = prob;
    DegreeProblem right = prob;
    left.hi[axis] = cut;
    right.lo[axis] = cut;
    try {
      const int dLeft = degree_2d(left).degree;
      const int dRight = degree_2d(right).degree;
      if (dLeft != 0) locate_roots_2d(left, tol, out, depth + 1);
      if (dRight != 0) locate_roots_2d(right, tol, out, depth + 1);
      return;
    } catch (const BoundaryHit&) {
      continue;  // try the next cut position
    }
  }
}

}  // namespace

std::vector<std::vector<double>> locate_roots(const DegreeProblem& prob, double tol) {
  std::vector<std::vector<double>> out;
  if (prob.dim == 1) {
    const int cells = std::max(prob.boundaryResolution, 8) * 8;
    const double a = prob.lo[0], b = prob.hi[0];
    auto f = [&](double x) {
      double fx = 0.0;
      prob.map(std::span<const double>(&x, 1), std::span<double>(&fx, 1));
      return fx - prob.target[0];
    };
    double x0 = a, f0 = f(a);
    for (int k = 1; k <= cells; ++k) {
      const double x1 = a + (b - a) * k / cells;
      const double f1 = f(x1);
      if (f0 == 0.0) out.push_back({x0});
      if (f0 * f1 < 0.0) {
        double lo = x0, hi = x1, flo = f0;
        while (hi - lo > tol) {
          const double mid = 0.5 * (lo + hi);
          const double fm = f(mid);
          if (fm == 0.0) {
            lo = hi = mid;
            break;
          }
          if (flo * fm < 0.0)
            hi = mid;
          else {
            lo = mid;
            flo = fm;
          }
        }
        out.push_back({0.5 * (lo + hi)});
      }
      x0 = x1;
      f0 = f1;
    }
    if (f0 == 0.0) out.push_back({x0});
    return out;
  }
  locate_roots_2d(prob, tol, out, 0);
  return out;
}

HomotopyVerdict verify_homotopy_invariance(const ProblemData& data, const SolverConfig& cfg) {
  cfg.validate();
  const std::size_t dim = data.mesh.interiorCount();
  if (dim == 0 || dim > 2)
    throw ConfigError("homotopy audit needs a coarse mesh with 1 or 2 interior unknowns, got " +
                      std::to_string(dim));

  const double innerTol = cfg.tol * cfg.innerTolFactor;
  auto homotopy_map = [&](double t) {
    return BoxMap([&data, innerTol, t, maxIter = cfg.innerMaxIter](std::span<const double> v,
                                                                   std::span<double> out) {
      const GridFunction vFull = data.mesh.injectInterior(v);
      const GridFunction u = apply_T(DualVector(vFull.values), data, innerTol, maxIter);
      const DualVector su = apply_S(u, data);
      const auto interior = data.mesh.interiorNodes();
      for (std::size_t k = 0; k < interior.size(); ++k) out[k] = v[k] + t * su[interior[k]];
    });
  };

  HomotopyVerdict verdict;
  verdict.ts = {0.0, 0.25, 0.5, 0.75, 1.0};

  // picard solution fixes the scale of the root ball
  const SolveReport picard = solve_picard(data, cfg);
  const DualVector lu = apply_L(picard.u, data);
  const std::vector<double> vPicard = data.mesh.restrictInterior(lu.span());

  double radius = 2.0 * std::max(1.0, sup_norm(vPicard));
  for (int attempt = 0; attempt <= 5; ++attempt) {
    verdict.radius = radius;
    verdict.enlargements = attempt;
    verdict.degrees.clear();
    try {
      for (double t : verdict.ts) {
        DegreeProblem prob;
        prob.map = homotopy_map(t);
        prob.dim = static_cast<int>(dim);
        prob.lo = {-radius, -radius};
        prob.hi = {radius, radius};
        prob.boundaryResolution = dim == 1 ? 2 : 24;
        verdict.degrees.push_back(compute_degree(prob).degree);
      }

      DegreeProblem prob;
      prob.map = homotopy_map(1.0);
      prob.dim = static_cast<int>(dim);
      prob.lo = {-radius, -radius};
      prob.hi = {radius, radius};
      prob.boundaryResolution = dim == 1 ? 64 : 24;
      const auto roots = locate_roots(prob, std::max(cfg.tol * 1e-2, 1e-13));
      verdict.rootFound = !roots.empty();

      verdict.rootMatchSup = std::numeric_limits<double>::infinity();
      for (const auto& root : roots) {
        const GridFunction vFull = data.mesh.injectInterior(root);
        const GridFunction uRoot = apply_T(DualVector(vFull.values), data, innerTol,
                                           cfg.innerMaxIter);
        double diff = 0.0;
        for (std::size_t i = 0; i < uRoot.size(); ++i)
          diff = std::max(diff, std::abs(uRoot[i] - picard.u[i]));
        if (diff < verdict.rootMatchSup) {
          verdict.rootMatchSup = diff;
          verdict.rootAtOne = root;
        }
      }

      bool allOne = !verdict.degrees.empty();
      for (int d : verdict.degrees) allOne = allOne && d == 1;
      verdict.pass = allOne && verdict.rootFound &&
                     picard.status == SolveStatus::Converged &&
                     verdict.rootMatchSup <= 10.0 * cfg.tol;
      return verdict;
    } catch (const BoundaryHit&) {
      radius *= 2.0;  // the tracked roots outgrew the ball; enlarge and retry
    }
  }
  verdict.pass = false;
  return verdict;
}

}  // namespace fpxl
