#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace fpxl::detail {

// Monotone first-order descent: Barzilai-Borwein step proposal guarded by
// Armijo backtracking. Monotonicity matters twice over: accepted steps must
// not increase the objective (reported trajectories assert it) and the
// backtracking survives the unbounded curvature the pair terms have at
// coincident nodal values when p < 2.
struct DescentProblem {
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;
};

struct DescentOptions {
  double gradTol = 1e-9;  // sup-norm of the gradient
  int maxIter = 50000;
  double initialStep = 1.0;
  double armijo = 1e-4;
  double shrink = 0.5;
  int maxBacktracks = 80;
  std::function<void(int, double, double)> onIterate;  // iter, gradSup, value
};

struct DescentOutcome {
  std::vector<double> x;
  double value = 0.0;
  double gradSup = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline DescentOutcome descend(const DescentProblem& prob, std::vector<double> x0,
                              const DescentOptions& opt) {
  const std::size_t n = x0.size();
  DescentOutcome out;
  out.x = std::move(x0);

  std::vector<double> g(n), xNew(n), gNew(n);
  prob.gradient(out.x, g);
  out.value = prob.value(out.x);

  double step = opt.initialStep;
  for (int it = 0; it <= opt.maxIter; ++it) {
    out.gradSup = 0.0;
    double gg = 0.0;
    for (double gi : g) {
      out.gradSup = std::max(out.gradSup, std::abs(gi));
      gg += gi * gi;
    }
    if (opt.onIterate) opt.onIterate(it, out.gradSup, out.value);
    out.iterations = it;
    if (out.gradSup <= opt.gradTol) {
      out.converged = true;
      return out;
    }
    if (it == opt.maxIter) break;

    double t = std::clamp(step, 1e-14, 1e14);
    double fNew = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < opt.maxBacktracks; ++bt) {
      for (std::size_t i = 0; i < n; ++i) xNew[i] = out.x[i] - t * g[i];
      fNew = prob.value(xNew);
      // the ulp-scale band keeps the search alive once the decrease per step
      // falls below the rounding resolution of the objective
      const double band = 4e-16 * (std::abs(out.value) + std::abs(fNew));
      if (fNew <= out.value - opt.armijo * t * gg + band) {
        accepted = true;
        break;
      }
      t *= opt.shrink;
    }
    if (!accepted) break;  // no progress at the smallest step

    prob.gradient(xNew, gNew);
    double sy = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = xNew[i] - out.x[i];
      const double y = gNew[i] - g[i];
      ss += s * s;
      sy += s * y;
    }
    step = sy > 0.0 ? ss / sy : t * 2.0;  // BB1, else grow the accepted step

    out.x.swap(xNew);
    g.swap(gNew);
    out.value = fNew;
  }
  return out;
}

}  // namespace fpxl::detail
