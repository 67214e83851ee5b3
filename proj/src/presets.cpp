#include "fpxl/presets.hpp"

#include <cmath>
#include <string>

#include "fpxl/errors.hpp"

namespace fpxl {

namespace {

double get(const std::map<std::string, double>& params, const std::string& key,
           const std::string& preset) {
  auto it = params.find(key);
  if (it == params.end())
    throw ConfigError("exponent preset '" + preset + "' needs parameter '" + key + "'");
  return it->second;
}

double get_or(const std::map<std::string, double>& params, const std::string& key, double dflt) {
  auto it = params.find(key);
  return it == params.end() ? dflt : it->second;
}

std::array<double, 2> center_of(const Box& box) {
  return {0.5 * box.extents[0], box.dim == 2 ? 0.5 * box.extents[1] : 0.0};
}

double dist_to(std::span<const double> x, const std::array<double, 2>& c) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - c[k]) * (x[k] - c[k]);
  return std::sqrt(s);
}

double coord_sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

}  // namespace

TwoPointFn make_two_point(const ExponentSpec& spec, const Box& box) {
  const auto& P = spec.params;
  if (spec.preset == "constant") {
    const double v = get(P, "value", spec.preset);
    return [v](std::span<const double>, std::span<const double>) { return v; };
  }
  if (spec.preset == "affine") {
    const double base = get(P, "base", spec.preset);
    const std::array<double, 2> g{get_or(P, "gx", 0.0), get_or(P, "gy", 0.0)};
    return [base, g](std::span<const double> x, std::span<const double> y) {
      double v = base;
      for (std::size_t k = 0; k < x.size(); ++k) v += 0.5 * g[k] * (x[k] + y[k]);
      return v;
    };
  }
  if (spec.preset == "radial") {
    const double base = get(P, "base", spec.preset);
    const double amp = get(P, "amp", spec.preset);
    const auto c = center_of(box);
    return [base, amp, c](std::span<const double> x, std::span<const double> y) {
      return base + 0.5 * amp * (dist_to(x, c) + dist_to(y, c));
    };
  }
  if (spec.preset == "separation") {
    const double base = get(P, "base", spec.preset);
    const double amp = get(P, "amp", spec.preset);
    return [base, amp](std::span<const double> x, std::span<const double> y) {
      double s = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
      return base + amp * std::sqrt(s);
    };
  }
  if (spec.preset == "oscillatory") {
    const double base = get(P, "base", spec.preset);
    const double amp = get(P, "amp", spec.preset);
    const double freq = get(P, "freq", spec.preset);
    return [base, amp, freq](std::span<const double> x, std::span<const double> y) {
      return base + 0.5 * amp * (std::sin(freq * coord_sum(x)) + std::sin(freq * coord_sum(y)));
    };
  }
  throw ConfigError("unknown two-point exponent preset '" + spec.preset +
                    "' (constant | affine | radial | separation | oscillatory)");
}

OnePointFn make_one_point(const ExponentSpec& spec, const Box& box) {
  const auto& P = spec.params;
  if (spec.preset == "constant") {
    const double v = get(P, "value", spec.preset);
    return [v](std::span<const double>) { return v; };
  }
  if (spec.preset == "affine") {
    const double base = get(P, "base", spec.preset);
    const std::array<double, 2> g{get_or(P, "gx", 0.0), get_or(P, "gy", 0.0)};
    return [base, g](std::span<const double> x) {
      double v = base;
      for (std::size_t k = 0; k < x.size(); ++k) v += g[k] * x[k];
      return v;
    };
  }
  if (spec.preset == "radial") {
    const double base = get(P, "base", spec.preset);
    const double amp = get(P, "amp", spec.preset);
    const auto c = center_of(box);
    return [base, amp, c](std::span<const double> x) { return base + amp * dist_to(x, c); };
  }
  throw ConfigError("unknown one-point exponent preset '" + spec.preset +
                    "' (constant | affine | radial)");
}

BoxMap make_degree_map(const std::string& preset, const std::map<std::string, double>& params,
                       int dim) {
  if (preset == "identity") {
    return [](std::span<const double> x, std::span<double> fx) {
      for (std::size_t k = 0; k < x.size(); ++k) fx[k] = x[k];
    };
  }
  if (preset == "negate") {
    return [](std::span<const double> x, std::span<double> fx) {
      for (std::size_t k = 0; k < x.size(); ++k) fx[k] = -x[k];
    };
  }
  if (preset == "zsquare") {
    if (dim != 2) throw ConfigError("zsquare map needs dim = 2");
    return [](std::span<const double> x, std::span<double> fx) {
      fx[0] = x[0] * x[0] - x[1] * x[1];
      fx[1] = 2.0 * x[0] * x[1];
    };
  }
  if (preset == "cubic") {
    if (dim != 1) throw ConfigError("cubic map needs dim = 1");
    const double a = get(params, "a", preset);
    const double b = get(params, "b", preset);
    const double c = get(params, "c", preset);
    return [a, b, c](std::span<const double> x, std::span<double> fx) {
      fx[0] = (x[0] - a) * (x[0] - b) * (x[0] - c);
    };
  }
  throw ConfigError("unknown degree map preset '" + preset +
                    "' (identity | negate | zsquare | cubic)");
}

}  // namespace fpxl
