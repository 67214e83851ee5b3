#pragma once

#include <map>
#include <string>

#include "fpxl/degree.hpp"
#include "fpxl/exponents.hpp"

namespace fpxl {

/// Named exponent preset plus parameters, as written in config files.
///
/// Two-point presets (for p):
///   constant    {value}
///   affine      {base, gx [, gy]}      base + sum_k g_k (x_k + y_k) / 2
///   radial      {base, amp}            base + amp (|x - c| + |y - c|) / 2, c = box center
///   separation  {base, amp}            base + amp |x - y|
///   oscillatory {base, amp, freq}      base + amp (sin(freq sum x) + sin(freq sum y)) / 2
///
/// One-point presets (for r, and the q-side of norms):
///   constant    {value}
///   affine      {base, gx [, gy]}      base + sum_k g_k x_k
///   radial      {base, amp}            base + amp |x - c|
struct ExponentSpec {
  std::string preset = "constant";
  std::map<std::string, double> params{{"value", 2.0}};
};

TwoPointFn make_two_point(const ExponentSpec& spec, const Box& box);
OnePointFn make_one_point(const ExponentSpec& spec, const Box& box);

/// Degree map presets for the CLI:
///   identity | negate        any dim
///   zsquare                  dim 2, (x^2 - y^2, 2xy)
///   cubic {a, b, c}          dim 1, (x-a)(x-b)(x-c)
BoxMap make_degree_map(const std::string& preset, const std::map<std::string, double>& params,
                       int dim);

}  // namespace fpxl
