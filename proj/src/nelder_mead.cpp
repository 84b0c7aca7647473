// Copyright 2026 The ensdyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ensdyn/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ensdyn/errors.hpp"

namespace ensdyn {

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                             const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  if (n == 0) throw ValidationError("nelder_mead: empty parameter vector");
  int evaluations = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evaluations;
    const double v = f(x);
    // NaN compares false everywhere; push it to the bottom of the ordering.
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<Vertex> simplex;
  simplex.reserve(n + 1);
  simplex.push_back({x0, eval(x0)});
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x = x0;
    x[i] += options.initial_step;
    simplex.push_back({x, eval(x)});
  }
  auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };

  auto affine = [n](const std::vector<double>& c, const std::vector<double>& x, double t) {
    // c + t (x - c)
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = c[i] + t * (x[i] - c[i]);
    return out;
  };

  int iterations = 0;
  bool converged = false;
  while (true) {
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    double diameter = 0.0;
    for (std::size_t i = 1; i <= n; ++i) diameter = std::max(diameter, distance(simplex[i].x, simplex[0].x));
    if (diameter < options.diameter_tol) {
      converged = true;
      break;
    }
    if (iterations >= options.max_iters) break;
    ++iterations;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i] / static_cast<double>(n);
    }
    Vertex& worst = simplex[n];

    Vertex reflected{affine(centroid, worst.x, -1.0), 0.0};
    reflected.f = eval(reflected.x);
    if (reflected.f < simplex[0].f) {
      Vertex expanded{affine(centroid, worst.x, -2.0), 0.0};
      expanded.f = eval(expanded.x);
      worst = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
      continue;
    }
    if (reflected.f < simplex[n - 1].f) {
      worst = std::move(reflected);
      continue;
    }
    // Outside contraction when the reflection beat the worst, inside otherwise.
    const bool outside = reflected.f < worst.f;
    Vertex contracted{affine(centroid, outside ? reflected.x : worst.x, 0.5), 0.0};
    contracted.f = eval(contracted.x);
    if (contracted.f < (outside ? reflected.f : worst.f)) {
      worst = std::move(contracted);
      continue;
    }
    for (std::size_t v = 1; v <= n; ++v) {
      simplex[v].x = affine(simplex[0].x, simplex[v].x, 0.5);
      simplex[v].f = eval(simplex[v].x);
    }
  }
  std::stable_sort(simplex.begin(), simplex.end(), by_value);
  return {simplex[0].x, simplex[0].f, iterations, evaluations, converged};
}

}  // namespace ensdyn
