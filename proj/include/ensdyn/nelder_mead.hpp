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

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ensdyn {

struct NelderMeadOptions {
  double initial_step = 0.5;
  int max_iters = 200;
  /// Stop when every vertex lies within this distance of the best vertex.
  double diameter_tol = 1e-6;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value;
  int iterations;
  int evaluations;
  bool converged;
};

/// Derivative-free minimization with the standard reflection (1),
/// expansion (2), contraction (1/2) and shrink (1/2) coefficients. The
/// returned point is the best one evaluated.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                             const NelderMeadOptions& options = {});

}  // namespace ensdyn
