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

#include <filesystem>
#include <string>

#include "ensdyn/dynamics.hpp"
#include "ensdyn/ensembles.hpp"
#include "ensdyn/qstatics.hpp"

namespace ensdyn::testing {

inline std::string source_path(const std::string& relative) {
  return (std::filesystem::path(ENSDYN_SOURCE_DIR) / relative).string();
}

inline PureState ket(std::initializer_list<Complex> amps) {
  ComplexVector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (auto a : amps) v(i++) = a;
  return PureState::normalized(v);
}

inline PureState bell() { return ket({1, 0, 0, 1}); }
inline PureState plus() { return ket({1, 1}); }
inline PureState minus() { return ket({1, -1}); }

inline DensityMatrix diag2(double a, double b) {
  const double p[] = {a, b};
  return DensityMatrix::diagonal(p);
}

inline Weinberg qubit_weinberg(double eps = 1.0, double t = 1.0, int steps = 1000) {
  return Weinberg{pauli_x(), pauli_z(), eps, t, steps};
}

}  // namespace ensdyn::testing
