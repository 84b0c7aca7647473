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

// Scenario runners: the three-freedom particle experiment (remote
// preparation of the (y, z) momentum factors by a measurement on x) and the
// projection/disentanglement demonstration on a bipartite pure state.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ensdyn/dynamics.hpp"
#include "ensdyn/ensembles.hpp"
#include "ensdyn/io.hpp"

namespace ensdyn {

inline constexpr int kReportSchemaVersion = 1;

enum class Scenario { particle3d, projection };
std::string to_string(Scenario s);

struct ScenarioConfig {
  Scenario scenario = Scenario::particle3d;
  /// Discretization of each continuous momentum component.
  int factor_dim = 4;
  /// Dynamics of the (y, z) factors; particle3d defaults to a seeded random
  /// unitary channel when empty.
  std::optional<DynamicalMap> map;
  /// Measurement on x (particle3d) or on B (projection).
  std::optional<SteeringBasis> measurement_basis;
  /// Initial joint state for the projection demo; seeded Haar state if empty.
  std::optional<PureState> initial_state;
  std::uint64_t seed = 0;
  double tolerance = 1e-8;

  /// Throws ValidationError for d < 2 or tolerance <= 0.
  void validate() const;
};

struct RunReport {
  std::string scenario;
  json inputs;
  std::vector<std::pair<std::string, double>> deviations;
  std::vector<std::pair<std::string, bool>> verdicts;
  json artifacts;
  double wall_time = 0.0;

  double deviation(const std::string& name) const;
  bool verdict(const std::string& name) const;
};

json to_json(const RunReport& r);

/// Seeded pure state on (d, d, d); steers the (y, z) marginal by measuring
/// x in the configured (or seeded) basis and in a second seeded basis, then
/// reports the steering-marginal, componentwise-vs-direct and
/// decomposition-vs-decomposition trace distances.
RunReport run_particle3d(const ScenarioConfig& config);

/// Maximal measurement on B of an entangled pure state on (d, d): reports
/// per-outcome product deviations and the deviation of the outcome-averaged
/// A-marginal from the pre-measurement marginal.
RunReport run_projection_demo(const ScenarioConfig& config);

RunReport run_scenario(const ScenarioConfig& config);

}  // namespace ensdyn
