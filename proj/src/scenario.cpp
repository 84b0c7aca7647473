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

#include "ensdyn/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "ensdyn/errors.hpp"
#include "ensdyn/random.hpp"

namespace ensdyn {

namespace {

// Rng streams of a scenario seed.
constexpr std::uint64_t kStateStream = 0;
constexpr std::uint64_t kBasisStream = 1;
constexpr std::uint64_t kSecondBasisStream = 2;
constexpr std::uint64_t kMapStream = 3;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json common_inputs(const ScenarioConfig& c) {
  json in = {{"scenario", to_string(c.scenario)},
             {"factor_dim", c.factor_dim},
             {"seed", c.seed},
             {"tolerance", c.tolerance}};
  if (c.measurement_basis) in["measurement_basis"] = to_json(*c.measurement_basis);
  return in;
}

}  // namespace

std::string to_string(Scenario s) { return s == Scenario::particle3d ? "particle3d" : "projection"; }

void ScenarioConfig::validate() const {
  if (factor_dim < 2) throw ValidationError("scenario: factor dimension must be at least 2");
  if (!(tolerance > 0.0)) throw ValidationError("scenario: tolerance must be positive");
}

double RunReport::deviation(const std::string& name) const {
  for (const auto& [k, v] : deviations) {
    if (k == name) return v;
  }
  throw ValidationError("RunReport: no deviation named " + name);
}

bool RunReport::verdict(const std::string& name) const {
  for (const auto& [k, v] : verdicts) {
    if (k == name) return v;
  }
  throw ValidationError("RunReport: no verdict named " + name);
}

json to_json(const RunReport& r) {
  json deviations = json::object();
  for (const auto& [k, v] : r.deviations) deviations[k] = v;
  json verdicts = json::object();
  for (const auto& [k, v] : r.verdicts) verdicts[k] = v;
  return {{"schema_version", kReportSchemaVersion},
          {"scenario", r.scenario},
          {"inputs", r.inputs},
          {"deviations", std::move(deviations)},
          {"verdicts", std::move(verdicts)},
          {"artifacts", r.artifacts},
          {"wall_time", r.wall_time}};
}

RunReport run_particle3d(const ScenarioConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  const int d = config.factor_dim;
  const int yz_dim = d * d;

  Rng map_rng(config.seed, kMapStream);
  const DynamicalMap map =
      config.map ? *config.map : DynamicalMap(unitary_channel(haar_unitary(yz_dim, map_rng), "random_unitary"));
  if (const auto md = map.dim(); md && *md != yz_dim) {
    std::ostringstream msg;
    msg << "particle3d: map acts on dimension " << *md << " but the (y, z) space has dimension " << yz_dim;
    throw ValidationError(msg.str());
  }

  Rng state_rng(config.seed, kStateStream);
  const TensorStructure structure({d, d, d});
  const Bipartite particle{haar_state(structure.total_dim(), state_rng), structure, FactorSubset{1, 2}};
  const DensityMatrix rho_yz = partial_trace(particle.state, structure, particle.kept);

  Rng basis_rng(config.seed, kBasisStream);
  Rng second_rng(config.seed, kSecondBasisStream);
  const SteeringBasis basis =
      config.measurement_basis ? *config.measurement_basis : SteeringBasis::from_columns(haar_unitary(d, basis_rng));
  const SteeringBasis second_basis = SteeringBasis::from_columns(haar_unitary(d, second_rng));

  const Ensemble steered = steer(particle, basis);
  const Ensemble second = steer(particle, second_basis);

  const double steering_dev =
      std::max(trace_distance(mixture_density(steered), rho_yz), trace_distance(mixture_density(second), rho_yz));
  const DensityMatrix evolved = evolve_ensemble(map, steered);
  const DensityMatrix evolved_second = evolve_ensemble(map, second);
  const DensityMatrix evolved_direct = apply_map(map, rho_yz);
  const double direct_dev = trace_distance(evolved, evolved_direct);
  const double decomp_dev = trace_distance(evolved, evolved_second);

  RunReport r;
  r.scenario = to_string(Scenario::particle3d);
  r.inputs = common_inputs(config);
  r.inputs["map"] = to_json(map);
  r.deviations = {{"steering_marginal", steering_dev},
                  {"componentwise_vs_direct", direct_dev},
                  {"decomposition_vs_decomposition", decomp_dev}};
  const double tol = config.tolerance;
  r.verdicts = {{"steering_preserves_marginal", steering_dev < tol},
                {"componentwise_matches_direct", direct_dev < tol},
                {"decomposition_independent", decomp_dev < tol},
                {"linear_consistent", steering_dev < tol && direct_dev < tol && decomp_dev < tol}};
  r.artifacts = {{"factor_structure", to_json(structure)},
                 {"measured_factors", json::array({0})},
                 {"state", to_json(particle.state)},
                 {"rho_yz", to_json(rho_yz)},
                 {"basis", to_json(basis)},
                 {"second_basis", to_json(second_basis)},
                 {"ensemble", to_json(steered)},
                 {"second_ensemble", to_json(second)},
                 {"evolved_componentwise", to_json(evolved)},
                 {"evolved_second", to_json(evolved_second)},
                 {"evolved_direct", to_json(evolved_direct)}};
  r.wall_time = seconds_since(start);
  return r;
}

RunReport run_projection_demo(const ScenarioConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  if (config.scenario != Scenario::projection) throw ValidationError("projection demo requires scenario = projection");
  const int d = config.factor_dim;
  const TensorStructure structure({d, d});

  Rng state_rng(config.seed, kStateStream);
  const PureState psi = config.initial_state ? *config.initial_state : haar_state(structure.total_dim(), state_rng);
  if (psi.dim() != structure.total_dim()) throw ValidationError("projection: initial state does not match (d, d)");
  const SteeringBasis basis = config.measurement_basis ? *config.measurement_basis : SteeringBasis::computational(d);
  if (static_cast<int>(basis.size()) != d) throw ValidationError("projection: the measurement on B must be maximal");

  const DensityMatrix joint = DensityMatrix::from_pure(psi);
  const DensityMatrix rho_a_in = partial_trace(joint, structure, FactorSubset{0});
  const auto records = collapse_measurement(joint, structure, FactorSubset{0}, basis);

  ComplexMatrix averaged = ComplexMatrix::Zero(d, d);
  double worst_product = 0.0;
  json outcomes = json::array();
  RunReport r;
  for (const auto& rec : records) {
    const DensityMatrix out_a = partial_trace(rec.post_state_joint, structure, FactorSubset{0});
    const DensityMatrix out_b = partial_trace(rec.post_state_joint, structure, FactorSubset{1});
    const double product_dev = trace_distance(rec.post_state_joint, tensor_product(out_a, out_b));
    worst_product = std::max(worst_product, product_dev);
    averaged += rec.probability * rec.post_state_kept.matrix();
    r.deviations.emplace_back("product_outcome_" + std::to_string(rec.outcome_index), product_dev);
    outcomes.push_back({{"outcome_index", rec.outcome_index},
                        {"probability", rec.probability},
                        {"rho_a_out", to_json(out_a)},
                        {"rho_b_out", to_json(out_b)},
                        {"joint", to_json(rec.post_state_joint)}});
  }
  const double marginal_dev = trace_distance(DensityMatrix(averaged), rho_a_in);

  r.scenario = to_string(Scenario::projection);
  r.inputs = common_inputs(config);
  if (config.initial_state) r.inputs["initial_state"] = to_json(*config.initial_state);
  r.deviations.insert(r.deviations.begin(), {{"product_outcome_max", worst_product}, {"averaged_marginal", marginal_dev}});
  r.verdicts = {{"outcomes_are_products", worst_product < config.tolerance},
                {"marginal_invariant", marginal_dev < config.tolerance}};
  r.artifacts = {{"factor_structure", to_json(structure)},
                 {"measured_factors", json::array({1})},
                 {"state", to_json(psi)},
                 {"basis", to_json(basis)},
                 {"rho_a_in", to_json(rho_a_in)},
                 {"outcomes", std::move(outcomes)}};
  r.wall_time = seconds_since(start);
  return r;
}

RunReport run_scenario(const ScenarioConfig& config) {
  return config.scenario == Scenario::particle3d ? run_particle3d(config) : run_projection_demo(config);
}

}  // namespace ensdyn
