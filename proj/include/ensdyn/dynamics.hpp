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

// Candidate dynamical maps on density matrices: Kraus channels, two
// nonlinear families, and opaque wrappers; componentwise evolution of
// ensembles; and embedding of local channels into a factored space.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ensdyn/ensembles.hpp"
#include "ensdyn/qstatics.hpp"
#include "ensdyn/random.hpp"

namespace ensdyn {

/// rho -> sum_k K_k rho K_k^dagger with sum_k K_k^dagger K_k = I within 1e-10.
class KrausChannel {
 public:
  KrausChannel(std::vector<ComplexMatrix> operators, std::string label = "channel");

  int dim() const { return static_cast<int>(operators_.front().cols()); }
  const std::vector<ComplexMatrix>& operators() const { return operators_; }
  const std::string& label() const { return label_; }

 private:
  std::vector<ComplexMatrix> operators_;
  std::string label_;
};

/// sigma -> sigma^k / Tr(sigma^k). Pure states are fixed points.
struct PurityPower {
  int k = 2;
};

/// i d psi/dt = (H + eps <psi|V|psi> V) psi, integrated over `duration` with
/// `steps` classical RK4 steps.
struct Weinberg {
  ComplexMatrix h;
  ComplexMatrix v;
  double eps = 0.0;
  double duration = 1.0;
  int steps = 1000;

  int dim() const { return static_cast<int>(h.rows()); }
};

/// Default step count: 1000 per unit time, at least one.
int default_weinberg_steps(double duration);

class NonlinearMap {
 public:
  explicit NonlinearMap(PurityPower p);
  explicit NonlinearMap(Weinberg w);

  const std::variant<PurityPower, Weinberg>& family() const { return family_; }
  std::string family_name() const;

 private:
  std::variant<PurityPower, Weinberg> family_;
};

/// Opaque map: only its dimension and an application function are visible.
/// The function's raw output is validated by apply_map.
struct Blackbox {
  std::optional<int> dim;
  std::function<ComplexMatrix(const DensityMatrix&)> apply;
};

enum class MapKind { channel, nonlinear, opaque };

class DynamicalMap {
 public:
  DynamicalMap(KrausChannel channel);     // NOLINT(google-explicit-constructor)
  DynamicalMap(NonlinearMap nonlinear);   // NOLINT(google-explicit-constructor)
  DynamicalMap(Blackbox blackbox);        // NOLINT(google-explicit-constructor)

  MapKind kind() const;
  /// "channel", "nonlinear" or "opaque".
  std::string kind_name() const;
  /// Dimension the map acts on; empty for dimension-agnostic families.
  std::optional<int> dim() const;
  /// Structural accessors; null for other kinds (always null when opaque).
  const KrausChannel* channel() const { return std::get_if<KrausChannel>(&impl_); }
  const NonlinearMap* nonlinear() const { return std::get_if<NonlinearMap>(&impl_); }

  const std::variant<KrausChannel, NonlinearMap, Blackbox>& impl() const { return impl_; }

 private:
  std::variant<KrausChannel, NonlinearMap, Blackbox> impl_;
};

// Standard channels.
KrausChannel identity_channel(int dim);
KrausChannel unitary_channel(const ComplexMatrix& u, std::string label = "unitary");
/// Qubit channel with Kraus operators {I, X, Y, Z} / 2.
KrausChannel depolarizing_channel();
KrausChannel amplitude_damping_channel(double gamma);
/// Random channel with `kraus_count` operators sliced from a Haar isometry.
KrausChannel random_channel(int dim, int kraus_count, Rng& rng);

/// rho -> rho^T, as an opaque map (linear, trace preserving, not CP).
DynamicalMap transpose_map(int dim);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// Hides `secret` behind an application function; structural accessors of
/// the result report "opaque".
DynamicalMap make_blackbox(DynamicalMap secret);

/// Applies the map and validates the output: deviations from Hermiticity,
/// unit trace or positivity up to 1e-10 are absorbed (hermitized and
/// renormalized); larger deviations raise MapFault. Weinberg maps act on
/// mixed inputs eigencomponent by eigencomponent.
DensityMatrix apply_map(const DynamicalMap& map, const DensityMatrix& rho);
/// g(|psi><psi|); Weinberg maps integrate the pure state directly.
DensityMatrix apply_map(const DynamicalMap& map, const PureState& psi);

/// Raw RK4 integration without renormalization.
ComplexVector weinberg_integrate(const Weinberg& w, const ComplexVector& psi);
/// Integrated state, renormalized when the norm drift exceeds the PureState
/// tolerance.
PureState weinberg_evolve(const Weinberg& w, const PureState& psi);
PureState weinberg_evolve(const NonlinearMap& map, const PureState& psi);

/// sum_i p_i g(|psi_i><psi_i|).
DensityMatrix evolve_ensemble(const DynamicalMap& map, const Ensemble& e);

/// g_A (x) id on `structure`, acting on the factors in `acting_on`. Only
/// channels embed; nonlinear and opaque maps are rejected.
DynamicalMap embed_local(const DynamicalMap& map, const TensorStructure& structure, const FactorSubset& acting_on);

}  // namespace ensdyn
