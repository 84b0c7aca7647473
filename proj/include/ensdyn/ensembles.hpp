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

// Probabilistic mixtures {p_i, |psi_i>} of pure states, the unitary freedom
// relating all mixtures of one density matrix, and remote preparation of a
// chosen mixture by a rank-1 projective measurement on complementary
// degrees of freedom.

#include <optional>
#include <vector>

#include "ensdyn/qstatics.hpp"

namespace ensdyn {

struct EnsembleMember {
  double weight;
  PureState state;
};

/// Weighted list of pure states of one dimension. Members with weight below
/// tol::kRank are dropped on construction; the remaining weights must sum to
/// 1 within 1e-10 and are rescaled to sum to 1 exactly (up to rounding).
class Ensemble {
 public:
  explicit Ensemble(std::vector<EnsembleMember> members);

  int dim() const { return members_.front().state.dim(); }
  std::size_t size() const { return members_.size(); }
  const std::vector<EnsembleMember>& members() const { return members_; }
  const EnsembleMember& operator[](std::size_t i) const { return members_[i]; }

 private:
  std::vector<EnsembleMember> members_;
};

/// Orthonormal rank-1 measurement vectors on the complement factor space.
class SteeringBasis {
 public:
  explicit SteeringBasis(std::vector<PureState> vectors);

  /// Computational basis of the given dimension.
  static SteeringBasis computational(int dim);
  /// Columns of a unitary (or isometry) as basis vectors.
  static SteeringBasis from_columns(const ComplexMatrix& columns);

  int dim() const { return vectors_.front().dim(); }
  std::size_t size() const { return vectors_.size(); }
  const std::vector<PureState>& vectors() const { return vectors_; }

 private:
  std::vector<PureState> vectors_;
};

/// One branch of a projective measurement on the complement.
struct OutcomeRecord {
  int outcome_index;
  double probability;
  /// Post-measurement state of the kept factors. Mixed whenever the joint
  /// input was mixed; `kept_pure` is set when it has rank one.
  DensityMatrix post_state_kept;
  std::optional<PureState> kept_pure;
  /// Post-measurement joint state in the original factor order; always
  /// post_state_kept (x) |b_i><b_i| up to the factor relabeling.
  DensityMatrix post_state_joint;
};

/// A purification together with the partition of its factors into the kept
/// set A and the measured complement.
struct Bipartite {
  PureState state;
  TensorStructure structure;
  FactorSubset kept;
};

DensityMatrix mixture_density(const Ensemble& e);
bool ensembles_equivalent(const Ensemble& e1, const Ensemble& e2, double tol);

/// Spectral decomposition of rho as an ensemble (eigenvalues above
/// tol::kRank, in nondecreasing eigenvalue order).
Ensemble eigen_ensemble(const DensityMatrix& rho);

/// Members sqrt(p_i)|psi_i> = sum_k V[i,k] sqrt(lambda_k)|e_k> for an m x r
/// isometry V, r = rank(rho), using the order of eigen_ensemble.
Ensemble hjw_ensemble(const DensityMatrix& rho, const ComplexMatrix& isometry);

/// Schmidt-diagonal purification sum_k sqrt(lambda_k)|e_k>|k> of rho with
/// complement dimension max(rank, min_complement_dim, 2). The kept factor
/// is factor 0.
Bipartite canonical_purification(const DensityMatrix& rho, int min_complement_dim = 0);

/// Measurement basis on the complement that steers the kept factors to
/// exactly `target`. Throws ValidationError when the target's density matrix
/// is not the kept marginal (message carries the trace distance) or when the
/// complement is too small to host one outcome per member.
SteeringBasis design_steering(const Bipartite& purification, const Ensemble& target);

/// Conditional states <b_i|Psi> / sqrt(p_i) of the kept factors.
Ensemble steer(const Bipartite& purification, const SteeringBasis& basis);

/// Projective measurement {I_A (x) |b_i><b_i|} of a joint state on the
/// complement of `kept`. Zero-probability outcomes are omitted.
std::vector<OutcomeRecord> collapse_measurement(const DensityMatrix& joint,
                                                const TensorStructure& structure,
                                                const FactorSubset& kept,
                                                const SteeringBasis& basis);

/// Greedy maximal-overlap matching; result[i] is the index in `b` matched to
/// member i of `a`, or -1 when `b` ran out. Ties go to the lower index.
std::vector<int> match_members(const Ensemble& a, const Ensemble& b);

/// Worst per-member infidelity (1 - |<a|b>|^2) and weight error after
/// matching. Unmatched members count as infidelity 1.
struct EnsembleComparison {
  double max_infidelity;
  double max_weight_error;
};
EnsembleComparison compare_ensembles(const Ensemble& a, const Ensemble& b);

}  // namespace ensdyn
