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

#include "ensdyn/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ensdyn/errors.hpp"

namespace ensdyn {

namespace {

constexpr double kWeightSumTolerance = 1e-10;
constexpr double kSteeringTolerance = 1e-10;

using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Amplitudes of the purification arranged as M(a, b) with a indexing the
// kept factors and b the complement, both in original factor order.
struct SchmidtView {
  Regrouping regrouping;
  int kept_dim;
  int complement_dim;
  ComplexMatrix amplitudes;
};

SchmidtView schmidt_view(const Bipartite& p) {
  if (p.state.dim() != p.structure.total_dim()) {
    throw ValidationError("purification dimension does not match its tensor structure");
  }
  Regrouping rg = bipartition(p.structure, p.kept);
  const int da = rg.structure.dim(0);
  const int db = rg.structure.dim(1);
  const ComplexVector v = relabel(p.state.amplitudes(), rg.index_map);
  ComplexMatrix m = Eigen::Map<const RowMajorMatrix>(v.data(), da, db);
  return {std::move(rg), da, db, std::move(m)};
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return (m + m.adjoint()) * 0.5; }

}  // namespace

Ensemble::Ensemble(std::vector<EnsembleMember> members) {
  if (members.empty()) throw ValidationError("Ensemble: no members");
  const int dim = members.front().state.dim();
  double total = 0.0;
  for (auto& m : members) {
    if (!std::isfinite(m.weight) || m.weight < 0.0) throw ValidationError("Ensemble: weights must be finite and nonnegative");
    if (m.state.dim() != dim) throw ValidationError("Ensemble: member states differ in dimension");
    if (m.weight < tol::kRank) continue;
    total += m.weight;
    members_.push_back(std::move(m));
  }
  if (members_.empty() || std::abs(total - 1.0) > kWeightSumTolerance) {
    std::ostringstream msg;
    msg << "Ensemble: weights sum to " << total << ", not 1";
    throw ValidationError(msg.str());
  }
  for (auto& m : members_) m.weight /= total;
}

SteeringBasis::SteeringBasis(std::vector<PureState> vectors) : vectors_(std::move(vectors)) {
  if (vectors_.empty()) throw ValidationError("SteeringBasis: no vectors");
  const int dim = vectors_.front().dim();
  if (static_cast<int>(vectors_.size()) > dim) throw ValidationError("SteeringBasis: more vectors than dimensions");
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    if (vectors_[i].dim() != dim) throw ValidationError("SteeringBasis: vectors differ in dimension");
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(vectors_[j].amplitudes().dot(vectors_[i].amplitudes())) > kSteeringTolerance) {
        throw ValidationError("SteeringBasis: vectors are not orthonormal");
      }
    }
  }
}

SteeringBasis SteeringBasis::computational(int dim) {
  std::vector<PureState> v;
  for (int i = 0; i < dim; ++i) v.push_back(PureState::basis(dim, i));
  return SteeringBasis(std::move(v));
}

SteeringBasis SteeringBasis::from_columns(const ComplexMatrix& columns) {
  std::vector<PureState> v;
  for (Eigen::Index j = 0; j < columns.cols(); ++j) v.push_back(PureState::normalized(columns.col(j)));
  return SteeringBasis(std::move(v));
}

DensityMatrix mixture_density(const Ensemble& e) {
  ComplexMatrix m = ComplexMatrix::Zero(e.dim(), e.dim());
  for (const auto& member : e.members()) m += member.weight * member.state.projector();
  return DensityMatrix(m);
}

bool ensembles_equivalent(const Ensemble& e1, const Ensemble& e2, double tol) {
  if (e1.dim() != e2.dim()) throw ValidationError("ensembles_equivalent: dimension mismatch");
  return trace_distance(mixture_density(e1), mixture_density(e2)) < tol;
}

Ensemble eigen_ensemble(const DensityMatrix& rho) {
  const Spectrum s = rho.spectrum();
  std::vector<EnsembleMember> members;
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    if (s.values(k) > tol::kRank) members.push_back({s.values(k), PureState::normalized(s.vectors.col(k))});
  }
  return Ensemble(std::move(members));
}

Ensemble hjw_ensemble(const DensityMatrix& rho, const ComplexMatrix& isometry) {
  const Spectrum s = rho.spectrum();
  std::vector<Eigen::Index> support;
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    if (s.values(k) > tol::kRank) support.push_back(k);
  }
  const auto r = static_cast<Eigen::Index>(support.size());
  if (isometry.cols() != r) {
    std::ostringstream msg;
    msg << "hjw_ensemble: isometry has " << isometry.cols() << " columns but rank(rho) = " << r;
    throw ValidationError(msg.str());
  }
  if (isometry.rows() < r) throw ValidationError("hjw_ensemble: isometry has fewer rows than rank(rho)");
  if (const double d = isometry_defect(isometry); d > 1e-10) {
    std::ostringstream msg;
    msg << "hjw_ensemble: input is not an isometry (defect " << d << ")";
    throw ValidationError(msg.str());
  }

  // Columns sqrt(lambda_k) |e_k>.
  ComplexMatrix scaled(rho.dim(), r);
  for (Eigen::Index k = 0; k < r; ++k) scaled.col(k) = std::sqrt(s.values(support[k])) * s.vectors.col(support[k]);

  std::vector<EnsembleMember> members;
  for (Eigen::Index i = 0; i < isometry.rows(); ++i) {
    const ComplexVector v = scaled * isometry.row(i).transpose();
    const double p = v.squaredNorm();
    if (p < tol::kRank) continue;
    members.push_back({p, PureState::normalized(v)});
  }
  return Ensemble(std::move(members));
}

Bipartite canonical_purification(const DensityMatrix& rho, int min_complement_dim) {
  const Spectrum s = rho.spectrum();
  std::vector<Eigen::Index> support;
  for (Eigen::Index k = s.values.size() - 1; k >= 0; --k) {
    if (s.values(k) > tol::kRank) support.push_back(k);
  }
  const int r = static_cast<int>(support.size());
  const int db = std::max({r, min_complement_dim, 2});
  TensorStructure structure({rho.dim(), db});
  ComplexVector psi = ComplexVector::Zero(structure.total_dim());
  for (int k = 0; k < r; ++k) {
    psi += std::sqrt(s.values(support[k])) *
           tensor_product(ComplexVector(s.vectors.col(support[k])), ComplexVector(PureState::basis(db, k).amplitudes()));
  }
  return {PureState::normalized(psi), std::move(structure), FactorSubset{0}};
}

SteeringBasis design_steering(const Bipartite& purification, const Ensemble& target) {
  const SchmidtView view = schmidt_view(purification);
  if (target.dim() != view.kept_dim) throw ValidationError("design_steering: target dimension does not match the kept factors");

  const DensityMatrix marginal(hermitian_part(view.amplitudes * view.amplitudes.adjoint()));
  if (const double d = trace_distance(mixture_density(target), marginal); d > kSteeringTolerance) {
    std::ostringstream msg;
    msg << "design_steering: target mixture differs from the kept marginal (trace distance " << d << ")";
    throw ValidationError(msg.str());
  }
  const auto m = static_cast<Eigen::Index>(target.size());
  if (m > view.complement_dim) {
    std::ostringstream msg;
    msg << "design_steering: " << m << " target members exceed complement dimension " << view.complement_dim
        << "; enlarge the complement (see canonical_purification)";
    throw ValidationError(msg.str());
  }

  // Schmidt form M = sum_k sqrt(lambda_k) e_k f_k^T.
  const Spectrum s = marginal.spectrum();
  std::vector<Eigen::Index> support;
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    if (s.values(k) > tol::kRank) support.push_back(k);
  }
  const auto r = static_cast<Eigen::Index>(support.size());
  ComplexMatrix schmidt_complement(view.complement_dim, r);
  for (Eigen::Index k = 0; k < r; ++k) {
    const ComplexVector e = s.vectors.col(support[k]);
    schmidt_complement.col(k) = view.amplitudes.transpose() * e.conjugate() / std::sqrt(s.values(support[k]));
  }

  // W[i,k] = sqrt(p_i) <e_k|phi_i> / sqrt(lambda_k), an m x r isometry.
  ComplexMatrix w(m, r);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& member = target[static_cast<std::size_t>(i)];
    for (Eigen::Index k = 0; k < r; ++k) {
      w(i, k) = std::sqrt(member.weight / s.values(support[k])) *
                s.vectors.col(support[k]).dot(member.state.amplitudes());
    }
  }
  const ComplexMatrix u = complete_to_unitary(w);
  const ComplexMatrix g = complete_to_unitary(schmidt_complement).leftCols(m);

  double best = std::numeric_limits<double>::infinity();
  for (const ComplexMatrix& candidate : {ComplexMatrix(g * u.adjoint()), ComplexMatrix(g * u.transpose())}) {
    SteeringBasis basis = SteeringBasis::from_columns(candidate);
    const EnsembleComparison c = compare_ensembles(target, steer(purification, basis));
    if (c.max_infidelity <= kSteeringTolerance && c.max_weight_error <= kSteeringTolerance) return basis;
    best = std::min(best, std::max(c.max_infidelity, c.max_weight_error));
  }
  std::ostringstream msg;
  msg << "design_steering: constructed basis fails verification (residual " << best << ")";
  throw ValidationError(msg.str());
}

Ensemble steer(const Bipartite& purification, const SteeringBasis& basis) {
  const SchmidtView view = schmidt_view(purification);
  if (basis.dim() != view.complement_dim) throw ValidationError("steer: basis dimension does not match the complement");
  std::vector<EnsembleMember> members;
  for (const auto& b : basis.vectors()) {
    const ComplexVector conditional = view.amplitudes * b.amplitudes().conjugate();
    const double p = conditional.squaredNorm();
    if (p < tol::kRank) continue;
    members.push_back({p, PureState::normalized(conditional)});
  }
  if (members.empty()) throw ValidationError("steer: basis is orthogonal to the purification's support");
  return Ensemble(std::move(members));
}

std::vector<OutcomeRecord> collapse_measurement(const DensityMatrix& joint, const TensorStructure& structure,
                                                const FactorSubset& kept, const SteeringBasis& basis) {
  if (joint.dim() != structure.total_dim()) throw ValidationError("collapse_measurement: state does not match tensor structure");
  const Regrouping rg = bipartition(structure, kept);
  const int da = rg.structure.dim(0);
  const int db = rg.structure.dim(1);
  if (basis.dim() != db) throw ValidationError("collapse_measurement: basis dimension does not match the complement");

  const ComplexMatrix grouped = relabel(joint.matrix(), rg.index_map);
  const std::vector<int> inverse = invert_index_map(rg.index_map);
  const ComplexMatrix id_a = ComplexMatrix::Identity(da, da);

  std::vector<OutcomeRecord> records;
  double total = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const ComplexVector& b = basis.vectors()[i].amplitudes();
    const ComplexMatrix lift = tensor_product(id_a, ComplexMatrix(b));  // I_A (x) |b>
    const ComplexMatrix block = hermitian_part(lift.adjoint() * grouped * lift);
    const double p = block.trace().real();
    total += p;
    if (p < tol::kRank) continue;
    DensityMatrix kept_state(block / p);
    std::optional<PureState> pure;
    if (kept_state.rank() == 1) {
      const Spectrum s = kept_state.spectrum();
      pure = PureState::normalized(s.vectors.col(s.values.size() - 1));
    }
    DensityMatrix joint_post(relabel(tensor_product(kept_state.matrix(), ComplexMatrix(b * b.adjoint())), inverse));
    records.push_back({static_cast<int>(i), p, std::move(kept_state), std::move(pure), std::move(joint_post)});
  }
  if (total < 1.0 - 1e-10) {
    std::ostringstream msg;
    msg << "collapse_measurement: basis is incomplete on the complement's support (probabilities sum to " << total << ")";
    throw ValidationError(msg.str());
  }
  return records;
}

std::vector<int> match_members(const Ensemble& a, const Ensemble& b) {
  std::vector<int> match(a.size(), -1);
  std::vector<bool> used(b.size(), false);
  const std::size_t rounds = std::min(a.size(), b.size());
  for (std::size_t round = 0; round < rounds; ++round) {
    double best = -1.0;
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (match[i] != -1) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (used[j]) continue;
        const double f = state_fidelity(a[i].state, b[j].state);
        if (f > best) {
          best = f;
          bi = i;
          bj = j;
        }
      }
    }
    match[bi] = static_cast<int>(bj);
    used[bj] = true;
  }
  return match;
}

EnsembleComparison compare_ensembles(const Ensemble& a, const Ensemble& b) {
  if (a.dim() != b.dim()) throw ValidationError("compare_ensembles: dimension mismatch");
  const std::vector<int> match = match_members(a, b);
  EnsembleComparison c{0.0, 0.0};
  std::vector<bool> used(b.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (match[i] < 0) {
      c.max_infidelity = 1.0;
      c.max_weight_error = std::max(c.max_weight_error, a[i].weight);
      continue;
    }
    used[match[i]] = true;
    const auto& other = b[static_cast<std::size_t>(match[i])];
    c.max_infidelity = std::max(c.max_infidelity, 1.0 - state_fidelity(a[i].state, other.state));
    c.max_weight_error = std::max(c.max_weight_error, std::abs(a[i].weight - other.weight));
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (!used[j]) {
      c.max_infidelity = 1.0;
      c.max_weight_error = std::max(c.max_weight_error, b[j].weight);
    }
  }
  return c;
}

}  // namespace ensdyn
