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

#include "ensdyn/qstatics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "ensdyn/errors.hpp"

namespace ensdyn {

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(m - m.adjoint());
}

double isometry_defect(const ComplexMatrix& v) {
  const ComplexMatrix gram = v.adjoint() * v;
  return max_abs(gram - ComplexMatrix::Identity(gram.rows(), gram.cols()));
}

Spectrum hermitian_eigen(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("hermitian_eigen: matrix is not square");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success) throw ValidationError("hermitian_eigen: decomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix complete_to_unitary(const ComplexMatrix& cols) {
  const Eigen::Index n = cols.rows();
  const Eigen::Index k = cols.cols();
  if (k > n) throw ValidationError("complete_to_unitary: more columns than rows");
  if (k == n) return cols;
  ComplexMatrix out(n, n);
  out.leftCols(k) = cols;
  if (k == 0) {
    out = ComplexMatrix::Identity(n, n);
    return out;
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(cols);
  const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  out.rightCols(n - k) = q.rightCols(n - k);
  return out;
}

// ---------------------------------------------------------------------------
// PureState / DensityMatrix

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw ValidationError("PureState: empty amplitude vector");
  if (!all_finite(amplitudes_)) throw ValidationError("PureState: non-finite amplitude");
  const double drift = std::abs(amplitudes_.norm() - 1.0);
  if (drift > tol::kNorm) {
    std::ostringstream msg;
    msg << "PureState: norm deviates from 1 by " << drift;
    throw ValidationError(msg.str());
  }
}

PureState PureState::normalized(const ComplexVector& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw ValidationError("PureState: cannot normalize a zero vector");
  return PureState(v / n);
}

PureState PureState::basis(int dim, int index) {
  if (dim < 1 || index < 0 || index >= dim) throw ValidationError("PureState::basis: index out of range");
  ComplexVector v = ComplexVector::Zero(dim);
  v(index) = 1.0;
  return PureState(std::move(v));
}

ComplexMatrix PureState::projector() const { return amplitudes_ * amplitudes_.adjoint(); }

DensityMatrix::DensityMatrix(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) throw ValidationError("DensityMatrix: matrix must be square and nonempty");
  if (!all_finite(m)) throw ValidationError("DensityMatrix: non-finite entry");
  std::ostringstream msg;
  if (const double h = hermiticity_defect(m); h > tol::kHermitian) {
    msg << "DensityMatrix: not Hermitian (defect " << h << ")";
    throw ValidationError(msg.str());
  }
  matrix_ = (m + m.adjoint()) * 0.5;
  if (const double t = std::abs(matrix_.trace().real() - 1.0); t > tol::kTrace) {
    msg << "DensityMatrix: trace deviates from 1 by " << t;
    throw ValidationError(msg.str());
  }
  if (const double lo = hermitian_eigen(matrix_).values(0); lo < -tol::kPositivity) {
    msg << "DensityMatrix: negative eigenvalue " << lo;
    throw ValidationError(msg.str());
  }
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix(psi.projector() / psi.amplitudes().squaredNorm());
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  if (dim < 1) throw ValidationError("DensityMatrix::maximally_mixed: dim must be positive");
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probabilities) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(probabilities.size()),
                                        static_cast<Eigen::Index>(probabilities.size()));
  for (std::size_t i = 0; i < probabilities.size(); ++i) m(i, i) = probabilities[i];
  return DensityMatrix(m);
}

int DensityMatrix::rank() const {
  const RealVector values = spectrum().values;
  return static_cast<int>((values.array() > tol::kRank).count());
}

double DensityMatrix::purity() const { return (matrix_ * matrix_).trace().real(); }

// ---------------------------------------------------------------------------
// Factor bookkeeping

FactorSubset::FactorSubset(std::initializer_list<int> indices) : FactorSubset(std::vector<int>(indices)) {}

FactorSubset::FactorSubset(std::vector<int> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (!indices_.empty() && indices_.front() < 0) throw ValidationError("FactorSubset: negative factor index");
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw ValidationError("FactorSubset: duplicate factor index");
  }
}

bool FactorSubset::contains(int factor) const {
  return std::binary_search(indices_.begin(), indices_.end(), factor);
}

TensorStructure::TensorStructure(std::vector<int> factor_dims) : dims_(std::move(factor_dims)) {
  if (dims_.empty()) throw ValidationError("TensorStructure: no factors");
  for (int d : dims_) {
    if (d < 2) throw ValidationError("TensorStructure: every factor dimension must be at least 2");
    if (total_ > (1 << 20) / d) throw ValidationError("TensorStructure: total dimension too large");
    total_ *= d;
  }
}

int TensorStructure::subset_dim(const FactorSubset& subset) const {
  check(subset);
  int d = 1;
  for (int f : subset.indices()) d *= dims_[f];
  return d;
}

FactorSubset TensorStructure::complement(const FactorSubset& subset) const {
  check(subset);
  std::vector<int> rest;
  for (int f = 0; f < factor_count(); ++f) {
    if (!subset.contains(f)) rest.push_back(f);
  }
  return FactorSubset(std::move(rest));
}

FactorSubset TensorStructure::all() const {
  std::vector<int> every(dims_.size());
  std::iota(every.begin(), every.end(), 0);
  return FactorSubset(std::move(every));
}

void TensorStructure::check(const FactorSubset& subset) const {
  if (!subset.empty() && subset.indices().back() >= factor_count()) {
    throw ValidationError("FactorSubset: factor index out of range for tensor structure");
  }
}

std::vector<int> TensorStructure::digits(int index) const {
  std::vector<int> out(dims_.size());
  for (int f = factor_count() - 1; f >= 0; --f) {
    out[f] = index % dims_[f];
    index /= dims_[f];
  }
  return out;
}

int TensorStructure::index(std::span<const int> digits) const {
  int idx = 0;
  for (std::size_t f = 0; f < dims_.size(); ++f) idx = idx * dims_[f] + digits[f];
  return idx;
}

// ---------------------------------------------------------------------------
// Products and traces

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

PureState tensor_product(const PureState& a, const PureState& b) {
  return PureState::normalized(tensor_product(a.amplitudes(), b.amplitudes()));
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(tensor_product(a.matrix(), b.matrix()));
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const TensorStructure& structure,
                            const FactorSubset& keep) {
  if (m.rows() != structure.total_dim() || m.cols() != structure.total_dim()) {
    throw ValidationError("partial_trace: operator dimension does not match tensor structure");
  }
  if (keep.empty()) throw ValidationError("partial_trace: nothing to keep");
  structure.check(keep);

  const FactorSubset traced = structure.complement(keep);
  const int kept_dim = structure.subset_dim(keep);
  const int traced_dim = structure.subset_dim(traced);

  // full_index[a * traced_dim + t]: full basis index of kept digit block a
  // combined with traced digit block t.
  std::vector<int> full_index(static_cast<std::size_t>(kept_dim) * traced_dim);
  for (int idx = 0; idx < structure.total_dim(); ++idx) {
    const auto digits = structure.digits(idx);
    int a = 0;
    int t = 0;
    for (int f = 0; f < structure.factor_count(); ++f) {
      if (keep.contains(f)) {
        a = a * structure.dim(f) + digits[f];
      } else {
        t = t * structure.dim(f) + digits[f];
      }
    }
    full_index[static_cast<std::size_t>(a) * traced_dim + t] = idx;
  }

  ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
  for (int t = 0; t < traced_dim; ++t) {
    for (int a = 0; a < kept_dim; ++a) {
      const int row = full_index[static_cast<std::size_t>(a) * traced_dim + t];
      for (int b = 0; b < kept_dim; ++b) {
        out(a, b) += m(row, full_index[static_cast<std::size_t>(b) * traced_dim + t]);
      }
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const TensorStructure& structure,
                            const FactorSubset& keep) {
  return DensityMatrix(partial_trace(rho.matrix(), structure, keep));
}

DensityMatrix partial_trace(const PureState& psi, const TensorStructure& structure,
                            const FactorSubset& keep) {
  return DensityMatrix(partial_trace(psi.projector(), structure, keep));
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw ValidationError("trace_distance: dimension mismatch");
  // Orient the difference canonically so that T(a, b) == T(b, a) bit-for-bit.
  const Complex* a = rho.matrix().data();
  const Complex* b = sigma.matrix().data();
  const auto less = [](Complex x, Complex y) { return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag(); };
  const bool swap = std::lexicographical_compare(b, b + sigma.matrix().size(), a, a + rho.matrix().size(), less);
  const ComplexMatrix diff = swap ? ComplexMatrix(sigma.matrix() - rho.matrix()) : ComplexMatrix(rho.matrix() - sigma.matrix());
  const RealVector values = hermitian_eigen(diff).values;
  return 0.5 * values.cwiseAbs().sum();
}

double state_fidelity(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw ValidationError("state_fidelity: dimension mismatch");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

// ---------------------------------------------------------------------------
// Regrouping

Regrouping regroup_factors(const TensorStructure& structure,
                           const std::vector<std::vector<int>>& grouping) {
  const int n = structure.factor_count();
  std::vector<int> seen(n, 0);
  std::vector<int> order;
  std::vector<int> merged_dims;
  for (const auto& group : grouping) {
    if (group.empty()) throw ValidationError("regroup_factors: empty group");
    int d = 1;
    for (int f : group) {
      if (f < 0 || f >= n) throw ValidationError("regroup_factors: factor index out of range");
      if (seen[f]++) throw ValidationError("regroup_factors: factor listed twice");
      d *= structure.dim(f);
      order.push_back(f);
    }
    merged_dims.push_back(d);
  }
  if (static_cast<int>(order.size()) != n) throw ValidationError("regroup_factors: grouping does not cover every factor");

  // Merged groups are row-major in their member order, so the new flat index
  // is the row-major index over the concatenated factor order.
  std::vector<int> index_map(structure.total_dim());
  for (int idx = 0; idx < structure.total_dim(); ++idx) {
    const auto digits = structure.digits(idx);
    int out = 0;
    for (int f : order) out = out * structure.dim(f) + digits[f];
    index_map[idx] = out;
  }
  return {TensorStructure(std::move(merged_dims)), grouping, std::move(index_map)};
}

std::vector<int> invert_index_map(std::span<const int> index_map) {
  std::vector<int> inverse(index_map.size(), -1);
  for (std::size_t i = 0; i < index_map.size(); ++i) {
    const int j = index_map[i];
    if (j < 0 || static_cast<std::size_t>(j) >= index_map.size() || inverse[j] != -1) {
      throw ValidationError("invert_index_map: not a permutation");
    }
    inverse[j] = static_cast<int>(i);
  }
  return inverse;
}

ComplexVector relabel(const ComplexVector& v, std::span<const int> index_map) {
  if (static_cast<std::size_t>(v.size()) != index_map.size()) throw ValidationError("relabel: size mismatch");
  ComplexVector out(v.size());
  for (std::size_t i = 0; i < index_map.size(); ++i) out(index_map[i]) = v(i);
  return out;
}

ComplexMatrix relabel(const ComplexMatrix& m, std::span<const int> index_map) {
  if (static_cast<std::size_t>(m.rows()) != index_map.size() || m.rows() != m.cols()) {
    throw ValidationError("relabel: size mismatch");
  }
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < index_map.size(); ++i) {
    for (std::size_t j = 0; j < index_map.size(); ++j) out(index_map[i], index_map[j]) = m(i, j);
  }
  return out;
}

Regrouping bipartition(const TensorStructure& structure, const FactorSubset& first) {
  structure.check(first);
  const FactorSubset rest = structure.complement(first);
  if (first.empty() || rest.empty()) throw ValidationError("bipartition: both sides must be nonempty");
  return regroup_factors(structure, {first.indices(), rest.indices()});
}

}  // namespace ensdyn
