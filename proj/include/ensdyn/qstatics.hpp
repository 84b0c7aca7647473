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

// Quantum statics: dense complex operators, pure states, density matrices,
// and the tensor-product structure over independent degrees of freedom.
//
// Index convention: composite basis indices are row-major with factor 0 the
// most significant digit, i.e. for dims (d0, d1, d2) the basis vector
// |i0 i1 i2> has index (i0 * d1 + i1) * d2 + i2. Every routine in the
// library (Kronecker products, partial traces, steering, Choi assembly)
// follows this one convention.

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ensdyn {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double kNorm = 1e-12;
inline constexpr double kHermitian = 1e-12;
inline constexpr double kTrace = 1e-12;
inline constexpr double kPositivity = 1e-10;
/// Eigenvalues (and ensemble weights) at or below this are treated as zero.
inline constexpr double kRank = 1e-12;
}  // namespace tol

bool all_finite(const ComplexMatrix& m);
double max_abs(const ComplexMatrix& m);
/// max |M - M^dagger| over entries.
double hermiticity_defect(const ComplexMatrix& m);
/// max |V^dagger V - I| over entries.
double isometry_defect(const ComplexMatrix& v);

/// Eigenvalues in nondecreasing order with matching eigenvector columns.
struct Spectrum {
  RealVector values;
  ComplexMatrix vectors;
};

/// The single spectral primitive. Input must be Hermitian; only the lower
/// triangle is read.
Spectrum hermitian_eigen(const ComplexMatrix& m);

/// Completes the orthonormal columns of `cols` (n x k, k <= n) to an n x n
/// unitary whose first k columns are exactly `cols`.
ComplexMatrix complete_to_unitary(const ComplexMatrix& cols);

class PureState {
 public:
  /// Throws ValidationError unless the norm is 1 within tol::kNorm.
  explicit PureState(ComplexVector amplitudes);

  /// Rescales a nonzero vector to unit norm.
  static PureState normalized(const ComplexVector& v);
  static PureState basis(int dim, int index);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  ComplexMatrix projector() const;

 private:
  ComplexVector amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite. Construction validates
/// every invariant and stores the exactly Hermitian part.
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& m);

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int dim);
  static DensityMatrix diagonal(std::span<const double> probabilities);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }
  Spectrum spectrum() const { return hermitian_eigen(matrix_); }
  /// Number of eigenvalues above tol::kRank.
  int rank() const;
  double purity() const;

 private:
  ComplexMatrix matrix_;
};

class TensorStructure;

/// Sorted set of distinct factor positions.
class FactorSubset {
 public:
  FactorSubset() = default;
  FactorSubset(std::initializer_list<int> indices);
  explicit FactorSubset(std::vector<int> indices);

  const std::vector<int>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(int factor) const;

  bool operator==(const FactorSubset&) const = default;

 private:
  std::vector<int> indices_;
};

class TensorStructure {
 public:
  explicit TensorStructure(std::vector<int> factor_dims);
  TensorStructure(std::initializer_list<int> factor_dims)
      : TensorStructure(std::vector<int>(factor_dims)) {}

  const std::vector<int>& factor_dims() const { return dims_; }
  int factor_count() const { return static_cast<int>(dims_.size()); }
  int total_dim() const { return total_; }
  int dim(int factor) const { return dims_.at(factor); }

  /// Product of the dimensions of the listed factors (1 for an empty set).
  int subset_dim(const FactorSubset& subset) const;
  FactorSubset complement(const FactorSubset& subset) const;
  FactorSubset all() const;
  /// Throws ValidationError if any index is out of range.
  void check(const FactorSubset& subset) const;

  std::vector<int> digits(int index) const;
  int index(std::span<const int> digits) const;

  bool operator==(const TensorStructure&) const = default;

 private:
  std::vector<int> dims_;
  int total_ = 1;
};

// Kronecker products, composite index i = i_a * dim_b + i_b.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b);
PureState tensor_product(const PureState& a, const PureState& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

/// Partial trace of an arbitrary operator on `structure`, keeping the listed
/// factors in their original order. An empty `keep` is rejected.
ComplexMatrix partial_trace(const ComplexMatrix& m, const TensorStructure& structure,
                            const FactorSubset& keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const TensorStructure& structure,
                            const FactorSubset& keep);
DensityMatrix partial_trace(const PureState& psi, const TensorStructure& structure,
                            const FactorSubset& keep);

/// Half the trace norm of rho - sigma.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
/// |<a|b>|^2, insensitive to global phase.
double state_fidelity(const PureState& a, const PureState& b);

/// Result of merging and reordering tensor factors. `index_map[old] = new`
/// relabels basis indices of the original structure into the merged one.
struct Regrouping {
  TensorStructure structure;
  std::vector<std::vector<int>> groups;
  std::vector<int> index_map;
};

/// `grouping` lists the original factors of each new factor, in order; it
/// must be a partition of all factor indices.
Regrouping regroup_factors(const TensorStructure& structure,
                           const std::vector<std::vector<int>>& grouping);
std::vector<int> invert_index_map(std::span<const int> index_map);
ComplexVector relabel(const ComplexVector& v, std::span<const int> index_map);
ComplexMatrix relabel(const ComplexMatrix& m, std::span<const int> index_map);

/// Regrouping that moves `first` to the front (merged into one factor) and
/// its complement behind it (merged into a second factor).
Regrouping bipartition(const TensorStructure& structure, const FactorSubset& first);

}  // namespace ensdyn
