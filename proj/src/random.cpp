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

#include "ensdyn/random.hpp"

#include <cmath>

#include "ensdyn/errors.hpp"

namespace ensdyn {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(splitmix64(splitmix64(seed) ^ splitmix64(~stream))) {}

double Rng::uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

double Rng::uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

int Rng::uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

double Rng::normal() { return normal_(engine_); }

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) * M_SQRT1_2;
}

PureState haar_state(int dim, Rng& rng) {
  if (dim < 1) throw ValidationError("haar_state: dim must be positive");
  ComplexVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.complex_normal();
  return PureState::normalized(v);
}

PureState haar_state(int dim, std::uint64_t seed) {
  Rng rng(seed);
  return haar_state(dim, rng);
}

ComplexMatrix haar_unitary(int dim, Rng& rng) {
  if (dim < 1) throw ValidationError("haar_unitary: dim must be positive");
  ComplexMatrix g(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexVector r = qr.matrixQR().diagonal();
  for (int j = 0; j < dim; ++j) {
    const double a = std::abs(r(j));
    if (a > 0.0) q.col(j) *= r(j) / a;
  }
  return q;
}

ComplexMatrix haar_unitary(int dim, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(dim, rng);
}

ComplexMatrix random_isometry(int rows, int cols, Rng& rng) {
  if (cols < 1 || rows < cols) throw ValidationError("random_isometry: need rows >= cols >= 1");
  return haar_unitary(rows, rng).leftCols(cols);
}

ComplexMatrix random_hermitian(int dim, Rng& rng) {
  ComplexMatrix g(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
  }
  return (g + g.adjoint()) * 0.5;
}

std::vector<double> dirichlet_weights(int n, Rng& rng, double floor) {
  if (n < 1) throw ValidationError("dirichlet_weights: n must be positive");
  if (floor < 0.0 || floor * n > 1.0) throw ValidationError("dirichlet_weights: infeasible floor");
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) {
    // Exponential variates normalize to a flat Dirichlet sample.
    x = -std::log1p(-rng.uniform());
    total += x;
  }
  const double scale = 1.0 - floor * n;
  for (auto& x : w) x = floor + scale * x / total;
  return w;
}

DensityMatrix random_density(int dim, int members, Rng& rng, double weight_floor) {
  const auto weights = dirichlet_weights(members, rng, weight_floor);
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < members; ++i) m += weights[i] * haar_state(dim, rng).projector();
  return DensityMatrix(m / m.trace().real());
}

}  // namespace ensdyn
