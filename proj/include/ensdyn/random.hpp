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

#include <cstdint>
#include <random>
#include <vector>

#include "ensdyn/qstatics.hpp"

namespace ensdyn {

/// Seedable 64-bit generator (mt19937_64) with splittable streams: the
/// engine state is derived from (seed, stream) through SplitMix64, so task k
/// of a parallel job uses stream k and reproduces sequential results.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  double uniform();                   // [0, 1)
  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);    // inclusive
  double normal();
  Complex complex_normal();           // E|z|^2 = 1

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

/// Uniformly distributed on the unit sphere of C^dim.
PureState haar_state(int dim, Rng& rng);
PureState haar_state(int dim, std::uint64_t seed);

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// diagonal of R made real positive.
ComplexMatrix haar_unitary(int dim, Rng& rng);
ComplexMatrix haar_unitary(int dim, std::uint64_t seed);

/// First `cols` columns of a Haar unitary of size `rows`.
ComplexMatrix random_isometry(int rows, int cols, Rng& rng);

/// (G + G^dagger) / 2 for a complex Gaussian G.
ComplexMatrix random_hermitian(int dim, Rng& rng);

/// Flat-Dirichlet weights, mixed with the uniform vector so that every
/// weight is at least `floor` (floor * n must not exceed 1).
std::vector<double> dirichlet_weights(int n, Rng& rng, double floor = 0.0);

/// Mixture of `members` Haar states with Dirichlet weights.
DensityMatrix random_density(int dim, int members, Rng& rng, double weight_floor = 0.0);

}  // namespace ensdyn
