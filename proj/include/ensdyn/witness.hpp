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

// Linearity certification of a dynamical map through decomposition
// independence, Choi reconstruction from physical probes, and an
// optimization-based search for equivalent ensembles whose componentwise
// evolutions differ (a signaling witness).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "ensdyn/dynamics.hpp"
#include "ensdyn/ensembles.hpp"

namespace ensdyn {

enum class Verdict { linear_consistent, nonlinear };
std::string to_string(Verdict v);

/// Which comparison produced a certificate's worst deviation.
enum class Probe {
  /// evolve_ensemble over two HJW ensembles of the same rho.
  decomposition,
  /// evolve_ensemble over the eigen-ensemble vs apply_map(rho).
  componentwise_vs_direct,
};
std::string to_string(Probe p);

struct WorstCase {
  Probe probe;
  DensityMatrix rho;
  Ensemble ensemble_a;
  /// For componentwise_vs_direct this is ensemble_a again; the direct side
  /// is apply_map(rho).
  Ensemble ensemble_b;
  DensityMatrix evolved_a;
  DensityMatrix evolved_b;
};

struct LinearityCertificate {
  int dim;
  int trials;
  double threshold;
  double max_deviation;
  Verdict verdict;
  /// Present iff verdict is nonlinear.
  std::optional<WorstCase> worst;
  std::uint64_t seed;
};

inline constexpr double kDefaultLinearityThreshold = 1e-8;

/// Each trial draws a full-rank rho (mixture of `dim` Haar states, weights
/// at least 0.05) and two random isometries, and compares the componentwise
/// evolutions of the two HJW ensembles as well as eigen-ensemble evolution
/// against direct application. A deterministic probe rho = diag(1, 3, ...,
/// 2*dim-1) / dim^2 runs before the random trials.
LinearityCertificate certify_linearity(const DynamicalMap& map, int dim, int trials,
                                       double threshold = kDefaultLinearityThreshold, std::uint64_t seed = 0);

/// C = sum_ij E_ij (x) g(E_ij), input factor first.
struct ChoiMatrix {
  int dim;
  ComplexMatrix matrix;
};

/// Reconstructs g(E_ij) from the action of `map` on the density matrices
/// |i><i|, |j><j|, |+_ij><+_ij| and |+i_ij><+i_ij|. Assumes the map is
/// linear (certify it first); the result is meaningless otherwise.
ChoiMatrix reconstruct_choi(const DynamicalMap& map, int dim);

/// rho -> Tr_in[(rho^T (x) I) C].
DensityMatrix apply_choi(const ChoiMatrix& choi, const DensityMatrix& rho);

struct CptpReport {
  bool cp;
  bool tp;
  double min_eigenvalue;
  double tp_deviation;
};

CptpReport check_cptp(const ChoiMatrix& choi, double tol = 1e-10);

struct WitnessConfig {
  int restarts = 16;
  int max_iters = 200;
  /// Ensemble size m; 0 means rank(rho).
  int ensemble_size = 0;
  std::uint64_t seed = 0;
  /// Worker threads for restarts; results do not depend on it.
  int threads = 1;
};

struct WitnessReport {
  double deviation;
  Ensemble ensemble_a;
  Ensemble ensemble_b;
  DensityMatrix evolved_a;
  DensityMatrix evolved_b;
  int iterations;
  int evaluations;
  int restarts;
  int best_restart;
  std::uint64_t seed;
};

/// Maximizes trace_distance(evolve(hjw(rho, V(theta))), evolve(eigen(rho)))
/// over isometries V(theta) = first r columns of exp(A(theta)), A
/// anti-Hermitian with m^2 real parameters, by Nelder-Mead from `restarts`
/// seeded starting points. ensemble_b is the eigen-ensemble.
WitnessReport witness_search(const DynamicalMap& map, const DensityMatrix& rho, const WitnessConfig& config);

/// Recomputes trace_distance(evolve(ensemble_a), evolve(ensemble_b)) from
/// the report's stored ensembles alone.
double reverify_witness(const DynamicalMap& map, const WitnessReport& report);

/// Anti-Hermitian generator from m^2 real parameters: diagonal entries
/// i*theta_k, then (re, im) pairs for the strict upper triangle.
ComplexMatrix anti_hermitian_generator(int m, std::span<const double> theta);
ComplexMatrix isometry_from_parameters(int m, int r, std::span<const double> theta);

}  // namespace ensdyn
