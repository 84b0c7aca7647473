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

#include "ensdyn/witness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "ensdyn/errors.hpp"
#include "ensdyn/nelder_mead.hpp"
#include "ensdyn/random.hpp"

namespace ensdyn {

using namespace std::complex_literals;

std::string to_string(Verdict v) { return v == Verdict::nonlinear ? "nonlinear" : "linear-consistent"; }

std::string to_string(Probe p) {
  return p == Probe::decomposition ? "decomposition-vs-decomposition" : "componentwise-vs-direct";
}

namespace {

// diag((1, 3, ..., 2d-1)) / d^2: full rank, nondegenerate, deterministic.
DensityMatrix ramp_probe(int dim) {
  std::vector<double> p(dim);
  for (int k = 0; k < dim; ++k) p[k] = (2.0 * k + 1.0) / (static_cast<double>(dim) * dim);
  return DensityMatrix::diagonal(p);
}

void record(std::optional<WorstCase>& worst, double& max_dev, double dev, WorstCase&& candidate) {
  if (!worst || dev > max_dev) {
    max_dev = dev;
    worst = std::move(candidate);
  }
}

}  // namespace

LinearityCertificate certify_linearity(const DynamicalMap& map, int dim, int trials, double threshold,
                                       std::uint64_t seed) {
  if (trials < 1) throw ValidationError("certify_linearity: trials must be at least 1");
  if (!(threshold > 0.0)) throw ValidationError("certify_linearity: threshold must be positive");
  if (dim < 2) throw ValidationError("certify_linearity: dim must be at least 2");
  if (const auto d = map.dim(); d && *d != dim) throw ValidationError("certify_linearity: map dimension mismatch");

  const double floor = std::min(0.05, 0.5 / dim);
  double max_dev = 0.0;
  std::optional<WorstCase> worst;

  for (int trial = 0; trial <= trials; ++trial) {
    Rng rng(seed, static_cast<std::uint64_t>(trial));
    const DensityMatrix rho = trial == 0 ? ramp_probe(dim) : random_density(dim, dim, rng, floor);
    const int r = rho.rank();

    const Ensemble e1 = hjw_ensemble(rho, random_isometry(rng.uniform_int(r, 2 * r), r, rng));
    const Ensemble e2 = hjw_ensemble(rho, random_isometry(rng.uniform_int(r, 2 * r), r, rng));
    DensityMatrix ev1 = evolve_ensemble(map, e1);
    DensityMatrix ev2 = evolve_ensemble(map, e2);
    const double dev_decomp = trace_distance(ev1, ev2);
    record(worst, max_dev, dev_decomp, {Probe::decomposition, rho, e1, e2, std::move(ev1), std::move(ev2)});

    const Ensemble eig = eigen_ensemble(rho);
    DensityMatrix componentwise = evolve_ensemble(map, eig);
    DensityMatrix direct = apply_map(map, rho);
    const double dev_direct = trace_distance(componentwise, direct);
    record(worst, max_dev, dev_direct,
           {Probe::componentwise_vs_direct, rho, eig, eig, std::move(componentwise), std::move(direct)});
  }

  const Verdict verdict = max_dev > threshold ? Verdict::nonlinear : Verdict::linear_consistent;
  if (verdict == Verdict::linear_consistent) worst.reset();
  return {dim, trials, threshold, max_dev, verdict, std::move(worst), seed};
}

// ---------------------------------------------------------------------------

ChoiMatrix reconstruct_choi(const DynamicalMap& map, int dim) {
  if (dim < 1) throw ValidationError("reconstruct_choi: dim must be positive");
  if (const auto d = map.dim(); d && *d != dim) throw ValidationError("reconstruct_choi: map dimension mismatch");

  auto g = [&](const ComplexVector& v) { return apply_map(map, DensityMatrix::from_pure(PureState::normalized(v))).matrix(); };
  auto basis = [dim](int i) {
    ComplexVector v = ComplexVector::Zero(dim);
    v(i) = 1.0;
    return v;
  };

  std::vector<ComplexMatrix> diag;
  for (int i = 0; i < dim; ++i) diag.push_back(g(basis(i)));

  ComplexMatrix c = ComplexMatrix::Zero(dim * dim, dim * dim);
  for (int i = 0; i < dim; ++i) c.block(i * dim, i * dim, dim, dim) = diag[i];
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      // |+><+| = (E_ii + E_ij + E_ji + E_jj)/2, |+i><+i| = (E_ii - i E_ij + i E_ji + E_jj)/2
      const ComplexMatrix sym = 2.0 * g(basis(i) + basis(j)) - diag[i] - diag[j];            // g(E_ij) + g(E_ji)
      const ComplexMatrix skew = 2.0 * g(basis(i) + 1.0i * basis(j)) - diag[i] - diag[j];    // -i g(E_ij) + i g(E_ji)
      c.block(i * dim, j * dim, dim, dim) = 0.5 * (sym + 1.0i * skew);
      c.block(j * dim, i * dim, dim, dim) = 0.5 * (sym - 1.0i * skew);
    }
  }
  return {dim, c};
}

DensityMatrix apply_choi(const ChoiMatrix& choi, const DensityMatrix& rho) {
  const int d = choi.dim;
  if (rho.dim() != d) throw ValidationError("apply_choi: dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) out += rho.matrix()(i, j) * choi.matrix.block(i * d, j * d, d, d);
  }
  return DensityMatrix((out + out.adjoint()) * 0.5);
}

CptpReport check_cptp(const ChoiMatrix& choi, double tol) {
  const int d = choi.dim;
  if (choi.matrix.rows() != d * d || choi.matrix.cols() != d * d) throw ValidationError("check_cptp: Choi matrix has wrong size");
  if (const double h = hermiticity_defect(choi.matrix); h > std::max(tol, 1e-10)) {
    std::ostringstream msg;
    msg << "check_cptp: Choi matrix is not Hermitian (defect " << h << ")";
    throw ValidationError(msg.str());
  }
  const ComplexMatrix herm = (choi.matrix + choi.matrix.adjoint()) * 0.5;
  const double min_eig = hermitian_eigen(herm).values(0);
  const ComplexMatrix reduced = partial_trace(herm, TensorStructure({d, d}), FactorSubset{0});
  const double tp_dev = max_abs(reduced - ComplexMatrix::Identity(d, d));
  return {min_eig >= -tol, tp_dev <= tol, min_eig, tp_dev};
}

// ---------------------------------------------------------------------------

ComplexMatrix anti_hermitian_generator(int m, std::span<const double> theta) {
  if (theta.size() != static_cast<std::size_t>(m) * m) throw ValidationError("anti_hermitian_generator: need m^2 parameters");
  ComplexMatrix a = ComplexMatrix::Zero(m, m);
  std::size_t p = 0;
  for (int k = 0; k < m; ++k) a(k, k) = Complex(0.0, theta[p++]);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const Complex z(theta[p], theta[p + 1]);
      p += 2;
      a(i, j) = z;
      a(j, i) = -std::conj(z);
    }
  }
  return a;
}

ComplexMatrix isometry_from_parameters(int m, int r, std::span<const double> theta) {
  if (r < 1 || r > m) throw ValidationError("isometry_from_parameters: need 1 <= r <= m");
  const ComplexMatrix u = anti_hermitian_generator(m, theta).exp();
  return u.leftCols(r);
}

namespace {

struct RestartOutcome {
  std::vector<double> theta;
  double deviation;
  int iterations;
  int evaluations;
};

}  // namespace

WitnessReport witness_search(const DynamicalMap& map, const DensityMatrix& rho, const WitnessConfig& config) {
  if (config.restarts < 1) throw ValidationError("witness_search: restarts must be at least 1");
  if (config.max_iters < 0) throw ValidationError("witness_search: max_iters must be nonnegative");
  const int r = rho.rank();
  const int m = config.ensemble_size == 0 ? r : config.ensemble_size;
  if (m < r) {
    std::ostringstream msg;
    msg << "witness_search: ensemble size " << m << " is below rank(rho) = " << r;
    throw ValidationError(msg.str());
  }

  const Ensemble baseline = eigen_ensemble(rho);
  const DensityMatrix evolved_baseline = evolve_ensemble(map, baseline);
  auto deviation = [&](std::span<const double> theta) {
    const Ensemble e = hjw_ensemble(rho, isometry_from_parameters(m, r, theta));
    return trace_distance(evolve_ensemble(map, e), evolved_baseline);
  };

  auto run_restart = [&](int k) {
    Rng rng(config.seed, static_cast<std::uint64_t>(k));
    std::vector<double> theta0(static_cast<std::size_t>(m) * m);
    for (auto& t : theta0) t = rng.uniform(-std::numbers::pi, std::numbers::pi);
    NelderMeadOptions options;
    options.max_iters = config.max_iters;
    const NelderMeadResult res =
        nelder_mead([&](std::span<const double> theta) { return -deviation(theta); }, std::move(theta0), options);
    return RestartOutcome{res.x, -res.value, res.iterations, res.evaluations};
  };

  std::vector<RestartOutcome> outcomes(config.restarts);
  const int workers = std::clamp(config.threads, 1, config.restarts);
  if (workers == 1) {
    for (int k = 0; k < config.restarts; ++k) outcomes[k] = run_restart(k);
  } else {
    std::vector<std::future<void>> jobs;
    for (int w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (int k = w; k < config.restarts; k += workers) outcomes[k] = run_restart(k);
      }));
    }
    for (auto& job : jobs) job.get();
  }

  int best = 0;
  int iterations = 0;
  int evaluations = 0;
  for (int k = 0; k < config.restarts; ++k) {
    iterations += outcomes[k].iterations;
    evaluations += outcomes[k].evaluations;
    if (outcomes[k].deviation > outcomes[best].deviation) best = k;
  }

  Ensemble ensemble_a = hjw_ensemble(rho, isometry_from_parameters(m, r, outcomes[best].theta));
  DensityMatrix evolved_a = evolve_ensemble(map, ensemble_a);
  const double dev = trace_distance(evolved_a, evolved_baseline);
  return {dev,        std::move(ensemble_a), baseline,    std::move(evolved_a), evolved_baseline,
          iterations, evaluations,           config.restarts, best,             config.seed};
}

double reverify_witness(const DynamicalMap& map, const WitnessReport& report) {
  return trace_distance(evolve_ensemble(map, report.ensemble_a), evolve_ensemble(map, report.ensemble_b));
}

}  // namespace ensdyn
