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


#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ensdyn/dynamics.hpp"
#include "ensdyn/errors.hpp"
#include "ensdyn/random.hpp"
#include "reference_values.hpp"
#include "support.hpp"

using namespace ensdyn;
using namespace ensdyn::testing;

namespace {

double expectation(const DensityMatrix& rho, const ComplexMatrix& op) { return (rho.matrix() * op).trace().real(); }

double overlap(const PureState& a, const PureState& b) { return std::abs(a.amplitudes().dot(b.amplitudes())); }

ComplexMatrix closed_form_evolution(const ComplexMatrix& h, double t) {
  const Spectrum s = hermitian_eigen(h);
  ComplexVector phases(s.values.size());
  for (Eigen::Index k = 0; k < s.values.size(); ++k) phases(k) = std::exp(Complex(0.0, -s.values(k) * t));
  return s.vectors * phases.asDiagonal() * s.vectors.adjoint();
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("map validation") {
  CHECK_THROWS_AS(KrausChannel({ComplexMatrix::Identity(2, 2) * 0.9}), ValidationError);
  CHECK_THROWS_AS(KrausChannel({}), ValidationError);
  CHECK_THROWS_AS(NonlinearMap(PurityPower{1}), ValidationError);
  ComplexMatrix skew = pauli_x();
  skew(0, 1) = 2.0;
  CHECK_THROWS_AS(NonlinearMap(Weinberg{skew, pauli_z(), 1.0, 1.0, 10}), ValidationError);
  CHECK_THROWS_AS(NonlinearMap(Weinberg{pauli_x(), skew, 1.0, 1.0, 10}), ValidationError);
  CHECK_THROWS_AS(NonlinearMap(Weinberg{pauli_x(), pauli_z(), 1.0, 1.0, 0}), ValidationError);
  CHECK(default_weinberg_steps(1.0) == 1000);
  CHECK(default_weinberg_steps(2.5) == 2500);
}

TEST_CASE("apply_map examples") {
  Rng rng(1);
  const DensityMatrix rho = random_density(3, 2, rng);
  CHECK(max_abs(apply_map(identity_channel(3), rho).matrix() - rho.matrix()) < 1e-15);

  const DensityMatrix zero = DensityMatrix::from_pure(PureState::basis(2, 0));
  CHECK(max_abs(apply_map(depolarizing_channel(), zero).matrix() - ComplexMatrix::Identity(2, 2) * 0.5) < 1e-15);

  const DensityMatrix out = apply_map(NonlinearMap(PurityPower{2}), diag2(0.25, 0.75));
  CHECK(max_abs(out.matrix() - diag2(0.1, 0.9).matrix()) < 1e-15);

  CHECK_THROWS_AS(apply_map(identity_channel(3), zero), ValidationError);
}

TEST_CASE("map faults and output hermitization") {
  const DensityMatrix half = DensityMatrix::maximally_mixed(2);
  const DynamicalMap doubling = Blackbox{2, [](const DensityMatrix& r) -> ComplexMatrix { return 2.0 * r.matrix(); }};
  CHECK_THROWS_AS(apply_map(doubling, half), MapFault);
  const DynamicalMap negative = Blackbox{2, [](const DensityMatrix&) -> ComplexMatrix { return diag2(1.0, 0.0).matrix() + pauli_x(); }};
  CHECK_THROWS_AS(apply_map(negative, half), MapFault);
  const DynamicalMap wrong_size = Blackbox{2, [](const DensityMatrix&) -> ComplexMatrix { return ComplexMatrix::Identity(3, 3) / 3.0; }};
  CHECK_THROWS_AS(apply_map(wrong_size, half), MapFault);
  const DynamicalMap noisy = Blackbox{2, [](const DensityMatrix& r) -> ComplexMatrix {
    ComplexMatrix m = r.matrix();
    m(0, 1) += 1e-11;
    return m;
  }};
  const DensityMatrix fixed = apply_map(noisy, half);
  CHECK(hermiticity_defect(fixed.matrix()) == 0.0);
  CHECK(std::abs(fixed.matrix()(0, 1)) == doctest::Approx(5e-12));

  Weinberg blowup = qubit_weinberg(1.0, 1e300, 1);
  CHECK_THROWS_AS(weinberg_evolve(blowup, PureState::basis(2, 0)), MapFault);
  CHECK_THROWS_AS(apply_map(NonlinearMap(blowup), half), MapFault);
}

TEST_CASE("channel outputs are density matrices") {
  Rng rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = 2 + trial % 3;
    const KrausChannel c = random_channel(d, rng.uniform_int(1, 4), rng);
    const DensityMatrix out = apply_map(c, random_density(d, rng.uniform_int(1, d), rng));
    CHECK(hermiticity_defect(out.matrix()) <= 1e-12);
    CHECK(std::abs(out.matrix().trace().real() - 1.0) <= 1e-12);
    CHECK(hermitian_eigen(out.matrix()).values(0) >= -1e-10);
  }
}

TEST_CASE("weinberg with zero coupling is a linear rotation") {
  const Weinberg w0{pauli_z(), pauli_z(), 0.0, std::numbers::pi / 2, 1000};
  CHECK(overlap(weinberg_evolve(w0, plus()), minus()) == doctest::Approx(1.0).epsilon(1e-12));
  Weinberg full = w0;
  full.duration = std::numbers::pi;
  full.steps = 3142;
  CHECK(overlap(weinberg_evolve(full, plus()), plus()) == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 3;
    const double t = rng.uniform(0.1, 2.0);
    const Weinberg w{random_hermitian(d, rng), random_hermitian(d, rng), 0.0, t, default_weinberg_steps(t)};
    const PureState psi = haar_state(d, rng);
    const ComplexVector exact = closed_form_evolution(w.h, t) * psi.amplitudes();
    CHECK(max_abs(weinberg_evolve(w, psi).amplitudes() - exact) < 1e-8);
  }
}

TEST_CASE("weinberg fixed point and reference integration") {
  CHECK(overlap(weinberg_evolve(qubit_weinberg(), plus()), plus()) == doctest::Approx(1.0).epsilon(1e-12));

  const Weinberg w = qubit_weinberg();
  const ComplexVector raw = weinberg_integrate(w, PureState::basis(2, 0).amplitudes());
  CHECK(std::abs(raw.norm() - 1.0) < 1e-9);
  const PureState out = weinberg_evolve(w, PureState::basis(2, 0));
  CHECK(std::abs(out.amplitudes()(0) - reference::kAmp0) < 1e-9);
  CHECK(std::abs(out.amplitudes()(1) - reference::kAmp1) < 1e-9);
  const DensityMatrix rho = DensityMatrix::from_pure(out);
  CHECK(std::abs(expectation(rho, pauli_x()) - reference::kBlochX) < 1e-9);
  CHECK(std::abs(expectation(rho, pauli_y()) - reference::kBlochY) < 1e-9);
  CHECK(std::abs(expectation(rho, pauli_z()) - reference::kBlochZ) < 1e-9);
}

TEST_CASE("weinberg norm drift stays below 1e-9") {
  Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 2 + trial % 3;
    const double t = rng.uniform(0.1, 2.0);
    const Weinberg w{random_hermitian(d, rng), random_hermitian(d, rng), rng.uniform(-2.0, 2.0), t, 1000};
    const ComplexVector raw = weinberg_integrate(w, haar_state(d, rng).amplitudes());
    CHECK(std::abs(raw.norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("evolve_ensemble examples") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3;
    const KrausChannel c = random_channel(d, 3, rng);
    const DensityMatrix rho = random_density(d, d, rng);
    const Ensemble e = hjw_ensemble(rho, random_isometry(d + 2, d, rng));
    CHECK(max_abs(evolve_ensemble(c, e).matrix() - apply_map(c, rho).matrix()) < 1e-12);
  }

  const DynamicalMap square = NonlinearMap(PurityPower{2});
  const Ensemble diag({{0.25, PureState::basis(2, 0)}, {0.75, PureState::basis(2, 1)}});
  const DensityMatrix componentwise = evolve_ensemble(square, diag);
  CHECK(max_abs(componentwise.matrix() - diag2(0.25, 0.75).matrix()) < 1e-15);
  CHECK(trace_distance(componentwise, apply_map(square, diag2(0.25, 0.75))) == doctest::Approx(0.15).epsilon(1e-12));

  const DynamicalMap wb = NonlinearMap(qubit_weinberg());
  const DensityMatrix comp = evolve_ensemble(wb, Ensemble({{0.5, PureState::basis(2, 0)}, {0.5, PureState::basis(2, 1)}}));
  const DensityMatrix pm = evolve_ensemble(wb, Ensemble({{0.5, plus()}, {0.5, minus()}}));
  CHECK(std::abs(expectation(comp, pauli_x()) - reference::kBlochX) < 1e-9);
  CHECK(std::abs(expectation(comp, pauli_y())) < 1e-12);
  CHECK(std::abs(expectation(comp, pauli_z())) < 1e-12);
  CHECK(max_abs(pm.matrix() - ComplexMatrix::Identity(2, 2) * 0.5) < 1e-9);
  CHECK(std::abs(trace_distance(comp, pm) - reference::kPairDeviation) < 1e-9);
}

TEST_CASE("linear maps give decomposition-independent evolution") {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 3;
    const KrausChannel c = random_channel(d, rng.uniform_int(1, 4), rng);
    const DensityMatrix rho = random_density(d, d, rng);
    const int r = rho.rank();
    const Ensemble e1 = hjw_ensemble(rho, random_isometry(rng.uniform_int(r, 2 * r), r, rng));
    const Ensemble e2 = hjw_ensemble(rho, random_isometry(rng.uniform_int(r, 2 * r), r, rng));
    const DensityMatrix a = evolve_ensemble(c, e1), b = evolve_ensemble(c, e2);
    const DensityMatrix direct = apply_map(c, rho);
    CHECK(trace_distance(a, b) < 1e-10);
    CHECK(trace_distance(a, direct) < 1e-10);
  }
}

TEST_CASE("weinberg on mixed input evolves the eigen-ensemble") {
  const DynamicalMap wb = NonlinearMap(qubit_weinberg());
  const DensityMatrix rho = diag2(0.3, 0.7);
  CHECK(max_abs(apply_map(wb, rho).matrix() - evolve_ensemble(wb, eigen_ensemble(rho)).matrix()) < 1e-14);
}

TEST_CASE("embed_local examples") {
  const TensorStructure qq{2, 2};
  Rng rng(7);
  const DensityMatrix rho = random_density(4, 3, rng);
  for (int f = 0; f < 2; ++f) {
    CHECK(max_abs(apply_map(embed_local(identity_channel(2), qq, {f}), rho).matrix() - rho.matrix()) < 1e-15);
  }
  const DensityMatrix zz = DensityMatrix::from_pure(PureState::basis(4, 0));
  const DensityMatrix flipped = apply_map(embed_local(unitary_channel(pauli_x()), qq, {1}), zz);
  CHECK(max_abs(flipped.matrix() - PureState::basis(4, 1).projector()) < 1e-15);

  const TensorStructure s23{2, 3};
  const DensityMatrix joint = random_density(6, 4, rng);
  const DynamicalMap local = embed_local(unitary_channel(haar_unitary(2, rng)), s23, {0});
  CHECK(max_abs(partial_trace(apply_map(local, joint), s23, {1}).matrix() - partial_trace(joint, s23, {1}).matrix()) < 1e-12);
}

TEST_CASE("embed_local matches an explicit Kronecker construction") {
  Rng rng(8);
  const TensorStructure s{2, 3, 2};
  const KrausChannel c = random_channel(4, 2, rng);
  const DensityMatrix rho = random_density(12, 4, rng);
  // Acting on factors {0,2}: permute to (0,2,1), apply K (x) I3, permute back.
  const DensityMatrix out = apply_map(embed_local(c, s, {0, 2}), rho);
  const Regrouping rg = regroup_factors(s, {{0}, {2}, {1}});
  const ComplexMatrix moved = relabel(rho.matrix(), rg.index_map);
  ComplexMatrix acc = ComplexMatrix::Zero(12, 12);
  for (const auto& k : c.operators()) {
    const ComplexMatrix big = tensor_product(k, ComplexMatrix(ComplexMatrix::Identity(3, 3)));
    acc += big * moved * big.adjoint();
  }
  CHECK(max_abs(relabel(acc, invert_index_map(rg.index_map)) - out.matrix()) < 1e-14);
}

TEST_CASE("embedded channels leave the complement marginal invariant") {
  Rng rng(9);
  const std::vector<std::vector<int>> shapes = {{2, 2}, {2, 3}, {3, 2, 2}, {2, 2, 2}};
  for (int trial = 0; trial < 200; ++trial) {
    const TensorStructure s{std::vector<int>(shapes[trial % shapes.size()])};
    const int n = s.factor_count();
    std::vector<int> acting;
    for (int f = 0; f < n; ++f)
      if (rng.uniform() < 0.5) acting.push_back(f);
    if (acting.empty() || static_cast<int>(acting.size()) == n) acting = {rng.uniform_int(0, n - 1)};
    const FactorSubset a(acting);
    const KrausChannel c = random_channel(s.subset_dim(a), rng.uniform_int(1, 3), rng);
    const DensityMatrix rho = random_density(s.total_dim(), 3, rng);
    const FactorSubset rest = s.complement(a);
    CHECK(max_abs(partial_trace(apply_map(embed_local(c, s, a), rho), s, rest).matrix() -
                  partial_trace(rho, s, rest).matrix()) < 1e-12);
  }
}

TEST_CASE("embed_local errors") {
  const TensorStructure qq{2, 2};
  CHECK_THROWS_AS(embed_local(NonlinearMap(PurityPower{2}), qq, {0}), ValidationError);
  CHECK_THROWS_AS(embed_local(identity_channel(3), qq, {0}), ValidationError);
  CHECK_THROWS_AS(embed_local(make_blackbox(identity_channel(2)), qq, {0}), ValidationError);
  CHECK_THROWS_AS(embed_local(identity_channel(2), qq, FactorSubset{}), ValidationError);
}

TEST_CASE("make_blackbox is transparent and opaque") {
  Rng rng(10);
  const DensityMatrix rho = random_density(2, 2, rng);
  CHECK(max_abs(apply_map(make_blackbox(identity_channel(2)), rho).matrix() - rho.matrix()) < 1e-15);

  const DynamicalMap box = make_blackbox(depolarizing_channel());
  for (int trial = 0; trial < 100; ++trial) {
    const DensityMatrix r = random_density(2, rng.uniform_int(1, 2), rng);
    CHECK(max_abs(apply_map(box, r).matrix() - apply_map(depolarizing_channel(), r).matrix()) == 0.0);
  }

  const DynamicalMap hidden = make_blackbox(NonlinearMap(PurityPower{2}));
  CHECK(hidden.kind() == MapKind::opaque);
  CHECK(hidden.kind_name() == "opaque");
  CHECK(hidden.channel() == nullptr);
  CHECK(hidden.nonlinear() == nullptr);
  CHECK(make_blackbox(depolarizing_channel()).channel() == nullptr);
}

}  // TEST_SUITE
