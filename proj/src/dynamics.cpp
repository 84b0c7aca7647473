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

#include "ensdyn/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "ensdyn/errors.hpp"

namespace ensdyn {

namespace {

constexpr double kMapFaultTolerance = 1e-10;

using namespace std::complex_literals;

DensityMatrix validate_output(const ComplexMatrix& raw, int dim) {
  std::ostringstream msg;
  if (raw.rows() != dim || raw.cols() != dim) {
    msg << "map fault: output is " << raw.rows() << "x" << raw.cols() << ", expected " << dim << "x" << dim;
    throw MapFault(msg.str());
  }
  if (!all_finite(raw)) throw MapFault("map fault: non-finite output");
  if (const double h = hermiticity_defect(raw); h > kMapFaultTolerance) {
    msg << "map fault: output not Hermitian (defect " << h << ")";
    throw MapFault(msg.str());
  }
  ComplexMatrix m = (raw + raw.adjoint()) * 0.5;
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > kMapFaultTolerance) {
    msg << "map fault: output trace " << tr;
    throw MapFault(msg.str());
  }
  m /= tr;
  if (const double lo = hermitian_eigen(m).values(0); lo < -kMapFaultTolerance) {
    msg << "map fault: output has negative eigenvalue " << lo;
    throw MapFault(msg.str());
  }
  return DensityMatrix(m);
}

void check_dim(const DynamicalMap& map, int dim, const char* where) {
  if (const auto d = map.dim(); d && *d != dim) {
    std::ostringstream msg;
    msg << where << ": map acts on dimension " << *d << " but the state has dimension " << dim;
    throw ValidationError(msg.str());
  }
}

// out = -i (H + eps <y|V|y> V) y, using `scratch` for V y.
void weinberg_rhs(const Weinberg& w, const ComplexVector& y, ComplexVector& scratch, ComplexVector& out) {
  scratch.noalias() = w.v * y;
  const double expectation = y.dot(scratch).real();
  out.noalias() = w.h * y;
  out += (w.eps * expectation) * scratch;
  out *= -1.0i;
}

ComplexMatrix purity_power(const PurityPower& p, const ComplexMatrix& rho) {
  ComplexMatrix out = rho;
  for (int i = 1; i < p.k; ++i) out = out * rho;
  return out / out.trace().real();
}

}  // namespace

KrausChannel::KrausChannel(std::vector<ComplexMatrix> operators, std::string label)
    : operators_(std::move(operators)), label_(std::move(label)) {
  if (operators_.empty()) throw ValidationError("KrausChannel: no Kraus operators");
  const Eigen::Index d = operators_.front().cols();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& k : operators_) {
    if (k.rows() != d || k.cols() != d) throw ValidationError("KrausChannel: Kraus operators must be square and of equal size");
    if (!all_finite(k)) throw ValidationError("KrausChannel: non-finite Kraus entry");
    sum += k.adjoint() * k;
  }
  if (const double defect = max_abs(sum - ComplexMatrix::Identity(d, d)); defect > 1e-10) {
    std::ostringstream msg;
    msg << "KrausChannel: not trace preserving (max |sum K^dagger K - I| = " << defect << ")";
    throw ValidationError(msg.str());
  }
}

int default_weinberg_steps(double duration) {
  return std::max(1, static_cast<int>(std::ceil(1000.0 * std::abs(duration))));
}

NonlinearMap::NonlinearMap(PurityPower p) : family_(p) {
  if (p.k < 2) throw ValidationError("purity_power: exponent must be at least 2");
}

NonlinearMap::NonlinearMap(Weinberg w) : family_(std::move(w)) {
  const auto& wb = std::get<Weinberg>(family_);
  if (wb.h.rows() == 0 || wb.h.rows() != wb.h.cols() || wb.v.rows() != wb.h.rows() || wb.v.cols() != wb.h.cols()) {
    throw ValidationError("weinberg: H and V must be square matrices of equal size");
  }
  if (hermiticity_defect(wb.h) > 1e-12 || hermiticity_defect(wb.v) > 1e-12) {
    throw ValidationError("weinberg: H and V must be Hermitian");
  }
  if (wb.steps < 1) throw ValidationError("weinberg: step count must be at least 1");
  if (!std::isfinite(wb.eps) || !std::isfinite(wb.duration)) throw ValidationError("weinberg: non-finite parameter");
}

std::string NonlinearMap::family_name() const {
  return std::holds_alternative<PurityPower>(family_) ? "purity_power" : "weinberg";
}

DynamicalMap::DynamicalMap(KrausChannel channel) : impl_(std::move(channel)) {}
DynamicalMap::DynamicalMap(NonlinearMap nonlinear) : impl_(std::move(nonlinear)) {}
DynamicalMap::DynamicalMap(Blackbox blackbox) : impl_(std::move(blackbox)) {
  if (!std::get<Blackbox>(impl_).apply) throw ValidationError("Blackbox: missing application function");
}

MapKind DynamicalMap::kind() const {
  switch (impl_.index()) {
    case 0: return MapKind::channel;
    case 1: return MapKind::nonlinear;
    default: return MapKind::opaque;
  }
}

std::string DynamicalMap::kind_name() const {
  switch (kind()) {
    case MapKind::channel: return "channel";
    case MapKind::nonlinear: return "nonlinear";
    default: return "opaque";
  }
}

std::optional<int> DynamicalMap::dim() const {
  if (const auto* c = channel()) return c->dim();
  if (const auto* n = nonlinear()) {
    if (const auto* w = std::get_if<Weinberg>(&n->family())) return w->dim();
    return std::nullopt;
  }
  return std::get<Blackbox>(impl_).dim;
}

// ---------------------------------------------------------------------------

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, -1.0i, 1.0i, 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

KrausChannel identity_channel(int dim) { return KrausChannel({ComplexMatrix::Identity(dim, dim)}, "identity"); }

KrausChannel unitary_channel(const ComplexMatrix& u, std::string label) {
  if (u.rows() != u.cols() || isometry_defect(u) > 1e-10) throw ValidationError("unitary_channel: matrix is not unitary");
  return KrausChannel({u}, std::move(label));
}

KrausChannel depolarizing_channel() {
  return KrausChannel({ComplexMatrix::Identity(2, 2) * 0.5, pauli_x() * 0.5, pauli_y() * 0.5, pauli_z() * 0.5},
                      "depolarizing");
}

KrausChannel amplitude_damping_channel(double gamma) {
  if (gamma < 0.0 || gamma > 1.0) throw ValidationError("amplitude_damping: gamma must lie in [0, 1]");
  ComplexMatrix k0(2, 2);
  ComplexMatrix k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  return KrausChannel({k0, k1}, "amplitude_damping");
}

KrausChannel random_channel(int dim, int kraus_count, Rng& rng) {
  if (kraus_count < 1) throw ValidationError("random_channel: need at least one Kraus operator");
  const ComplexMatrix v = random_isometry(dim * kraus_count, dim, rng);
  std::vector<ComplexMatrix> ops;
  for (int j = 0; j < kraus_count; ++j) ops.emplace_back(v.block(j * dim, 0, dim, dim));
  return KrausChannel(std::move(ops), "random");
}

DynamicalMap transpose_map(int dim) {
  return Blackbox{dim, [](const DensityMatrix& rho) -> ComplexMatrix { return rho.matrix().transpose(); }};
}

DynamicalMap make_blackbox(DynamicalMap secret) {
  const std::optional<int> dim = secret.dim();
  auto shared = std::make_shared<const DynamicalMap>(std::move(secret));
  return Blackbox{dim, [shared](const DensityMatrix& rho) -> ComplexMatrix { return apply_map(*shared, rho).matrix(); }};
}

// ---------------------------------------------------------------------------

ComplexVector weinberg_integrate(const Weinberg& w, const ComplexVector& psi) {
  if (psi.size() != w.dim()) throw ValidationError("weinberg: state dimension does not match H");
  const double dt = w.duration / w.steps;
  const Eigen::Index d = psi.size();
  ComplexVector y = psi;
  ComplexVector k1(d), k2(d), k3(d), k4(d), stage(d), scratch(d);
  for (int n = 0; n < w.steps; ++n) {
    weinberg_rhs(w, y, scratch, k1);
    stage = y + (0.5 * dt) * k1;
    weinberg_rhs(w, stage, scratch, k2);
    stage = y + (0.5 * dt) * k2;
    weinberg_rhs(w, stage, scratch, k3);
    stage = y + dt * k3;
    weinberg_rhs(w, stage, scratch, k4);
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

PureState weinberg_evolve(const Weinberg& w, const PureState& psi) {
  const ComplexVector out = weinberg_integrate(w, psi.amplitudes());
  if (!all_finite(out)) throw MapFault("map fault: weinberg integration diverged");
  return PureState::normalized(out);
}

PureState weinberg_evolve(const NonlinearMap& map, const PureState& psi) {
  const auto* w = std::get_if<Weinberg>(&map.family());
  if (!w) throw ValidationError("weinberg_evolve: map is not of the weinberg family");
  return weinberg_evolve(*w, psi);
}

DensityMatrix apply_map(const DynamicalMap& map, const DensityMatrix& rho) {
  check_dim(map, rho.dim(), "apply_map");
  return std::visit(
      [&](const auto& impl) -> DensityMatrix {
        using T = std::decay_t<decltype(impl)>;
        if constexpr (std::is_same_v<T, KrausChannel>) {
          ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
          for (const auto& k : impl.operators()) out += k * rho.matrix() * k.adjoint();
          return validate_output(out, rho.dim());
        } else if constexpr (std::is_same_v<T, NonlinearMap>) {
          if (const auto* p = std::get_if<PurityPower>(&impl.family())) {
            return validate_output(purity_power(*p, rho.matrix()), rho.dim());
          }
          // No canonical mixed-state extension exists for state-dependent
          // Hamiltonians; evolve the spectral decomposition componentwise.
          const auto& w = std::get<Weinberg>(impl.family());
          ComplexMatrix out = ComplexMatrix::Zero(rho.dim(), rho.dim());
          const Ensemble components = eigen_ensemble(rho);
          for (const auto& member : components.members()) {
            out += member.weight * weinberg_evolve(w, member.state).projector();
          }
          return validate_output(out, rho.dim());
        } else {
          return validate_output(impl.apply(rho), rho.dim());
        }
      },
      map.impl());
}

DensityMatrix apply_map(const DynamicalMap& map, const PureState& psi) {
  if (const auto* n = map.nonlinear()) {
    if (const auto* w = std::get_if<Weinberg>(&n->family())) {
      check_dim(map, psi.dim(), "apply_map");
      return DensityMatrix::from_pure(weinberg_evolve(*w, psi));
    }
  }
  return apply_map(map, DensityMatrix::from_pure(psi));
}

DensityMatrix evolve_ensemble(const DynamicalMap& map, const Ensemble& e) {
  check_dim(map, e.dim(), "evolve_ensemble");
  ComplexMatrix out = ComplexMatrix::Zero(e.dim(), e.dim());
  for (const auto& member : e.members()) out += member.weight * apply_map(map, member.state).matrix();
  return validate_output(out, e.dim());
}

DynamicalMap embed_local(const DynamicalMap& map, const TensorStructure& structure, const FactorSubset& acting_on) {
  const auto* channel = map.channel();
  if (!channel) throw ValidationError("embed_local: only channels can be embedded (got " + map.kind_name() + ")");
  structure.check(acting_on);
  if (acting_on.empty()) throw ValidationError("embed_local: empty factor subset");
  if (channel->dim() != structure.subset_dim(acting_on)) {
    throw ValidationError("embed_local: channel dimension does not match the acted-on factors");
  }
  if (acting_on.size() == static_cast<std::size_t>(structure.factor_count())) {
    return KrausChannel(channel->operators(), channel->label());
  }

  const Regrouping rg = bipartition(structure, acting_on);
  const std::vector<int> inverse = invert_index_map(rg.index_map);
  const int rest = rg.structure.dim(1);
  std::vector<ComplexMatrix> ops;
  for (const auto& k : channel->operators()) {
    ops.push_back(relabel(tensor_product(k, ComplexMatrix::Identity(rest, rest)), inverse));
  }
  return KrausChannel(std::move(ops), "embedded(" + channel->label() + ")");
}

}  // namespace ensdyn
