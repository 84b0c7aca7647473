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

#include "ensdyn/io.hpp"

#include <fstream>
#include <sstream>

#include "ensdyn/errors.hpp"

namespace ensdyn {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw ValidationError("malformed JSON: " + what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) malformed(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

json to_json(const ComplexMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const PureState& psi) { return to_json(psi.amplitudes()); }

json to_json(const DensityMatrix& rho) { return {{"dim", rho.dim()}, {"matrix", to_json(rho.matrix())}}; }

json to_json(const TensorStructure& s) { return {{"factor_dims", s.factor_dims()}, {"total_dim", s.total_dim()}}; }

json to_json(const Ensemble& e) {
  json members = json::array();
  for (const auto& m : e.members()) members.push_back({{"p", m.weight}, {"state", to_json(m.state)}});
  return {{"members", std::move(members)}};
}

json to_json(const SteeringBasis& b) {
  json out = json::array();
  for (const auto& v : b.vectors()) out.push_back(to_json(v));
  return out;
}

json to_json(const DynamicalMap& map) {
  if (const auto* c = map.channel()) {
    json kraus = json::array();
    for (const auto& k : c->operators()) kraus.push_back(to_json(k));
    return {{"kind", "channel"}, {"label", c->label()}, {"kraus", std::move(kraus)}};
  }
  if (const auto* n = map.nonlinear()) {
    if (const auto* p = std::get_if<PurityPower>(&n->family())) {
      return {{"kind", "nonlinear"}, {"family", "purity_power"}, {"k", p->k}};
    }
    const auto& w = std::get<Weinberg>(n->family());
    return {{"kind", "nonlinear"}, {"family", "weinberg"}, {"H", to_json(w.h)}, {"V", to_json(w.v)},
            {"eps", w.eps},        {"t", w.duration},      {"steps", w.steps}};
  }
  json out = {{"kind", "opaque"}};
  if (const auto d = map.dim()) out["dim"] = *d;
  return out;
}

json to_json(const OutcomeRecord& r) {
  json out = {{"outcome_index", r.outcome_index},
              {"probability", r.probability},
              {"post_state_kept", to_json(r.post_state_kept)},
              {"post_state_joint", to_json(r.post_state_joint)}};
  if (r.kept_pure) out["post_state_kept_pure"] = to_json(*r.kept_pure);
  return out;
}

json to_json(const LinearityCertificate& c) {
  json out = {{"dim", c.dim},
              {"trials", c.trials},
              {"threshold", c.threshold},
              {"max_deviation", c.max_deviation},
              {"verdict", to_string(c.verdict)},
              {"seed", c.seed},
              {"worst_pair", nullptr}};
  if (c.worst) {
    out["worst_pair"] = {{"probe", to_string(c.worst->probe)},
                         {"rho", to_json(c.worst->rho)},
                         {"ensemble_a", to_json(c.worst->ensemble_a)},
                         {"ensemble_b", to_json(c.worst->ensemble_b)},
                         {"evolved_a", to_json(c.worst->evolved_a)},
                         {"evolved_b", to_json(c.worst->evolved_b)}};
  }
  return out;
}

json to_json(const ChoiMatrix& c) { return {{"dim", c.dim}, {"matrix", to_json(c.matrix)}}; }

json to_json(const CptpReport& r) {
  return {{"cp", r.cp}, {"tp", r.tp}, {"min_eigenvalue", r.min_eigenvalue}, {"tp_deviation", r.tp_deviation}};
}

json to_json(const WitnessReport& r) {
  return {{"deviation", r.deviation},
          {"ensemble_a", to_json(r.ensemble_a)},
          {"ensemble_b", to_json(r.ensemble_b)},
          {"evolved_a", to_json(r.evolved_a)},
          {"evolved_b", to_json(r.evolved_b)},
          {"iterations", r.iterations},
          {"evaluations", r.evaluations},
          {"restarts", r.restarts},
          {"best_restart", r.best_restart},
          {"seed", r.seed}};
}

// ---------------------------------------------------------------------------

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], "real part"), number(j[1], "imaginary part")};
  malformed("complex entries must be [re, im] or a number");
}

ComplexVector vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) malformed("state vectors must be nonempty arrays");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

ComplexMatrix matrix_from_json(const json& j) {
  const json& rows = j.is_object() ? field(j, "matrix") : j;
  if (!rows.is_array() || rows.empty() || !rows[0].is_array() || rows[0].empty()) {
    malformed("matrices must be nonempty row-major nested arrays");
  }
  const std::size_t ncols = rows[0].size();
  ComplexMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(ncols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != ncols) malformed("ragged matrix rows");
    for (std::size_t k = 0; k < ncols; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = complex_from_json(rows[i][k]);
    }
  }
  if (j.is_object() && j.contains("dim") && (m.rows() != j["dim"].get<int>() || m.cols() != m.rows())) {
    malformed("\"dim\" does not match the matrix size");
  }
  return m;
}

PureState state_from_json(const json& j) { return PureState(vector_from_json(j)); }

DensityMatrix density_from_json(const json& j) { return DensityMatrix(matrix_from_json(j)); }

TensorStructure structure_from_json(const json& j) {
  const json& dims = field(j, "factor_dims");
  if (!dims.is_array()) malformed("factor_dims must be an array");
  std::vector<int> d;
  for (const auto& x : dims) {
    if (!x.is_number_integer()) malformed("factor_dims entries must be integers");
    d.push_back(x.get<int>());
  }
  return TensorStructure(std::move(d));
}

Ensemble ensemble_from_json(const json& j) {
  const json& members = field(j, "members");
  if (!members.is_array()) malformed("members must be an array");
  std::vector<EnsembleMember> out;
  for (const auto& m : members) out.push_back({number(field(m, "p"), "p"), state_from_json(field(m, "state"))});
  return Ensemble(std::move(out));
}

SteeringBasis basis_from_json(const json& j) {
  const json& list = j.is_object() ? field(j, "vectors") : j;
  if (!list.is_array()) malformed("a steering basis is a list of state vectors");
  std::vector<PureState> vectors;
  for (const auto& v : list) vectors.push_back(state_from_json(v));
  return SteeringBasis(std::move(vectors));
}

DynamicalMap map_from_json(const json& j) {
  const json& kind = field(j, "kind");
  if (kind == "channel") {
    const json& kraus = field(j, "kraus");
    if (!kraus.is_array() || kraus.empty()) malformed("kraus must be a nonempty list of matrices");
    std::vector<ComplexMatrix> ops;
    for (const auto& k : kraus) ops.push_back(matrix_from_json(k));
    return KrausChannel(std::move(ops), j.value("label", std::string("channel")));
  }
  if (kind == "nonlinear") {
    const json& family = field(j, "family");
    if (family == "purity_power") {
      const json& k = field(j, "k");
      if (!k.is_number_integer()) malformed("k must be an integer");
      return NonlinearMap(PurityPower{k.get<int>()});
    }
    if (family == "weinberg") {
      Weinberg w;
      w.h = matrix_from_json(field(j, "H"));
      w.v = matrix_from_json(field(j, "V"));
      w.eps = number(field(j, "eps"), "eps");
      w.duration = number(field(j, "t"), "t");
      if (j.contains("steps")) {
        if (!j["steps"].is_number_integer()) malformed("steps must be an integer");
        w.steps = j["steps"].get<int>();
      } else {
        w.steps = default_weinberg_steps(w.duration);
      }
      return NonlinearMap(std::move(w));
    }
    malformed("unknown nonlinear family " + family.dump());
  }
  malformed("unknown map kind " + kind.dump());
}

json load_json_argument(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  try {
    if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) return json::parse(text);
    std::ifstream in(text);
    if (!in) throw ValidationError("cannot open " + text);
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace ensdyn
