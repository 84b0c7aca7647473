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

// JSON encoding. Complex numbers are [re, im] pairs (a bare number is read
// as a real entry), matrices are row-major nested arrays, states are arrays
// of complex entries. Doubles are written with round-trip precision.

#include <string>

#include "json.hpp"

#include "ensdyn/dynamics.hpp"
#include "ensdyn/ensembles.hpp"
#include "ensdyn/qstatics.hpp"
#include "ensdyn/witness.hpp"

namespace ensdyn {

using json = nlohmann::json;

json to_json(Complex z);
json to_json(const ComplexVector& v);
json to_json(const ComplexMatrix& m);
/// Bare amplitude array.
json to_json(const PureState& psi);
/// {"dim": d, "matrix": [[...]]}
json to_json(const DensityMatrix& rho);
/// {"factor_dims": [...], "total_dim": n}
json to_json(const TensorStructure& s);
/// {"members": [{"p": real, "state": [...]}, ...]}
json to_json(const Ensemble& e);
/// List of state vectors.
json to_json(const SteeringBasis& b);
/// Map schema; opaque maps encode as {"kind": "opaque", "dim": d}.
json to_json(const DynamicalMap& map);
json to_json(const OutcomeRecord& r);
json to_json(const LinearityCertificate& c);
json to_json(const ChoiMatrix& c);
json to_json(const CptpReport& r);
json to_json(const WitnessReport& r);

// Decoders throw ValidationError on malformed input.
Complex complex_from_json(const json& j);
ComplexVector vector_from_json(const json& j);
/// Accepts a nested array or an object with a "matrix" field.
ComplexMatrix matrix_from_json(const json& j);
PureState state_from_json(const json& j);
DensityMatrix density_from_json(const json& j);
TensorStructure structure_from_json(const json& j);
Ensemble ensemble_from_json(const json& j);
SteeringBasis basis_from_json(const json& j);
DynamicalMap map_from_json(const json& j);

/// Parses `text` as inline JSON when it starts with '{' or '[', otherwise
/// reads it as a file path.
json load_json_argument(const std::string& text);

}  // namespace ensdyn
