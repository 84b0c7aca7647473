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

#include <stdexcept>
#include <string>

namespace ensdyn {

/// Raised when an input violates a structural contract (dimension mismatch,
/// non-normalized state, invalid partition, ...). The CLI maps it to exit 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a dynamical map produces an output that is not a density
/// matrix beyond float-noise tolerance. The CLI maps it to exit 3.
class MapFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ensdyn
