// Copyright 2026 The kvbf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <string>
#include <vector>

#include "kvbf/assembly.hpp"

namespace kvbf::app {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  ///< worst observed value against its threshold
};

/// Invariant and property suite:
///   quadrature exactness, element matrices against exact values,
///   nonlinear Jacobians against central differences, skew-symmetric
///   convection, Forchheimer monotonicity, discrete energy decay,
///   discrete incompressibility and zero mean pressure on every step,
///   vorticity projection consistency.
/// The transient checks use `params` (both element families).
std::vector<CheckResult> run_property_checks(const ModelParams& params, int threads = 1);

}  // namespace kvbf::app
