// Copyright 2026 The qmeasure Authors
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

/**
 * @file
 * Scenario files (JSON, `"schema": 1`).
 *
 *   {
 *     "schema": 1,
 *     "name": "qubit-qnd",
 *     "model": {
 *       "dims": [2, 2],
 *       "h_s": "pauli_z",
 *       "h_m": "pauli_z",
 *       "h_c": {"kron": ["pauli_z", "pauli_z"]}
 *     },
 *     "preparation": {"system_index": 0, "pointer_index": 0},
 *     "pointer": "pauli_z",
 *     "schedule": {"tau": 1.0, "dtau": 0.5, "repeats": 5, "trials": 1000},
 *     "seed": 12345
 *   }
 *
 * A model is either explicit (dims + h_s, h_m, h_c) or
 * {"generator": {"family": "qnd" | "violating" | "interpolated",
 *                "eta": x, "seed": n, "dims": [dS, dM]}}.
 *
 * A matrix is one of
 *   - nested arrays of [re, im] pairs (a bare number is a real entry),
 *   - "pauli_x", "pauli_y", "pauli_z", "identity(n)", "zero(n)",
 *   - {"kron": [A, B]}, {"sum": [A, B, ...]}, {"scale": [s, A]},
 *   - {"random": {"dim": n, "seed": s}} (random Hermitian).
 *
 * The preparation is either {"system_index", "pointer_index"} or
 * {"rho_s": matrix, "mu_m": matrix}. "pointer" (default: h_m),
 * "calibration" (dS x dM table, default: pointer eigenvalues), "schedule"
 * fields and "seed" are optional.
 */

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "qmeasure/errors.hpp"
#include "qmeasure/scenarios.hpp"

namespace qmeasure {

/// Malformed or invalid scenario file. The message starts with
/// "<source>:<line>:<column>:" for syntax errors and "<source>:<json
/// pointer>:" for content errors.
class ScenarioFileError : public InputError {
  public:
    using InputError::InputError;
};

[[nodiscard]] Scenario parse_scenario(std::string_view text,
                                      const std::string &source = "<input>");

[[nodiscard]] Scenario load_scenario(const std::filesystem::path &path);

/// Canonical text form: explicit matrices as [re, im] pairs, generated
/// models as generator objects. parse_scenario(render_scenario(s)) == s.
[[nodiscard]] std::string render_scenario(const Scenario &s);

} // namespace qmeasure
