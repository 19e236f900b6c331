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
 * End-to-end experiments: a Scenario bundles a model, a preparation, a
 * pointer, a calibration and a schedule; run_scenario executes the condition
 * check, the constancy check, the repeatability protocol, the dispersion
 * experiment and the sigma aggregation and returns one table row.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qmeasure/measurement.hpp"
#include "qmeasure/model.hpp"
#include "qmeasure/parallel.hpp"

namespace qmeasure {

struct GeneratedModel {
    std::size_t dS = 2;
    std::size_t dM = 2;
    ModelFamily family;
    std::uint64_t seed = 0;
};

using ModelSpec = std::variant<GeneratedModel, BipartiteModel>;

struct Schedule {
    double tau = 1.0;
    double dtau = 0.5;
    std::size_t repeats = 5;
    std::size_t trials = 200;
    double t_max = 10.0;                 ///< constancy horizon
    std::size_t constancy_points = 101; ///< samples on [0, t_max]
};

struct Scenario {
    std::string name;
    ModelSpec model;
    Preparation preparation = IndexPreparation{};
    std::optional<HermitianOperator> pointer; ///< defaults to hM
    std::optional<std::vector<std::vector<double>>> calibration; ///< c[i][lambda]
    Schedule schedule;
    std::uint64_t seed = 0; ///< sampling seed
};

/// Exact structural equality (matrices compared entry by entry).
[[nodiscard]] bool operator==(const Scenario &a, const Scenario &b);

/// Concrete objects a scenario describes.
struct ResolvedScenario {
    BipartiteModel model;
    PointerObservable pointer;
    Calibration calibration;
};

[[nodiscard]] BipartiteModel build_model(const ModelSpec &spec);
[[nodiscard]] ResolvedScenario resolve(const Scenario &s);

struct SweepRow {
    double eta = 0.0; ///< NaN for explicit models
    std::uint64_t seed = 0;
    double eq4_defect = 0.0;
    double eq5_defect = 0.0;
    double constancy_dev = 0.0;
    std::size_t repeat_changes = 0;
    double reading_variance = 0.0;
    double sigma_analytic = 0.0;
    double sigma_empirical = 0.0;
};

struct ScenarioResult {
    SweepRow row;
    ConditionReport conditions;
    std::vector<double> distribution; ///< Born weights at tau
    DispersionResult dispersion;
    MeasurementRecord repeats;
};

/// Runs the full pipeline. Errors keep their type; InputError messages are
/// prefixed with the scenario name.
[[nodiscard]] ScenarioResult run_scenario(const Scenario &s,
                                          Execution exec = Execution::serial);

using SweepResult = std::vector<SweepRow>;

inline const std::vector<double> default_eta_grid{0.0, 0.25, 0.5, 0.75, 1.0};

/// One row per (eta, seed), eta-major. Each point is an interpolated(eta)
/// model with seed `seed`, prepared in |0> (x) |m_0> with hM as pointer and
/// sampled with the same seed. Points run independently; `exec` only
/// changes how they are scheduled, never the result.
[[nodiscard]] SweepResult interpolation_sweep(std::size_t dS, std::size_t dM,
                                              const std::vector<double> &eta_grid,
                                              const std::vector<std::uint64_t> &seeds,
                                              const Schedule &schedule,
                                              Execution exec = Execution::serial);

/// Header: eta,seed,eq4_defect,eq5_defect,constancy_dev,repeat_changes,
/// reading_variance,sigma_analytic,sigma_empirical
void write_sweep_csv(std::ostream &out, const SweepResult &rows);

} // namespace qmeasure
