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
 * Unitary evolution of the joint density operator,
 *
 *   i d(omega)/dt = [hS (x) I, omega] + [hC, omega] + [I (x) hM, omega],
 *
 * by two independent routes: the exact spectral propagator and a classical
 * fourth-order Runge-Kutta integrator driven by the three-term right-hand
 * side. The exact route is the one every experiment uses.
 */

#pragma once

#include <iosfwd>
#include <vector>

#include "qmeasure/linalg.hpp"
#include "qmeasure/model.hpp"

namespace qmeasure {

/// d(omega)/dt with the three commutators evaluated separately.
[[nodiscard]] ComplexMatrix rhs_component_form(const BipartiteModel &m,
                                               const DensityOperator &w);

/// d(omega)/dt = -i [H, omega] with H the total Hamiltonian.
[[nodiscard]] ComplexMatrix rhs_full_commutator(const BipartiteModel &m,
                                                const DensityOperator &w);

/// U w0 U^dagger with U = exp(-i H t). Requires t >= 0.
[[nodiscard]] DensityOperator evolve_exact(const BipartiteModel &m,
                                           const DensityOperator &w0, double t);

/// Precomputed propagator for repeated evolution under one Hamiltonian.
class ExactEvolver {
  public:
    explicit ExactEvolver(const BipartiteModel &m);

    [[nodiscard]] DensityOperator evolve(const DensityOperator &w0,
                                         double t) const;

  private:
    SpectralDecomposition spectrum_;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityOperator> states;

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
    [[nodiscard]] const DensityOperator &back() const { return states.back(); }
};

/// Positivity tolerance applied to stepped states.
inline constexpr double stepped_pos_tolerance = 1e-7;
inline constexpr double default_time_step = 1e-3;

/// RK4 on a uniform grid of ceil(t_end / dt) steps over [0, t_end] (the step
/// is shortened to t_end / steps when dt does not divide t_end). Every state
/// is stored and re-validated; a state that is not a density operator within
/// stepped_pos_tolerance raises IntegrationFailure with its time.
[[nodiscard]] Trajectory evolve_stepped(const BipartiteModel &m,
                                        const DensityOperator &w0,
                                        double t_end, double dt);

/// Exact trajectory sampled on `times` (ascending, starting at 0).
[[nodiscard]] Trajectory evolve_exact_on_grid(const BipartiteModel &m,
                                              const DensityOperator &w0,
                                              const std::vector<double> &times);

/// max_t ||omega(t) - omega(0)||_F over `t_grid` for the prepared product
/// state, using the exact propagator.
[[nodiscard]] double state_constancy_check(const BipartiteModel &m,
                                           const Preparation &prep,
                                           const SpectralDecomposition &pointer_basis,
                                           const std::vector<double> &t_grid);

[[nodiscard]] double state_constancy_check(const BipartiteModel &m,
                                           const Preparation &prep,
                                           const std::vector<double> &t_grid);

/// `count` evenly spaced points over [0, t_max], both ends included.
[[nodiscard]] std::vector<double> uniform_grid(double t_max, std::size_t count);

/// Header: time, then re_r_c,im_r_c for every (r, c) in row-major joint
/// index order.
void write_trajectory_csv(std::ostream &out, const Trajectory &trajectory);

} // namespace qmeasure
