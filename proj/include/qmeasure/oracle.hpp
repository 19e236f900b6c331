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
 * Brute-force cross-checks for small models (dims up to 3 x 3).
 *
 * Nothing in here calls the spectral decomposition, the Kronecker helper or
 * the block-wise partial traces used by the main code paths: the propagator
 * is a scaled-and-squared Taylor series, Born weights are explicit index
 * sums over tr(omega (I (x) Pi)), and the equation-of-motion right-hand side
 * is the four-index component form written out loop by loop.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qmeasure/linalg.hpp"
#include "qmeasure/measurement.hpp"
#include "qmeasure/model.hpp"
#include "qmeasure/scenarios.hpp"

namespace qmeasure {

namespace oracle {

/// exp(-i h t) by scaling and squaring a 30-term Taylor series.
[[nodiscard]] ComplexMatrix taylor_propagator(const ComplexMatrix &h, double t);

/// d(omega)^{ik}_{lambda nu}/dt from the component sums over j and mu.
[[nodiscard]] ComplexMatrix rhs_index_loops(const BipartiteModel &m,
                                            const ComplexMatrix &omega);

/// p_lambda = sum_{r,c} omega_{rc} (I (x) Pi_lambda)_{cr}.
[[nodiscard]] std::vector<double> born_weights_index_loops(
    const ComplexMatrix &omega, const ComplexMatrix &pointer_vectors,
    std::size_t dS, std::size_t dM);

} // namespace oracle

/// The implementation under test. Defaults to the library functions; tests
/// substitute deliberately broken versions as negative controls.
struct OracleSubject {
    std::function<ComplexMatrix(const BipartiteModel &, const DensityOperator &)> rhs;
    std::function<DensityOperator(const BipartiteModel &, const DensityOperator &, double)>
        evolve;
    std::function<std::vector<double>(const DensityOperator &, const PointerObservable &,
                                      std::size_t, std::size_t)>
        distribution;

    static OracleSubject library();
};

struct OracleReport {
    bool agree = true;
    double rhs_error = 0.0;
    double evolve_error = 0.0;
    double distribution_error = 0.0;
    std::string diff; ///< human-readable list of disagreements

    explicit operator bool() const noexcept { return agree; }
};

inline constexpr double oracle_tolerance = 1e-7;
inline const std::vector<double> oracle_times{0.37, 1.9, 4.25};

/// Compares the subject against the oracles on one model and initial state.
[[nodiscard]] OracleReport oracle_check(const BipartiteModel &m,
                                        const DensityOperator &w0,
                                        const PointerObservable &pointer,
                                        const OracleSubject &subject = OracleSubject::library());

/// Random instance: violating-family model of the given dims, a random
/// full-rank initial state and hM as the pointer. Requires dS, dM <= 3.
[[nodiscard]] OracleReport oracle_check(std::size_t dS, std::size_t dM,
                                        std::uint64_t seed,
                                        const OracleSubject &subject = OracleSubject::library());

/// The scenario's model, prepared state and pointer.
[[nodiscard]] OracleReport oracle_check(const Scenario &s,
                                        const OracleSubject &subject = OracleSubject::library());

} // namespace qmeasure
