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
 * System (S) + apparatus (M) models, H = H_S (x) I + I (x) H_M + H_C, and the
 * two commutation conditions under which a readout is non-demolishing:
 *
 *   [H_S (x) I_M, H_C] = 0     (system condition)
 *   [H_C, I_S (x) H_M] = 0     (apparatus condition)
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "qmeasure/linalg.hpp"
#include "qmeasure/random.hpp"

namespace qmeasure {

class BipartiteModel {
  public:
    /// Throws InputError unless hS is dS x dS, hM is dM x dM and hC is
    /// (dS dM) x (dS dM).
    BipartiteModel(std::size_t dS, std::size_t dM, HermitianOperator hS,
                   HermitianOperator hM, HermitianOperator hC);

    [[nodiscard]] std::size_t dS() const noexcept { return dS_; }
    [[nodiscard]] std::size_t dM() const noexcept { return dM_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dS_ * dM_; }
    [[nodiscard]] const HermitianOperator &hS() const noexcept { return hS_; }
    [[nodiscard]] const HermitianOperator &hM() const noexcept { return hM_; }
    [[nodiscard]] const HermitianOperator &hC() const noexcept { return hC_; }

    /// hS (x) I_M
    [[nodiscard]] HermitianOperator system_term() const;
    /// I_S (x) hM
    [[nodiscard]] HermitianOperator apparatus_term() const;

  private:
    std::size_t dS_;
    std::size_t dM_;
    HermitianOperator hS_;
    HermitianOperator hM_;
    HermitianOperator hC_;
};

[[nodiscard]] HermitianOperator total_hamiltonian(const BipartiteModel &m);

struct ConditionReport {
    double eq4_defect = 0.0; ///< commutator_defect(hS (x) I, hC)
    double eq5_defect = 0.0; ///< commutator_defect(hC, I (x) hM)
    bool eq4_holds = false;
    bool eq5_holds = false;
    double threshold = 0.0;

    [[nodiscard]] bool both_hold() const noexcept {
        return eq4_holds && eq5_holds;
    }
};

inline constexpr double default_condition_threshold = 1e-10;

[[nodiscard]] ConditionReport
check_conditions(const BipartiteModel &m,
                 double threshold = default_condition_threshold);

/// |i> (x) |m_lambda>: i labels the hS eigenbasis, lambda the pointer basis.
struct IndexPreparation {
    std::size_t system_index = 0;
    std::size_t pointer_index = 0;
};

/// rho_S(0) (x) mu_M(0) for arbitrary marginals.
struct MixedPreparation {
    DensityOperator rho_s;
    DensityOperator mu_m;
};

using Preparation = std::variant<IndexPreparation, MixedPreparation>;

/// The system label carried into measurement records; absent for mixtures.
[[nodiscard]] std::optional<std::size_t> system_label(const Preparation &p);

/// omega(0) = rho_S(0) (x) mu_M(0). Index preparations use the eigenbasis of
/// hS for the system and `pointer_basis` for the apparatus.
[[nodiscard]] DensityOperator
prepare_initial(const BipartiteModel &m, const Preparation &p,
                const SpectralDecomposition &pointer_basis);

/// Same, with the eigenbasis of hM as the pointer basis.
[[nodiscard]] DensityOperator prepare_initial(const BipartiteModel &m,
                                              const Preparation &p);

enum class Family { qnd, violating, interpolated };

struct ModelFamily {
    Family kind = Family::qnd;
    double eta = 0.0; ///< used by Family::interpolated only

    static ModelFamily qnd() { return {Family::qnd, 0.0}; }
    static ModelFamily violating() { return {Family::violating, 1.0}; }
    static ModelFamily interpolated(double eta) {
        return {Family::interpolated, eta};
    }
};

[[nodiscard]] std::string to_string(Family f);
[[nodiscard]] Family family_from_string(const std::string &name);

/// Dense random Hermitian matrix with Gaussian entries (GUE-like).
[[nodiscard]] HermitianOperator random_hermitian(std::size_t dim, Rng &rng);

/// G G^dagger / tr(G G^dagger) for a complex Gaussian dim x rank matrix G.
[[nodiscard]] DensityOperator random_density(std::size_t dim, std::size_t rank,
                                             Rng &rng);

/// Seeded model generator. hS and hM are random Hermitian; the coupling is
///  - qnd: sum_k A_k (x) B_k, k < min(dS, dM), with A_k diagonal in the hS
///    eigenbasis and B_k diagonal in the hM eigenbasis (eigenvalues uniform
///    in [-1, 1]), so both conditions hold by construction;
///  - violating: a dense random Hermitian matrix;
///  - interpolated(eta): (1 - eta) qnd + eta violating.
/// hS, hM and both couplings are drawn in a fixed order from one stream, so
/// the three families share hS and hM for a given seed.
[[nodiscard]] BipartiteModel random_model(std::size_t dS, std::size_t dM,
                                          ModelFamily family,
                                          std::uint64_t seed);

} // namespace qmeasure
