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

#include "qmeasure/model.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "qmeasure/errors.hpp"

namespace qmeasure {

namespace {
using Index = Eigen::Index;
}

BipartiteModel::BipartiteModel(std::size_t dS, std::size_t dM,
                               HermitianOperator hS, HermitianOperator hM,
                               HermitianOperator hC)
    : dS_(dS), dM_(dM), hS_(std::move(hS)), hM_(std::move(hM)),
      hC_(std::move(hC)) {
    if (dS_ == 0 || dM_ == 0) {
        throw InputError("BipartiteModel: dimensions must be positive");
    }
    if (hS_.dim() != dS_ || hM_.dim() != dM_ || hC_.dim() != dS_ * dM_) {
        throw InputError("BipartiteModel: operator dimensions do not match (" +
                         std::to_string(dS_) + ", " + std::to_string(dM_) +
                         ")");
    }
}

HermitianOperator BipartiteModel::system_term() const {
    return tensor(hS_, HermitianOperator::identity(dM_));
}

HermitianOperator BipartiteModel::apparatus_term() const {
    return tensor(HermitianOperator::identity(dS_), hM_);
}

HermitianOperator total_hamiltonian(const BipartiteModel &m) {
    return m.system_term() + m.apparatus_term() + m.hC();
}

ConditionReport check_conditions(const BipartiteModel &m, double threshold) {
    if (!(threshold > 0.0)) {
        throw InputError("check_conditions: threshold must be positive");
    }
    ConditionReport report;
    report.threshold = threshold;
    report.eq4_defect = commutator_defect(m.system_term(), m.hC());
    report.eq5_defect = commutator_defect(m.hC(), m.apparatus_term());
    report.eq4_holds = report.eq4_defect <= threshold;
    report.eq5_holds = report.eq5_defect <= threshold;
    return report;
}

std::optional<std::size_t> system_label(const Preparation &p) {
    if (const auto *idx = std::get_if<IndexPreparation>(&p)) {
        return idx->system_index;
    }
    return std::nullopt;
}

DensityOperator prepare_initial(const BipartiteModel &m, const Preparation &p,
                                const SpectralDecomposition &pointer_basis) {
    if (pointer_basis.dim() != m.dM()) {
        throw InputError("prepare_initial: pointer basis has dimension " +
                         std::to_string(pointer_basis.dim()) + ", expected " +
                         std::to_string(m.dM()));
    }
    if (const auto *idx = std::get_if<IndexPreparation>(&p)) {
        if (idx->system_index >= m.dS() || idx->pointer_index >= m.dM()) {
            throw InputError("prepare_initial: index (" +
                             std::to_string(idx->system_index) + ", " +
                             std::to_string(idx->pointer_index) +
                             ") out of range");
        }
        const ComplexVector sys = spectral(m.hS()).vector(idx->system_index);
        const ComplexVector app = pointer_basis.vector(idx->pointer_index);
        return DensityOperator::pure(tensor(ComplexMatrix(sys), ComplexMatrix(app)));
    }
    const auto &mixed = std::get<MixedPreparation>(p);
    if (mixed.rho_s.dim() != m.dS() || mixed.mu_m.dim() != m.dM()) {
        throw InputError("prepare_initial: marginal dimensions do not match "
                         "the model");
    }
    return DensityOperator(tensor(mixed.rho_s.matrix(), mixed.mu_m.matrix()));
}

DensityOperator prepare_initial(const BipartiteModel &m, const Preparation &p) {
    return prepare_initial(m, p, spectral(m.hM()));
}

std::string to_string(Family f) {
    switch (f) {
    case Family::qnd:
        return "qnd";
    case Family::violating:
        return "violating";
    case Family::interpolated:
        return "interpolated";
    }
    return "unknown";
}

Family family_from_string(const std::string &name) {
    if (name == "qnd") {
        return Family::qnd;
    }
    if (name == "violating") {
        return Family::violating;
    }
    if (name == "interpolated") {
        return Family::interpolated;
    }
    throw InputError("unknown model family '" + name + "'");
}

HermitianOperator random_hermitian(std::size_t dim, Rng &rng) {
    const auto n = static_cast<Index>(dim);
    ComplexMatrix g(n, n);
    for (Index r = 0; r < n; ++r) {
        for (Index c = 0; c < n; ++c) {
            const double re = rng.normal();
            const double im = rng.normal();
            g(r, c) = Complex(re, im) / std::sqrt(2.0);
        }
    }
    return HermitianOperator(0.5 * (g + g.adjoint()));
}

DensityOperator random_density(std::size_t dim, std::size_t rank, Rng &rng) {
    if (rank == 0 || rank > dim) {
        throw InputError("random_density: rank must lie in [1, dim]");
    }
    ComplexMatrix g(static_cast<Index>(dim), static_cast<Index>(rank));
    for (Index r = 0; r < g.rows(); ++r) {
        for (Index c = 0; c < g.cols(); ++c) {
            const double re = rng.normal();
            const double im = rng.normal();
            g(r, c) = Complex(re, im);
        }
    }
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    // Remove the rounding-level anti-Hermitian part of the product.
    return DensityOperator(0.5 * (rho + rho.adjoint()));
}

namespace {

HermitianOperator diagonal_in(const SpectralDecomposition &basis, Rng &rng) {
    ComplexVector diag(static_cast<Index>(basis.dim()));
    for (Index k = 0; k < diag.size(); ++k) {
        diag(k) = rng.uniform(-1.0, 1.0);
    }
    const ComplexMatrix m =
        basis.eigenvectors * diag.asDiagonal() * basis.eigenvectors.adjoint();
    return HermitianOperator(0.5 * (m + m.adjoint()));
}

} // namespace

BipartiteModel random_model(std::size_t dS, std::size_t dM, ModelFamily family,
                            std::uint64_t seed) {
    if (dS < 2 || dM < 2) {
        throw InputError("random_model: dimensions must be at least 2");
    }
    if (family.kind == Family::interpolated &&
        !(family.eta >= 0.0 && family.eta <= 1.0)) {
        throw InputError("random_model: eta must lie in [0, 1]");
    }

    Rng rng(seed);
    HermitianOperator hS = random_hermitian(dS, rng);
    HermitianOperator hM = random_hermitian(dM, rng);

    const SpectralDecomposition basis_s = spectral(hS);
    const SpectralDecomposition basis_m = spectral(hM);
    const std::size_t terms = std::min(dS, dM);
    ComplexMatrix qnd = ComplexMatrix::Zero(static_cast<Index>(dS * dM),
                                            static_cast<Index>(dS * dM));
    for (std::size_t k = 0; k < terms; ++k) {
        const HermitianOperator a = diagonal_in(basis_s, rng);
        const HermitianOperator b = diagonal_in(basis_m, rng);
        qnd += tensor(a.matrix(), b.matrix());
    }
    const HermitianOperator violating = random_hermitian(dS * dM, rng);

    ComplexMatrix coupling;
    switch (family.kind) {
    case Family::qnd:
        coupling = qnd;
        break;
    case Family::violating:
        coupling = violating.matrix();
        break;
    case Family::interpolated:
        coupling = (1.0 - family.eta) * qnd + family.eta * violating.matrix();
        break;
    }
    return BipartiteModel(dS, dM, std::move(hS), std::move(hM),
                          HermitianOperator(std::move(coupling)));
}

} // namespace qmeasure
