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
 * Dense complex linear algebra on small Hilbert spaces.
 *
 * Conventions used throughout the library:
 *  - hbar = 1, so exp(-i H t) is the propagator for dimensionless H and t.
 *  - Bipartite joint index: (i, lambda) -> i * dM + lambda, system-major.
 *  - Matrix equality is always tolerance based.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace qmeasure {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double herm = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double pos = 1e-9;
inline constexpr double recon = 1e-8;
inline constexpr double comm = 1e-10;
/// Eigenvalues closer than this are treated as one degenerate block.
inline constexpr double degeneracy = 1e-9;
} // namespace tol

/// ||m - m^dagger||_F.
[[nodiscard]] double hermiticity_defect(const ComplexMatrix &m);

/// ||a - b||_F <= tolerance * max(1, ||a||_F).
[[nodiscard]] bool approx_equal(const ComplexMatrix &a, const ComplexMatrix &b,
                                double tolerance = tol::recon);

/// A square matrix equal to its adjoint within tol::herm (relative).
class HermitianOperator {
  public:
    /// Validates hermiticity; throws InputError otherwise. The stored matrix
    /// is the input as given, not a symmetrized copy.
    explicit HermitianOperator(ComplexMatrix matrix);

    static HermitianOperator zero(std::size_t dim);
    static HermitianOperator identity(std::size_t dim);
    static HermitianOperator diagonal(const std::vector<double> &entries);

    [[nodiscard]] std::size_t dim() const noexcept {
        return static_cast<std::size_t>(matrix_.rows());
    }
    [[nodiscard]] const ComplexMatrix &matrix() const noexcept {
        return matrix_;
    }

    HermitianOperator operator+(const HermitianOperator &rhs) const;
    HermitianOperator operator-(const HermitianOperator &rhs) const;
    HermitianOperator operator*(double scale) const;

  private:
    ComplexMatrix matrix_;
};

HermitianOperator pauli_x();
HermitianOperator pauli_y();
HermitianOperator pauli_z();

/// Hermitian, unit trace and positive semidefinite. Eigenvalues in
/// [-pos_tolerance, 0) are kept as they are; anything more negative is
/// rejected.
class DensityOperator {
  public:
    explicit DensityOperator(ComplexMatrix matrix,
                             double pos_tolerance = tol::pos);

    /// |psi><psi| for a normalized (or normalizable) vector.
    static DensityOperator pure(const ComplexVector &psi);
    static DensityOperator maximally_mixed(std::size_t dim);

    [[nodiscard]] std::size_t dim() const noexcept {
        return static_cast<std::size_t>(matrix_.rows());
    }
    [[nodiscard]] const ComplexMatrix &matrix() const noexcept {
        return matrix_;
    }

    [[nodiscard]] double purity() const;
    /// Ascending eigenvalues.
    [[nodiscard]] RealVector eigenvalues() const;

  private:
    ComplexMatrix matrix_;
};

/// Eigen-decomposition of a Hermitian operator. Eigenvalues ascend; the
/// columns of `eigenvectors` are orthonormal.
struct SpectralDecomposition {
    RealVector eigenvalues;
    ComplexMatrix eigenvectors;

    [[nodiscard]] std::size_t dim() const noexcept {
        return static_cast<std::size_t>(eigenvalues.size());
    }
    [[nodiscard]] ComplexVector vector(std::size_t k) const {
        return eigenvectors.col(static_cast<Eigen::Index>(k));
    }
    [[nodiscard]] ComplexMatrix reconstruct() const;
};

/// Kronecker product with system-major index layout.
[[nodiscard]] ComplexMatrix tensor(const ComplexMatrix &a,
                                   const ComplexMatrix &b);
[[nodiscard]] HermitianOperator tensor(const HermitianOperator &a,
                                       const HermitianOperator &b);

/// ab - ba.
[[nodiscard]] ComplexMatrix commutator(const ComplexMatrix &a,
                                       const ComplexMatrix &b);
[[nodiscard]] ComplexMatrix commutator(const HermitianOperator &a,
                                       const HermitianOperator &b);

/// ||[a, b]||_F / max(1, ||a||_F ||b||_F). Zero iff a and b commute.
[[nodiscard]] double commutator_defect(const HermitianOperator &a,
                                       const HermitianOperator &b);

/// Eigenvalues within tol::degeneracy of their neighbour form one block.
/// Inside every block (including size-one blocks) the basis is fixed by
/// projecting the standard basis vectors onto the block in index order and
/// orthonormalizing, which also pins the phase of each eigenvector.
[[nodiscard]] SpectralDecomposition spectral(const HermitianOperator &h);

/// exp(-i h t) built from spectral(h).
[[nodiscard]] ComplexMatrix propagator(const HermitianOperator &h, double t);

/// Reduced operator on S: (rho_S)_ij = sum_lambda w_(i,lambda),(j,lambda).
[[nodiscard]] DensityOperator partial_trace_M(const DensityOperator &w,
                                              std::size_t dS, std::size_t dM);
/// Reduced operator on M: (mu_M)_lambda,nu = sum_i w_(i,lambda),(i,nu).
[[nodiscard]] DensityOperator partial_trace_S(const DensityOperator &w,
                                              std::size_t dS, std::size_t dM);

/// Re tr(o rho).
[[nodiscard]] double expectation(const HermitianOperator &o,
                                 const DensityOperator &rho);

} // namespace qmeasure
