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

#include "qmeasure/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "qmeasure/csv.hpp"
#include "qmeasure/errors.hpp"

namespace qmeasure {

namespace {

using Index = Eigen::Index;

void require_square(const ComplexMatrix &m, const char *what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw InputError(std::string(what) + ": expected a non-empty square "
                                             "matrix, got " +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
    }
}

void require_same_dim(std::size_t a, std::size_t b, const char *what) {
    if (a != b) {
        throw InputError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

void require_factorization(std::size_t dim, std::size_t dS, std::size_t dM,
                           const char *what) {
    if (dS == 0 || dM == 0 || dS * dM != dim) {
        throw InputError(std::string(what) + ": dimension " +
                         std::to_string(dim) + " is not " + std::to_string(dS) +
                         "x" + std::to_string(dM));
    }
}

} // namespace

double hermiticity_defect(const ComplexMatrix &m) {
    return (m - m.adjoint()).norm();
}

bool approx_equal(const ComplexMatrix &a, const ComplexMatrix &b,
                  double tolerance) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return false;
    }
    return (a - b).norm() <= tolerance * std::max(1.0, a.norm());
}

// ---------------------------------------------------------------------------
// HermitianOperator

HermitianOperator::HermitianOperator(ComplexMatrix matrix)
    : matrix_(std::move(matrix)) {
    require_square(matrix_, "HermitianOperator");
    if (!matrix_.allFinite()) {
        throw InputError("HermitianOperator: non-finite entries");
    }
    const double defect = hermiticity_defect(matrix_);
    if (defect > tol::herm * std::max(1.0, matrix_.norm())) {
        throw InputError("HermitianOperator: hermiticity defect " +
                         format_double(defect));
    }
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
    const auto n = static_cast<Index>(dim);
    return HermitianOperator(ComplexMatrix::Zero(n, n));
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
    const auto n = static_cast<Index>(dim);
    return HermitianOperator(ComplexMatrix::Identity(n, n));
}

HermitianOperator HermitianOperator::diagonal(const std::vector<double> &entries) {
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(entries.size()),
                                          static_cast<Index>(entries.size()));
    for (std::size_t k = 0; k < entries.size(); ++k) {
        m(static_cast<Index>(k), static_cast<Index>(k)) = entries[k];
    }
    return HermitianOperator(std::move(m));
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator &rhs) const {
    require_same_dim(dim(), rhs.dim(), "HermitianOperator::operator+");
    return HermitianOperator(matrix_ + rhs.matrix_);
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator &rhs) const {
    require_same_dim(dim(), rhs.dim(), "HermitianOperator::operator-");
    return HermitianOperator(matrix_ - rhs.matrix_);
}

HermitianOperator HermitianOperator::operator*(double scale) const {
    return HermitianOperator(matrix_ * scale);
}

HermitianOperator pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return HermitianOperator(std::move(m));
}

HermitianOperator pauli_y() {
    ComplexMatrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return HermitianOperator(std::move(m));
}

HermitianOperator pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return HermitianOperator(std::move(m));
}

// ---------------------------------------------------------------------------
// DensityOperator

DensityOperator::DensityOperator(ComplexMatrix matrix, double pos_tolerance)
    : matrix_(std::move(matrix)) {
    require_square(matrix_, "DensityOperator");
    if (!matrix_.allFinite()) {
        throw InputError("DensityOperator: non-finite entries");
    }
    const double defect = hermiticity_defect(matrix_);
    if (defect > tol::herm * std::max(1.0, matrix_.norm())) {
        throw InputError("DensityOperator: hermiticity defect " +
                         format_double(defect));
    }
    const double trace_error = std::abs(matrix_.trace() - Complex(1.0, 0.0));
    if (trace_error > tol::trace) {
        throw InputError("DensityOperator: trace differs from 1 by " +
                         format_double(trace_error));
    }
    const double smallest = eigenvalues()(0);
    if (smallest < -pos_tolerance) {
        throw InputError("DensityOperator: negative eigenvalue " +
                         format_double(smallest));
    }
}

DensityOperator DensityOperator::pure(const ComplexVector &psi) {
    const double norm = psi.norm();
    if (norm == 0.0) {
        throw InputError("DensityOperator::pure: zero vector");
    }
    const ComplexVector unit = psi / norm;
    return DensityOperator(unit * unit.adjoint());
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
    const auto n = static_cast<Index>(dim);
    return DensityOperator(ComplexMatrix::Identity(n, n) /
                           static_cast<double>(dim));
}

double DensityOperator::purity() const {
    return (matrix_ * matrix_).trace().real();
}

RealVector DensityOperator::eigenvalues() const {
    // Only the Hermitian part carries spectral meaning.
    const ComplexMatrix herm = 0.5 * (matrix_ + matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm,
                                                        Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

// ---------------------------------------------------------------------------
// Spectral decomposition

ComplexMatrix SpectralDecomposition::reconstruct() const {
    return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() *
           eigenvectors.adjoint();
}

namespace {

/// Replaces the columns [first, first+size) of `vectors` with the basis
/// obtained by Gram-Schmidt on the projections of e_0, e_1, ... onto their
/// span. Candidates whose residual is tiny are skipped.
void canonicalize_block(ComplexMatrix &vectors, Index first, Index size) {
    const Index n = vectors.rows();
    const ComplexMatrix block = vectors.middleCols(first, size);
    const ComplexMatrix projector = block * block.adjoint();

    constexpr double min_residual = 1e-6;
    ComplexMatrix chosen(n, size);
    Index found = 0;
    for (Index k = 0; k < n && found < size; ++k) {
        ComplexVector v = projector.col(k);
        for (Index j = 0; j < found; ++j) {
            v -= chosen.col(j) * chosen.col(j).dot(v);
        }
        // Second pass for numerical orthogonality.
        for (Index j = 0; j < found; ++j) {
            v -= chosen.col(j) * chosen.col(j).dot(v);
        }
        const double norm = v.norm();
        if (norm > min_residual) {
            chosen.col(found++) = v / norm;
        }
    }
    if (found == size) {
        vectors.middleCols(first, size) = chosen;
    }
    // Otherwise the block is left as the solver returned it. Since the
    // squared residuals of all n candidates sum to `size`, this only happens
    // for pathological inputs near the threshold.
}

} // namespace

SpectralDecomposition spectral(const HermitianOperator &h) {
    // Symmetrize so the solver sees an exactly Hermitian matrix.
    const ComplexMatrix herm = 0.5 * (h.matrix() + h.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm);
    if (solver.info() != Eigen::Success) {
        throw InputError("spectral: eigensolver did not converge");
    }

    SpectralDecomposition result{solver.eigenvalues(), solver.eigenvectors()};
    const Index n = result.eigenvalues.size();
    Index first = 0;
    while (first < n) {
        Index last = first + 1;
        while (last < n && result.eigenvalues(last) - result.eigenvalues(last - 1) <=
                               tol::degeneracy) {
            ++last;
        }
        canonicalize_block(result.eigenvectors, first, last - first);
        first = last;
    }
    return result;
}

ComplexMatrix propagator(const HermitianOperator &h, double t) {
    const SpectralDecomposition dec = spectral(h);
    ComplexVector phases(dec.eigenvalues.size());
    for (Index k = 0; k < phases.size(); ++k) {
        phases(k) = std::polar(1.0, -dec.eigenvalues(k) * t);
    }
    return dec.eigenvectors * phases.asDiagonal() * dec.eigenvectors.adjoint();
}

// ---------------------------------------------------------------------------
// Products and reductions

ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
        }
    }
    return out;
}

HermitianOperator tensor(const HermitianOperator &a, const HermitianOperator &b) {
    return HermitianOperator(tensor(a.matrix(), b.matrix()));
}

ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
        throw InputError("commutator: dimension mismatch");
    }
    return a * b - b * a;
}

ComplexMatrix commutator(const HermitianOperator &a, const HermitianOperator &b) {
    require_same_dim(a.dim(), b.dim(), "commutator");
    return commutator(a.matrix(), b.matrix());
}

double commutator_defect(const HermitianOperator &a, const HermitianOperator &b) {
    const ComplexMatrix c = commutator(a, b);
    return c.norm() / std::max(1.0, a.matrix().norm() * b.matrix().norm());
}

DensityOperator partial_trace_M(const DensityOperator &w, std::size_t dS,
                                std::size_t dM) {
    require_factorization(w.dim(), dS, dM, "partial_trace_M");
    const auto s = static_cast<Index>(dS);
    const auto m = static_cast<Index>(dM);
    ComplexMatrix rho = ComplexMatrix::Zero(s, s);
    for (Index i = 0; i < s; ++i) {
        for (Index j = 0; j < s; ++j) {
            Complex acc = 0.0;
            for (Index l = 0; l < m; ++l) {
                acc += w.matrix()(i * m + l, j * m + l);
            }
            rho(i, j) = acc;
        }
    }
    return DensityOperator(std::move(rho));
}

DensityOperator partial_trace_S(const DensityOperator &w, std::size_t dS,
                                std::size_t dM) {
    require_factorization(w.dim(), dS, dM, "partial_trace_S");
    const auto s = static_cast<Index>(dS);
    const auto m = static_cast<Index>(dM);
    ComplexMatrix mu = ComplexMatrix::Zero(m, m);
    for (Index l = 0; l < m; ++l) {
        for (Index v = 0; v < m; ++v) {
            Complex acc = 0.0;
            for (Index i = 0; i < s; ++i) {
                acc += w.matrix()(i * m + l, i * m + v);
            }
            mu(l, v) = acc;
        }
    }
    return DensityOperator(std::move(mu));
}

double expectation(const HermitianOperator &o, const DensityOperator &rho) {
    require_same_dim(o.dim(), rho.dim(), "expectation");
    // tr(o rho) = sum_ij o_ij rho_ji
    return o.matrix().cwiseProduct(rho.matrix().transpose()).sum().real();
}

} // namespace qmeasure
