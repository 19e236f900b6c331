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

#include <cmath>
#include <numbers>

#include <catch_amalgamated.hpp>

#include "qmeasure/dynamics.hpp"
#include "qmeasure/errors.hpp"
#include "qmeasure/oracle.hpp"
#include "qmeasure/scenario_file.hpp"
#include "test_support.hpp"

using namespace qmeasure;
using qmeasure::testing::distance;
using qmeasure::testing::source_path;
using Catch::Approx;
using Index = Eigen::Index;

namespace {

/// Reorders a joint operator from system-major (i dM + lambda) to
/// apparatus-major (lambda dS + i) indexing.
ComplexMatrix swap_factor_order(const ComplexMatrix &w, std::size_t dS, std::size_t dM) {
    const auto s = static_cast<Index>(dS);
    const auto m = static_cast<Index>(dM);
    ComplexMatrix out(w.rows(), w.cols());
    for (Index i = 0; i < s; ++i)
        for (Index a = 0; a < m; ++a)
            for (Index j = 0; j < s; ++j)
                for (Index b = 0; b < m; ++b)
                    out(a * s + i, b * s + j) = w(i * m + a, j * m + b);
    return out;
}

/// Same, inverse direction.
ComplexMatrix unswap_factor_order(const ComplexMatrix &w, std::size_t dS, std::size_t dM) {
    const auto s = static_cast<Index>(dS);
    const auto m = static_cast<Index>(dM);
    ComplexMatrix out(w.rows(), w.cols());
    for (Index i = 0; i < s; ++i)
        for (Index a = 0; a < m; ++a)
            for (Index j = 0; j < s; ++j)
                for (Index b = 0; b < m; ++b)
                    out(i * m + a, j * m + b) = w(a * s + i, b * s + j);
    return out;
}

/// An implementation that reads the joint index apparatus-major throughout.
OracleSubject transposed_convention() {
    const OracleSubject lib = OracleSubject::library();
    OracleSubject bad;
    bad.rhs = [lib](const BipartiteModel &m, const DensityOperator &w) {
        const DensityOperator swapped(swap_factor_order(w.matrix(), m.dS(), m.dM()));
        return unswap_factor_order(lib.rhs(m, swapped), m.dS(), m.dM());
    };
    bad.evolve = [lib](const BipartiteModel &m, const DensityOperator &w, double t) {
        const DensityOperator swapped(swap_factor_order(w.matrix(), m.dS(), m.dM()));
        return DensityOperator(
            unswap_factor_order(lib.evolve(m, swapped, t).matrix(), m.dS(), m.dM()));
    };
    bad.distribution = [lib](const DensityOperator &w, const PointerObservable &p,
                             std::size_t dS, std::size_t dM) {
        const DensityOperator swapped(swap_factor_order(w.matrix(), dS, dM));
        return lib.distribution(swapped, p, dS, dM);
    };
    return bad;
}

/// An implementation that evolves omega^T, i.e. runs time backwards.
OracleSubject transposed_state() {
    OracleSubject bad = OracleSubject::library();
    bad.evolve = [](const BipartiteModel &m, const DensityOperator &w, double t) {
        const DensityOperator wt(ComplexMatrix(w.matrix().transpose()));
        return DensityOperator(ComplexMatrix(evolve_exact(m, wt, t).matrix().transpose()));
    };
    return bad;
}

} // namespace

TEST_CASE("oracle building blocks match closed forms", "[oracle]") {
    SECTION("Taylor propagator") {
        ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
        expected(0, 0) = Complex(0.0, -1.0);
        expected(1, 1) = Complex(0.0, 1.0);
        CHECK(distance(oracle::taylor_propagator(pauli_z().matrix(), std::numbers::pi / 2.0),
                       expected) < 1e-13);
        // exp(-i sx t) = cos t I - i sin t sx, at a time that forces squaring.
        const double t = 7.3;
        const ComplexMatrix rot = std::cos(t) * ComplexMatrix::Identity(2, 2) +
                                  Complex(0.0, -std::sin(t)) * pauli_x().matrix();
        CHECK(distance(oracle::taylor_propagator(pauli_x().matrix(), t), rot) < 1e-12);
        CHECK(oracle::taylor_propagator(ComplexMatrix::Zero(3, 3), 5.0) ==
              ComplexMatrix::Identity(3, 3));
    }
    SECTION("Born weights by index loops") {
        ComplexVector psi = ComplexVector::Zero(4);
        psi(0) = 1.0 / std::sqrt(2.0);
        psi(3) = 1.0 / std::sqrt(2.0);
        const auto p = oracle::born_weights_index_loops(psi * psi.adjoint(),
                                                        ComplexMatrix::Identity(2, 2), 2, 2);
        CHECK(p[0] == Approx(0.5));
        CHECK(p[1] == Approx(0.5));
    }
    SECTION("component right-hand side by index loops") {
        const BipartiteModel m(2, 2, pauli_z(), pauli_z(), tensor(pauli_x(), pauli_x()));
        ComplexVector psi = ComplexVector::Zero(4);
        psi(0) = 1.0;
        // -i[H, |00><00|]: only the x-x term connects |00> to |11>.
        const ComplexMatrix rhs = oracle::rhs_index_loops(m, psi * psi.adjoint());
        CHECK(rhs(3, 0) == Complex(0.0, -1.0));
        CHECK(rhs(0, 3) == Complex(0.0, 1.0));
        CHECK(std::abs(rhs(0, 0)) == 0.0);
    }
}

TEST_CASE("library agrees with the oracles", "[oracle]") {
    SECTION("random instances at (2,2) and (2,3)") {
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            for (const auto [dS, dM] : {std::pair{2, 2}, std::pair{2, 3}}) {
                const OracleReport r = oracle_check(dS, dM, seed);
                INFO("seed " << seed << ": " << r.diff);
                CHECK(r.agree);
                CHECK(r.evolve_error <= oracle_tolerance);
            }
        }
    }
    SECTION("square qutrit pair") {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            CHECK(oracle_check(3, 3, seed).agree);
        }
    }
    SECTION("zero Hamiltonian") {
        const BipartiteModel m(2, 2, HermitianOperator::zero(2), HermitianOperator::zero(2),
                               HermitianOperator::zero(4));
        Rng rng(1);
        const OracleReport r =
            oracle_check(m, random_density(4, 4, rng), PointerObservable(pauli_x()));
        CHECK(r.agree);
        CHECK(r.evolve_error == 0.0);
    }
    SECTION("bundled scenarios") {
        for (const char *name : {"qubit-qnd", "qubit-violating", "qutrit-system", "null"}) {
            const Scenario s =
                load_scenario(source_path(std::string("scenarios/") + name + ".json"));
            const OracleReport r = oracle_check(s);
            INFO(name << ": " << r.diff);
            CHECK(r.agree);
        }
    }
    SECTION("large dimensions are refused") {
        CHECK_THROWS_AS(oracle_check(4, 2, 1), InputError);
    }
}

TEST_CASE("negative controls are detected", "[oracle]") {
    SECTION("apparatus-major index convention") {
        int detected = 0;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const OracleReport r = oracle_check(2, 3, seed, transposed_convention());
            detected += r.agree ? 0 : 1;
            CHECK(r.diff.empty() == r.agree);
        }
        CHECK(detected == 20);
        CHECK_FALSE(oracle_check(2, 2, 7, transposed_convention()).agree);
    }
    SECTION("transposed state") {
        const OracleReport r = oracle_check(2, 2, 3, transposed_state());
        CHECK_FALSE(r.agree);
        CHECK(r.evolve_error > oracle_tolerance);
        CHECK(r.diff.find("evolve") != std::string::npos);
    }
}
