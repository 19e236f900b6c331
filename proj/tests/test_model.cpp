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

#include <catch_amalgamated.hpp>

#include "qmeasure/errors.hpp"
#include "qmeasure/model.hpp"
#include "test_support.hpp"

using namespace qmeasure;
using qmeasure::testing::distance;
using Catch::Approx;
using Index = Eigen::Index;

namespace {

BipartiteModel qubit_model(const HermitianOperator &coupling) {
    return BipartiteModel(2, 2, pauli_z(), pauli_z(), coupling);
}

/// hS (x) I + I (x) hM + hC assembled entry by entry.
ComplexMatrix hamiltonian_by_loops(const BipartiteModel &m) {
    const auto s = static_cast<Index>(m.dS());
    const auto a = static_cast<Index>(m.dM());
    ComplexMatrix h = m.hC().matrix();
    for (Index i = 0; i < s; ++i)
        for (Index j = 0; j < s; ++j)
            for (Index l = 0; l < a; ++l)
                h(i * a + l, j * a + l) += m.hS().matrix()(i, j);
    for (Index i = 0; i < s; ++i)
        for (Index l = 0; l < a; ++l)
            for (Index k = 0; k < a; ++k)
                h(i * a + l, i * a + k) += m.hM().matrix()(l, k);
    return h;
}

bool bitwise_equal(const ComplexMatrix &a, const ComplexMatrix &b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

} // namespace

TEST_CASE("model construction validates dimensions", "[model]") {
    CHECK_NOTHROW(qubit_model(tensor(pauli_z(), pauli_z())));
    CHECK_THROWS_AS(BipartiteModel(2, 3, pauli_z(), pauli_z(), HermitianOperator::zero(6)),
                    InputError);
    CHECK_THROWS_AS(BipartiteModel(2, 2, pauli_z(), pauli_z(), HermitianOperator::zero(3)),
                    InputError);
    CHECK_THROWS_AS(BipartiteModel(0, 2, HermitianOperator::zero(1), pauli_z(),
                                   HermitianOperator::zero(2)),
                    InputError);
}

TEST_CASE("total Hamiltonian matches the entrywise assembly", "[model]") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const BipartiteModel m = random_model(2 + seed % 2, 3, ModelFamily::violating(), seed);
        CHECK(distance(total_hamiltonian(m).matrix(), hamiltonian_by_loops(m)) < 1e-13);
    }
}

TEST_CASE("commutation conditions", "[model]") {
    SECTION("z-z coupling satisfies both") {
        const ConditionReport r = check_conditions(qubit_model(tensor(pauli_z(), pauli_z())));
        CHECK(r.eq4_defect == 0.0);
        CHECK(r.eq5_defect == 0.0);
        CHECK(r.both_hold());
    }
    SECTION("x-x coupling violates both with unit defect") {
        // [sz (x) I, sx (x) sx] = 2i sy (x) sx, Frobenius norm 4, and the two
        // operator norms are 2 each.
        const ConditionReport r = check_conditions(qubit_model(tensor(pauli_x(), pauli_x())));
        CHECK(r.eq4_defect == Approx(1.0).epsilon(1e-14));
        CHECK(r.eq5_defect == Approx(1.0).epsilon(1e-14));
        CHECK_FALSE(r.eq4_holds);
        CHECK_FALSE(r.eq5_holds);
    }
    SECTION("z-x coupling satisfies the system condition only") {
        const ConditionReport r = check_conditions(qubit_model(tensor(pauli_z(), pauli_x())));
        CHECK(r.eq4_holds);
        CHECK_FALSE(r.eq5_holds);
    }
    SECTION("null model satisfies both") {
        const BipartiteModel m(2, 3, HermitianOperator::zero(2), HermitianOperator::zero(3),
                               HermitianOperator::zero(6));
        CHECK(check_conditions(m).both_hold());
    }
    SECTION("non-positive threshold is rejected") {
        CHECK_THROWS_AS(check_conditions(qubit_model(HermitianOperator::zero(4)), 0.0),
                        InputError);
    }
    SECTION("scaling the coupling by s >= 1 grows the defect by at most s") {
        Rng rng(5);
        for (int trial = 0; trial < 40; ++trial) {
            const BipartiteModel m = random_model(2, 3, ModelFamily::violating(),
                                                  static_cast<std::uint64_t>(100 + trial));
            const double s = rng.uniform(1.0, 10.0);
            const BipartiteModel scaled(m.dS(), m.dM(), m.hS(), m.hM(), m.hC() * s);
            const ConditionReport base = check_conditions(m);
            const ConditionReport big = check_conditions(scaled);
            CHECK(big.eq4_defect <= s * base.eq4_defect * (1.0 + 1e-12));
            CHECK(big.eq5_defect <= s * base.eq5_defect * (1.0 + 1e-12));
        }
    }
    SECTION("holding at a threshold implies holding at any larger one") {
        for (std::uint64_t seed = 1; seed <= 30; ++seed) {
            const BipartiteModel m =
                random_model(2, 2, ModelFamily::interpolated(0.01 * static_cast<double>(seed)),
                             seed);
            const ConditionReport tight = check_conditions(m, 1e-3);
            const ConditionReport loose = check_conditions(m, 1e-1);
            CHECK((!tight.eq4_holds || loose.eq4_holds));
            CHECK((!tight.eq5_holds || loose.eq5_holds));
        }
    }
}

TEST_CASE("initial preparation", "[model]") {
    const BipartiteModel m = random_model(3, 2, ModelFamily::qnd(), 17);
    const SpectralDecomposition sys = spectral(m.hS());
    const SpectralDecomposition app = spectral(m.hM());

    SECTION("index preparation is the product of eigenprojectors") {
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t l = 0; l < 2; ++l) {
                const DensityOperator w = prepare_initial(m, IndexPreparation{i, l});
                const ComplexVector a = sys.vector(i);
                const ComplexVector b = app.vector(l);
                const ComplexMatrix expected =
                    tensor(ComplexMatrix(a * a.adjoint()), ComplexMatrix(b * b.adjoint()));
                CHECK(distance(w.matrix(), expected) < 1e-13);
                CHECK(w.purity() == Approx(1.0).epsilon(1e-12));
            }
        }
    }
    SECTION("mixed preparation is a product state") {
        Rng rng(3);
        const DensityOperator rho = random_density(3, 3, rng);
        const DensityOperator mu = random_density(2, 1, rng);
        const DensityOperator w = prepare_initial(m, MixedPreparation{rho, mu});
        CHECK(approx_equal(partial_trace_M(w, 3, 2).matrix(), rho.matrix(), 1e-13));
        CHECK(approx_equal(partial_trace_S(w, 3, 2).matrix(), mu.matrix(), 1e-13));
        CHECK_FALSE(system_label(MixedPreparation{rho, mu}).has_value());
        CHECK(system_label(IndexPreparation{2, 0}) == std::optional<std::size_t>(2));
    }
    SECTION("out-of-range indices and mismatched marginals are rejected") {
        CHECK_THROWS_AS(prepare_initial(m, IndexPreparation{3, 0}), InputError);
        CHECK_THROWS_AS(prepare_initial(m, IndexPreparation{0, 2}), InputError);
        CHECK_THROWS_AS(prepare_initial(m, MixedPreparation{DensityOperator::maximally_mixed(2),
                                                            DensityOperator::maximally_mixed(2)}),
                        InputError);
        CHECK_THROWS_AS(
            prepare_initial(m, IndexPreparation{0, 0}, spectral(HermitianOperator::identity(3))),
            InputError);
    }
}

TEST_CASE("random model families", "[model]") {
    SECTION("the qnd family satisfies both conditions") {
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            for (const auto [dS, dM] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 3}}) {
                const BipartiteModel m = random_model(dS, dM, ModelFamily::qnd(), seed);
                INFO("seed " << seed << " dims " << dS << "x" << dM);
                CHECK(check_conditions(m).both_hold());
            }
        }
    }
    SECTION("the violating family violates both") {
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            const ConditionReport r =
                check_conditions(random_model(2, 2, ModelFamily::violating(), seed));
            CHECK_FALSE(r.eq4_holds);
            CHECK_FALSE(r.eq5_holds);
        }
    }
    SECTION("interpolation at eta = 0 reproduces the qnd draw bitwise") {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const BipartiteModel a = random_model(3, 2, ModelFamily::qnd(), seed);
            const BipartiteModel b = random_model(3, 2, ModelFamily::interpolated(0.0), seed);
            CHECK(bitwise_equal(a.hS().matrix(), b.hS().matrix()));
            CHECK(bitwise_equal(a.hM().matrix(), b.hM().matrix()));
            CHECK(bitwise_equal(a.hC().matrix(), b.hC().matrix()));
        }
    }
    SECTION("interpolation at eta = 1 reproduces the violating coupling") {
        const BipartiteModel a = random_model(2, 2, ModelFamily::violating(), 9);
        const BipartiteModel b = random_model(2, 2, ModelFamily::interpolated(1.0), 9);
        CHECK(distance(a.hC().matrix(), b.hC().matrix()) == 0.0);
    }
    SECTION("the defect grows with eta") {
        double previous = -1.0;
        for (const double eta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const double d =
                check_conditions(random_model(2, 3, ModelFamily::interpolated(eta), 4)).eq4_defect;
            CHECK(d > previous);
            previous = d;
        }
    }
    SECTION("generation is deterministic in the seed") {
        const BipartiteModel a = random_model(3, 3, ModelFamily::violating(), 77);
        const BipartiteModel b = random_model(3, 3, ModelFamily::violating(), 77);
        const BipartiteModel c = random_model(3, 3, ModelFamily::violating(), 78);
        CHECK(bitwise_equal(a.hC().matrix(), b.hC().matrix()));
        CHECK_FALSE(bitwise_equal(a.hC().matrix(), c.hC().matrix()));
    }
    SECTION("invalid arguments are rejected") {
        CHECK_THROWS_AS(random_model(1, 2, ModelFamily::qnd(), 1), InputError);
        CHECK_THROWS_AS(random_model(2, 2, ModelFamily::interpolated(1.5), 1), InputError);
        CHECK_THROWS_AS(random_model(2, 2, ModelFamily::interpolated(std::nan("")), 1),
                        InputError);
    }
    SECTION("family names round-trip") {
        for (const Family f : {Family::qnd, Family::violating, Family::interpolated}) {
            CHECK(family_from_string(to_string(f)) == f);
        }
        CHECK_THROWS_AS(family_from_string("sideways"), InputError);
    }
}

TEST_CASE("random density operators", "[model]") {
    Rng rng(99);
    for (std::size_t dim = 1; dim <= 6; ++dim) {
        for (std::size_t rank = 1; rank <= dim; ++rank) {
            const DensityOperator w = random_density(dim, rank, rng);
            CHECK(std::abs(w.matrix().trace() - 1.0) < tol::trace);
            const RealVector ev = w.eigenvalues();
            CHECK(ev.minCoeff() >= -tol::pos);
            const auto nonzero = (ev.array() > 1e-10).count();
            CHECK(static_cast<std::size_t>(nonzero) == rank);
        }
    }
    CHECK_THROWS_AS(random_density(3, 0, rng), InputError);
    CHECK_THROWS_AS(random_density(3, 4, rng), InputError);
}
