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

#include "qmeasure/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qmeasure/dynamics.hpp"
#include "qmeasure/errors.hpp"

namespace qmeasure {

namespace oracle {

namespace {

using Index = Eigen::Index;

double one_norm(const ComplexMatrix &a) {
    double best = 0.0;
    for (Index c = 0; c < a.cols(); ++c) {
        double col = 0.0;
        for (Index r = 0; r < a.rows(); ++r) {
            col += std::abs(a(r, c));
        }
        best = std::max(best, col);
    }
    return best;
}

} // namespace

ComplexMatrix taylor_propagator(const ComplexMatrix &h, double t) {
    constexpr int terms = 30;
    const ComplexMatrix generator = Complex(0.0, -t) * h;
    const double norm = one_norm(generator);
    int squarings = 0;
    if (norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    }
    const ComplexMatrix a = generator / std::ldexp(1.0, squarings);

    const Index n = h.rows();
    ComplexMatrix term = ComplexMatrix::Identity(n, n);
    ComplexMatrix sum = term;
    for (int k = 1; k < terms; ++k) {
        term = term * a / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) {
        sum = sum * sum;
    }
    return sum;
}

ComplexMatrix rhs_index_loops(const BipartiteModel &m, const ComplexMatrix &omega) {
    const auto dS = static_cast<Index>(m.dS());
    const auto dM = static_cast<Index>(m.dM());
    const ComplexMatrix &hS = m.hS().matrix();
    const ComplexMatrix &hM = m.hM().matrix();
    const ComplexMatrix &hC = m.hC().matrix();
    const auto at = [dM](Index s, Index a) { return s * dM + a; };

    ComplexMatrix out(dS * dM, dS * dM);
    for (Index i = 0; i < dS; ++i) {
        for (Index k = 0; k < dS; ++k) {
            for (Index lam = 0; lam < dM; ++lam) {
                for (Index nu = 0; nu < dM; ++nu) {
                    Complex acc = 0.0;
                    // sum_j [H_S^{ij} (x) I_{lambda nu}, omega^{jk}_{lambda nu}]
                    for (Index j = 0; j < dS; ++j) {
                        acc += hS(i, j) * omega(at(j, lam), at(k, nu)) -
                               omega(at(i, lam), at(j, nu)) * hS(j, k);
                    }
                    // sum_{j mu} [H_C^{ij}_{lambda mu}, omega^{jk}_{mu nu}]
                    for (Index j = 0; j < dS; ++j) {
                        for (Index mu = 0; mu < dM; ++mu) {
                            acc += hC(at(i, lam), at(j, mu)) *
                                       omega(at(j, mu), at(k, nu)) -
                                   omega(at(i, lam), at(j, mu)) *
                                       hC(at(j, mu), at(k, nu));
                        }
                    }
                    // sum_mu [I_{ik} (x) H_M^{lambda mu}, omega^{ik}_{mu nu}]
                    for (Index mu = 0; mu < dM; ++mu) {
                        acc += hM(lam, mu) * omega(at(i, mu), at(k, nu)) -
                               omega(at(i, lam), at(k, mu)) * hM(mu, nu);
                    }
                    out(at(i, lam), at(k, nu)) = Complex(0.0, -1.0) * acc;
                }
            }
        }
    }
    return out;
}

std::vector<double> born_weights_index_loops(const ComplexMatrix &omega,
                                             const ComplexMatrix &pointer_vectors,
                                             std::size_t dS, std::size_t dM) {
    const auto s = static_cast<Index>(dS);
    const auto m = static_cast<Index>(dM);
    const Index n = s * m;
    std::vector<double> p(dM, 0.0);
    for (Index lam = 0; lam < m; ++lam) {
        // (I (x) Pi)_{(a,alpha),(b,beta)} = delta_ab v_alpha conj(v_beta)
        const auto lifted = [&](Index row, Index col) -> Complex {
            const Index a = row / m;
            const Index alpha = row % m;
            const Index b = col / m;
            const Index beta = col % m;
            if (a != b) {
                return 0.0;
            }
            return pointer_vectors(alpha, lam) * std::conj(pointer_vectors(beta, lam));
        };
        Complex trace = 0.0;
        for (Index r = 0; r < n; ++r) {
            for (Index c = 0; c < n; ++c) {
                trace += omega(r, c) * lifted(c, r);
            }
        }
        p[static_cast<std::size_t>(lam)] = trace.real();
    }
    return p;
}

} // namespace oracle

OracleSubject OracleSubject::library() {
    OracleSubject s;
    s.rhs = [](const BipartiteModel &m, const DensityOperator &w) {
        return rhs_component_form(m, w);
    };
    s.evolve = [](const BipartiteModel &m, const DensityOperator &w, double t) {
        return evolve_exact(m, w, t);
    };
    s.distribution = [](const DensityOperator &w, const PointerObservable &p,
                        std::size_t dS, std::size_t dM) {
        return outcome_distribution(w, p, dS, dM);
    };
    return s;
}

OracleReport oracle_check(const BipartiteModel &m, const DensityOperator &w0,
                          const PointerObservable &pointer,
                          const OracleSubject &subject) {
    if (m.dS() > 3 || m.dM() > 3) {
        throw InputError("oracle_check: dimensions above 3x3 are not supported");
    }
    OracleReport report;
    std::ostringstream diff;
    const auto relative = [](const ComplexMatrix &a, const ComplexMatrix &b) {
        return (a - b).norm() / std::max(1.0, b.norm());
    };

    // Total Hamiltonian by index loops, independent of the tensor helper.
    ComplexMatrix h_loops = m.hC().matrix();
    const auto dS = static_cast<Eigen::Index>(m.dS());
    const auto dM = static_cast<Eigen::Index>(m.dM());
    for (Eigen::Index i = 0; i < dS; ++i) {
        for (Eigen::Index j = 0; j < dS; ++j) {
            for (Eigen::Index a = 0; a < dM; ++a) {
                h_loops(i * dM + a, j * dM + a) += m.hS().matrix()(i, j);
            }
        }
        for (Eigen::Index a = 0; a < dM; ++a) {
            for (Eigen::Index b = 0; b < dM; ++b) {
                h_loops(i * dM + a, i * dM + b) += m.hM().matrix()(a, b);
            }
        }
    }

    // Right-hand side and Born weights are probed at w0 and every evolved state.
    std::vector<DensityOperator> probes{w0};
    for (const double t : oracle_times) {
        const ComplexMatrix u = oracle::taylor_propagator(h_loops, t);
        const ComplexMatrix expected = u * w0.matrix() * u.adjoint();
        const DensityOperator got = subject.evolve(m, w0, t);
        const double err = relative(got.matrix(), expected);
        report.evolve_error = std::max(report.evolve_error, err);
        if (err > oracle_tolerance) {
            diff << "evolve(t=" << t << "): relative error " << err << '\n';
        }
        probes.push_back(got);
    }

    for (std::size_t k = 0; k < probes.size(); ++k) {
        const ComplexMatrix expected = oracle::rhs_index_loops(m, probes[k].matrix());
        const double err = relative(subject.rhs(m, probes[k]), expected);
        report.rhs_error = std::max(report.rhs_error, err);
        if (err > oracle_tolerance) {
            diff << "rhs(probe " << k << "): relative error " << err << '\n';
        }

        const std::vector<double> p_expected = oracle::born_weights_index_loops(
            probes[k].matrix(), pointer.basis().eigenvectors, m.dS(), m.dM());
        const std::vector<double> p_got =
            subject.distribution(probes[k], pointer, m.dS(), m.dM());
        double p_err = p_got.size() == p_expected.size() ? 0.0 : 1.0;
        for (std::size_t l = 0; l < std::min(p_got.size(), p_expected.size()); ++l) {
            p_err = std::max(p_err, std::abs(p_got[l] - p_expected[l]));
        }
        report.distribution_error = std::max(report.distribution_error, p_err);
        if (p_err > oracle_tolerance) {
            diff << "distribution(probe " << k << "): max error " << p_err << '\n';
        }
    }

    report.diff = diff.str();
    report.agree = report.diff.empty();
    return report;
}

OracleReport oracle_check(std::size_t dS, std::size_t dM, std::uint64_t seed,
                          const OracleSubject &subject) {
    const BipartiteModel m = random_model(dS, dM, ModelFamily::violating(), seed);
    Rng rng(derive_seed(seed, 0x0DAC1E));
    const DensityOperator w0 = random_density(dS * dM, dS * dM, rng);
    const PointerObservable pointer(m.hM());
    return oracle_check(m, w0, pointer, subject);
}

OracleReport oracle_check(const Scenario &s, const OracleSubject &subject) {
    const ResolvedScenario r = resolve(s);
    const DensityOperator w0 = prepare_initial(r.model, s.preparation, r.pointer.basis());
    return oracle_check(r.model, w0, r.pointer, subject);
}

} // namespace qmeasure
