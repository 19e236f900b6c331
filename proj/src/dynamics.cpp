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

#include "qmeasure/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "qmeasure/csv.hpp"
#include "qmeasure/errors.hpp"

namespace qmeasure {

namespace {

using Index = Eigen::Index;
constexpr Complex minus_i{0.0, -1.0};

void require_model_dim(const BipartiteModel &m, const DensityOperator &w,
                       const char *what) {
    if (w.dim() != m.dim()) {
        throw InputError(std::string(what) + ": state dimension " +
                         std::to_string(w.dim()) + " does not match model " +
                         std::to_string(m.dim()));
    }
}

ComplexMatrix conjugate_by(const SpectralDecomposition &spectrum,
                           const ComplexMatrix &w, double t) {
    ComplexVector phases(spectrum.eigenvalues.size());
    for (Index k = 0; k < phases.size(); ++k) {
        phases(k) = std::polar(1.0, -spectrum.eigenvalues(k) * t);
    }
    const ComplexMatrix u = spectrum.eigenvectors * phases.asDiagonal() *
                            spectrum.eigenvectors.adjoint();
    return u * w * u.adjoint();
}

} // namespace

ComplexMatrix rhs_component_form(const BipartiteModel &m,
                                 const DensityOperator &w) {
    require_model_dim(m, w, "rhs_component_form");
    const ComplexMatrix &omega = w.matrix();
    const ComplexMatrix system = commutator(m.system_term().matrix(), omega);
    const ComplexMatrix coupling = commutator(m.hC().matrix(), omega);
    const ComplexMatrix apparatus = commutator(m.apparatus_term().matrix(), omega);
    return minus_i * (system + coupling + apparatus);
}

ComplexMatrix rhs_full_commutator(const BipartiteModel &m,
                                  const DensityOperator &w) {
    require_model_dim(m, w, "rhs_full_commutator");
    return minus_i * commutator(total_hamiltonian(m).matrix(), w.matrix());
}

ExactEvolver::ExactEvolver(const BipartiteModel &m)
    : spectrum_(spectral(total_hamiltonian(m))) {}

DensityOperator ExactEvolver::evolve(const DensityOperator &w0, double t) const {
    if (!(t >= 0.0)) {
        throw InputError("evolve_exact: time must be non-negative");
    }
    if (w0.dim() != spectrum_.dim()) {
        throw InputError("evolve_exact: state dimension does not match model");
    }
    if (t == 0.0) {
        return w0;
    }
    return DensityOperator(conjugate_by(spectrum_, w0.matrix(), t));
}

DensityOperator evolve_exact(const BipartiteModel &m, const DensityOperator &w0,
                             double t) {
    require_model_dim(m, w0, "evolve_exact");
    return ExactEvolver(m).evolve(w0, t);
}

Trajectory evolve_stepped(const BipartiteModel &m, const DensityOperator &w0,
                          double t_end, double dt) {
    require_model_dim(m, w0, "evolve_stepped");
    if (!(dt > 0.0) || !(dt <= t_end)) {
        throw InputError("evolve_stepped: require 0 < dt <= t_end");
    }
    const auto steps = static_cast<std::size_t>(
        std::max(1.0, std::ceil(t_end / dt - 1e-9)));
    const double h = t_end / static_cast<double>(steps);

    const ComplexMatrix hs = m.system_term().matrix();
    const ComplexMatrix hc = m.hC().matrix();
    const ComplexMatrix hm = m.apparatus_term().matrix();
    // Same three-term evaluation as rhs_component_form, without re-validating
    // the intermediate stages (they are not density operators).
    const auto rhs = [&](const ComplexMatrix &omega) -> ComplexMatrix {
        return minus_i *
               (commutator(hs, omega) + commutator(hc, omega) +
                commutator(hm, omega));
    };

    Trajectory out;
    out.times.reserve(steps + 1);
    out.states.reserve(steps + 1);
    out.times.push_back(0.0);
    out.states.push_back(w0);

    ComplexMatrix omega = w0.matrix();
    for (std::size_t n = 1; n <= steps; ++n) {
        const ComplexMatrix k1 = rhs(omega);
        const ComplexMatrix k2 = rhs(omega + 0.5 * h * k1);
        const ComplexMatrix k3 = rhs(omega + 0.5 * h * k2);
        const ComplexMatrix k4 = rhs(omega + h * k3);
        omega += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double t = (n == steps) ? t_end : static_cast<double>(n) * h;
        try {
            out.states.emplace_back(omega, stepped_pos_tolerance);
        } catch (const InputError &e) {
            throw IntegrationFailure(t, e.what());
        }
        out.times.push_back(t);
    }
    return out;
}

Trajectory evolve_exact_on_grid(const BipartiteModel &m,
                                const DensityOperator &w0,
                                const std::vector<double> &times) {
    require_model_dim(m, w0, "evolve_exact_on_grid");
    if (times.empty() || times.front() != 0.0 ||
        !std::is_sorted(times.begin(), times.end()) ||
        std::adjacent_find(times.begin(), times.end()) != times.end()) {
        throw InputError("evolve_exact_on_grid: times must increase strictly "
                         "from 0");
    }
    const ExactEvolver evolver(m);
    Trajectory out;
    out.times = times;
    out.states.reserve(times.size());
    for (const double t : times) {
        out.states.push_back(evolver.evolve(w0, t));
    }
    return out;
}

double state_constancy_check(const BipartiteModel &m, const Preparation &prep,
                             const SpectralDecomposition &pointer_basis,
                             const std::vector<double> &t_grid) {
    const DensityOperator w0 = prepare_initial(m, prep, pointer_basis);
    const ExactEvolver evolver(m);
    double worst = 0.0;
    for (const double t : t_grid) {
        const DensityOperator wt = evolver.evolve(w0, t);
        worst = std::max(worst, (wt.matrix() - w0.matrix()).norm());
    }
    return worst;
}

double state_constancy_check(const BipartiteModel &m, const Preparation &prep,
                             const std::vector<double> &t_grid) {
    return state_constancy_check(m, prep, spectral(m.hM()), t_grid);
}

std::vector<double> uniform_grid(double t_max, std::size_t count) {
    if (count == 0) {
        return {};
    }
    if (count == 1) {
        return {0.0};
    }
    std::vector<double> grid(count);
    for (std::size_t k = 0; k < count; ++k) {
        grid[k] = t_max * static_cast<double>(k) / static_cast<double>(count - 1);
    }
    return grid;
}

void write_trajectory_csv(std::ostream &out, const Trajectory &trajectory) {
    const Index dim = trajectory.states.empty()
                          ? 0
                          : static_cast<Index>(trajectory.states.front().dim());
    out << "time";
    for (Index r = 0; r < dim; ++r) {
        for (Index c = 0; c < dim; ++c) {
            out << ",re_" << r << '_' << c << ",im_" << r << '_' << c;
        }
    }
    out << '\n';
    for (std::size_t k = 0; k < trajectory.size(); ++k) {
        out << format_double(trajectory.times[k]);
        const ComplexMatrix &w = trajectory.states[k].matrix();
        for (Index r = 0; r < dim; ++r) {
            for (Index c = 0; c < dim; ++c) {
                out << ',' << format_double(w(r, c).real()) << ','
                    << format_double(w(r, c).imag());
            }
        }
        out << '\n';
    }
}

} // namespace qmeasure
