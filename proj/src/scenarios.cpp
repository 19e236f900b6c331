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

#include "qmeasure/scenarios.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "qmeasure/csv.hpp"
#include "qmeasure/dynamics.hpp"
#include "qmeasure/errors.hpp"

namespace qmeasure {

namespace {

bool same_matrix(const ComplexMatrix &a, const ComplexMatrix &b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

bool same_model(const ModelSpec &a, const ModelSpec &b) {
    if (a.index() != b.index()) {
        return false;
    }
    if (const auto *ga = std::get_if<GeneratedModel>(&a)) {
        const auto &gb = std::get<GeneratedModel>(b);
        return ga->dS == gb.dS && ga->dM == gb.dM &&
               ga->family.kind == gb.family.kind &&
               ga->family.eta == gb.family.eta && ga->seed == gb.seed;
    }
    const auto &ma = std::get<BipartiteModel>(a);
    const auto &mb = std::get<BipartiteModel>(b);
    return ma.dS() == mb.dS() && ma.dM() == mb.dM() &&
           same_matrix(ma.hS().matrix(), mb.hS().matrix()) &&
           same_matrix(ma.hM().matrix(), mb.hM().matrix()) &&
           same_matrix(ma.hC().matrix(), mb.hC().matrix());
}

bool same_preparation(const Preparation &a, const Preparation &b) {
    if (a.index() != b.index()) {
        return false;
    }
    if (const auto *ia = std::get_if<IndexPreparation>(&a)) {
        const auto &ib = std::get<IndexPreparation>(b);
        return ia->system_index == ib.system_index &&
               ia->pointer_index == ib.pointer_index;
    }
    const auto &ma = std::get<MixedPreparation>(a);
    const auto &mb = std::get<MixedPreparation>(b);
    return same_matrix(ma.rho_s.matrix(), mb.rho_s.matrix()) &&
           same_matrix(ma.mu_m.matrix(), mb.mu_m.matrix());
}

bool same_schedule(const Schedule &a, const Schedule &b) {
    return a.tau == b.tau && a.dtau == b.dtau && a.repeats == b.repeats &&
           a.trials == b.trials && a.t_max == b.t_max &&
           a.constancy_points == b.constancy_points;
}

double eta_of(const ModelSpec &spec) {
    if (const auto *g = std::get_if<GeneratedModel>(&spec)) {
        switch (g->family.kind) {
        case Family::qnd:
            return 0.0;
        case Family::violating:
            return 1.0;
        case Family::interpolated:
            return g->family.eta;
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::uint64_t model_seed_of(const ModelSpec &spec, std::uint64_t fallback) {
    if (const auto *g = std::get_if<GeneratedModel>(&spec)) {
        return g->seed;
    }
    return fallback;
}

ScenarioResult run_resolved(const Scenario &s, const ResolvedScenario &r,
                            Execution exec) {
    const BipartiteModel &m = r.model;
    const Schedule &sched = s.schedule;
    const std::optional<std::size_t> label = system_label(s.preparation);

    ScenarioResult out;
    out.conditions = check_conditions(m);
    out.row.eta = eta_of(s.model);
    out.row.seed = model_seed_of(s.model, s.seed);
    out.row.eq4_defect = out.conditions.eq4_defect;
    out.row.eq5_defect = out.conditions.eq5_defect;
    out.row.constancy_dev =
        state_constancy_check(m, s.preparation, r.pointer.basis(),
                              uniform_grid(sched.t_max, sched.constancy_points));

    const RepeatSchedule repeat{sched.tau, sched.dtau, sched.repeats};
    out.repeats = repeatability_trials(m, s.preparation, r.pointer, r.calibration,
                                       repeat, sched.trials, s.seed, exec);
    out.row.repeat_changes = count_outcome_changes(out.repeats);

    out.dispersion = dispersion_experiment(m, s.preparation, r.pointer,
                                           r.calibration, sched.tau,
                                           sched.trials, s.seed, exec);
    out.row.reading_variance = out.dispersion.variance;

    const DensityOperator at_tau = evolve_exact(
        m, prepare_initial(m, s.preparation, r.pointer.basis()), sched.tau);
    out.distribution = outcome_distribution(at_tau, r.pointer, m.dS(), m.dM());
    out.row.sigma_analytic =
        aggregate_sigma(out.distribution, r.calibration, label).sigma;

    MeasurementRecord first_readouts;
    first_readouts.entries.reserve(out.dispersion.outcomes.size());
    for (std::size_t k = 0; k < out.dispersion.outcomes.size(); ++k) {
        first_readouts.entries.push_back({k, sched.tau, label,
                                          out.dispersion.outcomes[k],
                                          out.dispersion.readings[k]});
    }
    out.row.sigma_empirical =
        aggregate_sigma(first_readouts, r.calibration, label, m.dM()).sigma;
    return out;
}

} // namespace

bool operator==(const Scenario &a, const Scenario &b) {
    const bool pointers_match =
        a.pointer.has_value() == b.pointer.has_value() &&
        (!a.pointer || same_matrix(a.pointer->matrix(), b.pointer->matrix()));
    return a.name == b.name && same_model(a.model, b.model) &&
           same_preparation(a.preparation, b.preparation) && pointers_match &&
           a.calibration == b.calibration &&
           same_schedule(a.schedule, b.schedule) && a.seed == b.seed;
}

BipartiteModel build_model(const ModelSpec &spec) {
    if (const auto *g = std::get_if<GeneratedModel>(&spec)) {
        return random_model(g->dS, g->dM, g->family, g->seed);
    }
    return std::get<BipartiteModel>(spec);
}

ResolvedScenario resolve(const Scenario &s) {
    BipartiteModel model = build_model(s.model);
    PointerObservable pointer(s.pointer ? *s.pointer : model.hM());
    if (pointer.dim() != model.dM()) {
        throw InputError("pointer dimension " + std::to_string(pointer.dim()) +
                         " does not match dM = " + std::to_string(model.dM()));
    }
    Calibration cal = s.calibration ? Calibration::from_table(*s.calibration)
                                    : Calibration::from_pointer(pointer);
    cal.validate(model.dS(), model.dM());
    return {std::move(model), std::move(pointer), std::move(cal)};
}

ScenarioResult run_scenario(const Scenario &s, Execution exec) {
    try {
        if (s.schedule.trials == 0 || s.schedule.repeats < 2) {
            throw InputError("schedule needs at least one trial and two repeats");
        }
        const ResolvedScenario resolved = resolve(s);
        return run_resolved(s, resolved, exec);
    } catch (const InputError &e) {
        throw InputError("scenario '" + s.name + "': " + e.what());
    }
}

SweepResult interpolation_sweep(std::size_t dS, std::size_t dM,
                                const std::vector<double> &eta_grid,
                                const std::vector<std::uint64_t> &seeds,
                                const Schedule &schedule, Execution exec) {
    if (seeds.empty() || eta_grid.empty()) {
        throw InputError("interpolation_sweep: empty eta grid or seed list");
    }
    for (const double eta : eta_grid) {
        if (!(eta >= 0.0 && eta <= 1.0)) {
            throw InputError("interpolation_sweep: eta outside [0, 1]");
        }
    }

    SweepResult rows(eta_grid.size() * seeds.size());
    for_each_index(rows.size(), exec, [&](std::size_t k) {
        const double eta = eta_grid[k / seeds.size()];
        const std::uint64_t seed = seeds[k % seeds.size()];
        Scenario s;
        s.name = "sweep";
        s.model = GeneratedModel{dS, dM, ModelFamily::interpolated(eta), seed};
        s.schedule = schedule;
        s.seed = seed;
        rows[k] = run_scenario(s, Execution::serial).row;
    });
    return rows;
}

void write_sweep_csv(std::ostream &out, const SweepResult &rows) {
    out << "eta,seed,eq4_defect,eq5_defect,constancy_dev,repeat_changes,"
           "reading_variance,sigma_analytic,sigma_empirical\n";
    for (const auto &r : rows) {
        out << format_double(r.eta) << ',' << r.seed << ','
            << format_double(r.eq4_defect) << ',' << format_double(r.eq5_defect)
            << ',' << format_double(r.constancy_dev) << ',' << r.repeat_changes
            << ',' << format_double(r.reading_variance) << ','
            << format_double(r.sigma_analytic) << ','
            << format_double(r.sigma_empirical) << '\n';
    }
}

} // namespace qmeasure
