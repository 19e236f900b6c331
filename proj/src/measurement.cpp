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

#include "qmeasure/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>

#include "qmeasure/csv.hpp"
#include "qmeasure/errors.hpp"

namespace qmeasure {

namespace {

using Index = Eigen::Index;

void require_dims(const DensityOperator &w, const PointerObservable &pointer,
                  std::size_t dS, std::size_t dM, const char *what) {
    if (dS == 0 || dM == 0 || w.dim() != dS * dM || pointer.dim() != dM) {
        throw InputError(std::string(what) + ": dimensions do not factorize (" +
                         std::to_string(w.dim()) + " vs " + std::to_string(dS) +
                         "x" + std::to_string(dM) + ", pointer " +
                         std::to_string(pointer.dim()) + ")");
    }
}

/// (I_S (x) Pi) w (I_S (x) Pi) for a rank-1 Pi = v v^dagger, block by block:
/// block (i, j) of the result is Pi w_ij Pi.
ComplexMatrix project_apparatus(const ComplexMatrix &w, const ComplexMatrix &pi,
                                std::size_t dS, std::size_t dM) {
    const auto s = static_cast<Index>(dS);
    const auto m = static_cast<Index>(dM);
    ComplexMatrix out(w.rows(), w.cols());
    for (Index i = 0; i < s; ++i) {
        for (Index j = 0; j < s; ++j) {
            out.block(i * m, j * m, m, m) = pi * w.block(i * m, j * m, m, m) * pi;
        }
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// PointerObservable / Calibration

PointerObservable::PointerObservable(HermitianOperator op)
    : op_(std::move(op)), basis_(spectral(op_)),
      values_(basis_.eigenvalues.data(),
              basis_.eigenvalues.data() + basis_.eigenvalues.size()) {}

ComplexMatrix PointerObservable::projector(std::size_t lambda) const {
    if (lambda >= dim()) {
        throw InputError("pointer outcome " + std::to_string(lambda) +
                         " out of range");
    }
    const ComplexVector v = basis_.vector(lambda);
    return v * v.adjoint();
}

Calibration Calibration::from_pointer(const PointerObservable &pointer) {
    Calibration cal;
    cal.pointer_values_ = pointer.values();
    return cal;
}

Calibration Calibration::from_table(std::vector<std::vector<double>> table) {
    if (table.empty() || table.front().empty()) {
        throw InputError("calibration table must be non-empty");
    }
    const std::size_t width = table.front().size();
    for (const auto &row : table) {
        if (row.size() != width) {
            throw InputError("calibration table rows differ in length");
        }
    }
    Calibration cal;
    cal.table_ = std::move(table);
    return cal;
}

std::size_t Calibration::pointer_dim() const noexcept {
    return table_.empty() ? pointer_values_.size() : table_.front().size();
}

double Calibration::value(std::optional<std::size_t> i,
                          std::size_t lambda) const {
    if (lambda >= pointer_dim()) {
        throw InputError("calibration: pointer index " + std::to_string(lambda) +
                         " out of range");
    }
    if (table_.empty()) {
        return pointer_values_[lambda];
    }
    if (!i) {
        throw InputError("calibration depends on the system index, but the "
                         "preparation has none");
    }
    if (*i >= table_.size()) {
        throw InputError("calibration: system index " + std::to_string(*i) +
                         " out of range");
    }
    return table_[*i][lambda];
}

std::vector<double> Calibration::row(std::optional<std::size_t> i) const {
    std::vector<double> out(pointer_dim());
    for (std::size_t l = 0; l < out.size(); ++l) {
        out[l] = value(i, l);
    }
    return out;
}

void Calibration::validate(std::size_t dS, std::size_t dM) const {
    if (pointer_dim() != dM || (!table_.empty() && table_.size() != dS)) {
        throw InputError("calibration does not cover a " + std::to_string(dS) +
                         "x" + std::to_string(dM) + " model");
    }
}

void MeasurementRecord::append(const MeasurementRecord &other) {
    entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

// ---------------------------------------------------------------------------
// Born rule, sampling, collapse

std::vector<double> outcome_distribution(const DensityOperator &w,
                                         const PointerObservable &pointer,
                                         std::size_t dS, std::size_t dM) {
    require_dims(w, pointer, dS, dM, "outcome_distribution");
    // tr(w (I (x) Pi)) = <m| tr_S(w) |m>.
    const auto s = static_cast<Index>(dS);
    const auto m = static_cast<Index>(dM);
    ComplexMatrix mu = ComplexMatrix::Zero(m, m);
    for (Index i = 0; i < s; ++i) {
        mu += w.matrix().block(i * m, i * m, m, m);
    }

    std::vector<double> p(dM);
    for (std::size_t l = 0; l < dM; ++l) {
        const ComplexVector v = pointer.basis().vector(l);
        p[l] = v.dot(mu * v).real();
        if (p[l] < -tol::pos) {
            throw InputError("outcome_distribution: negative weight " +
                             format_double(p[l]) + " for outcome " +
                             std::to_string(l));
        }
        p[l] = std::max(p[l], 0.0);
    }
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (double &x : p) {
        x /= total;
    }
    return p;
}

std::size_t sample_outcome(const std::vector<double> &p, double u) {
    if (p.empty()) {
        throw InputError("sample_outcome: empty distribution");
    }
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t l = 0; l < p.size(); ++l) {
        cumulative += p[l];
        if (p[l] > 0.0) {
            last_positive = l;
            if (u < cumulative) {
                return l;
            }
        }
    }
    // u at or above the rounded total.
    return last_positive;
}

std::size_t sample_outcome(const std::vector<double> &p, Rng &rng) {
    return sample_outcome(p, rng.uniform());
}

DensityOperator collapse_after_outcome(const DensityOperator &w,
                                       const PointerObservable &pointer,
                                       std::size_t lambda, std::size_t dS,
                                       std::size_t dM) {
    require_dims(w, pointer, dS, dM, "collapse_after_outcome");
    const ComplexMatrix pi = pointer.projector(lambda);
    ComplexMatrix projected = project_apparatus(w.matrix(), pi, dS, dM);
    const double p = projected.trace().real();
    if (!(p > tol::pos)) {
        throw ImpossibleOutcome(lambda, p);
    }
    projected /= p;
    return DensityOperator(0.5 * (projected + projected.adjoint()));
}

// ---------------------------------------------------------------------------
// Protocols

namespace {

void validate_protocol(const BipartiteModel &m, const PointerObservable &pointer,
                       const Calibration &cal, const RepeatSchedule &schedule) {
    if (schedule.repeats < 2 || !(schedule.tau > 0.0) || !(schedule.dtau > 0.0)) {
        throw InputError("repeatability_protocol: require repeats >= 2 and "
                         "tau, dtau > 0");
    }
    if (pointer.dim() != m.dM()) {
        throw InputError("repeatability_protocol: pointer dimension mismatch");
    }
    cal.validate(m.dS(), m.dM());
}

/// One validated trial; the propagator is shared across trials.
MeasurementRecord run_trial(const BipartiteModel &m, const ExactEvolver &evolver,
                            const Preparation &prep, const PointerObservable &pointer,
                            const Calibration &cal, const RepeatSchedule &schedule,
                            std::uint64_t seed, std::size_t trial) {
    const std::optional<std::size_t> label = system_label(prep);
    Rng rng(derive_seed(seed, trial));

    DensityOperator state =
        evolver.evolve(prepare_initial(m, prep, pointer.basis()), schedule.tau);
    double time = schedule.tau;

    MeasurementRecord record;
    record.entries.reserve(schedule.repeats);
    for (std::size_t r = 0; r < schedule.repeats; ++r) {
        if (r > 0) {
            state = evolver.evolve(state, schedule.dtau);
            time = schedule.tau + static_cast<double>(r) * schedule.dtau;
        }
        const std::vector<double> p = outcome_distribution(state, pointer, m.dS(), m.dM());
        const std::size_t lambda = sample_outcome(p, rng);
        record.entries.push_back(
            {trial, time, label, lambda, cal.value(label, lambda)});
        try {
            state = collapse_after_outcome(state, pointer, lambda, m.dS(), m.dM());
        } catch (const ImpossibleOutcome &e) {
            throw ImpossibleOutcome(e.outcome(), e.probability(), trial);
        }
    }
    return record;
}

} // namespace

MeasurementRecord repeatability_protocol(const BipartiteModel &m,
                                         const Preparation &prep,
                                         const PointerObservable &pointer,
                                         const Calibration &cal,
                                         const RepeatSchedule &schedule,
                                         std::uint64_t seed, std::size_t trial) {
    validate_protocol(m, pointer, cal, schedule);
    return run_trial(m, ExactEvolver(m), prep, pointer, cal, schedule, seed, trial);
}

MeasurementRecord repeatability_trials(const BipartiteModel &m,
                                       const Preparation &prep,
                                       const PointerObservable &pointer,
                                       const Calibration &cal,
                                       const RepeatSchedule &schedule,
                                       std::size_t trials, std::uint64_t seed,
                                       Execution exec) {
    validate_protocol(m, pointer, cal, schedule);
    const ExactEvolver evolver(m);
    std::vector<MeasurementRecord> per_trial(trials);
    for_each_index(trials, exec, [&](std::size_t k) {
        per_trial[k] = run_trial(m, evolver, prep, pointer, cal, schedule, seed, k);
    });
    MeasurementRecord out;
    out.entries.reserve(trials * schedule.repeats);
    for (const auto &r : per_trial) {
        out.append(r);
    }
    return out;
}

std::size_t count_outcome_changes(const MeasurementRecord &record) {
    std::size_t changes = 0;
    for (std::size_t k = 1; k < record.entries.size(); ++k) {
        const auto &prev = record.entries[k - 1];
        const auto &cur = record.entries[k];
        if (prev.trial == cur.trial && prev.lambda != cur.lambda) {
            ++changes;
        }
    }
    return changes;
}

PointerStatistics aggregate_sigma(const std::vector<double> &p,
                                  const Calibration &cal,
                                  std::optional<std::size_t> i) {
    if (p.size() != cal.pointer_dim()) {
        throw InputError("aggregate_sigma: distribution length does not match "
                         "the calibration");
    }
    PointerStatistics stats{p, 0.0, i};
    for (std::size_t l = 0; l < p.size(); ++l) {
        stats.sigma += p[l] * cal.value(i, l);
    }
    return stats;
}

PointerStatistics aggregate_sigma(const MeasurementRecord &record,
                                  const Calibration &cal,
                                  std::optional<std::size_t> i, std::size_t dM) {
    if (record.entries.empty()) {
        throw InputError("aggregate_sigma: empty measurement record");
    }
    std::vector<std::size_t> counts(dM, 0);
    for (const auto &e : record.entries) {
        if (e.lambda >= dM) {
            throw InputError("aggregate_sigma: record outcome out of range");
        }
        ++counts[e.lambda];
    }
    const auto n = static_cast<double>(record.entries.size());
    std::vector<double> freq(dM);
    for (std::size_t l = 0; l < dM; ++l) {
        freq[l] = static_cast<double>(counts[l]) / n;
    }
    return aggregate_sigma(freq, cal, i);
}

double population_variance(const std::vector<double> &values) {
    if (values.size() < 2) {
        return 0.0;
    }
    const double shift = values.front();
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const double v : values) {
        const double d = v - shift;
        sum += d;
        sum_sq += d * d;
    }
    const auto n = static_cast<double>(values.size());
    const double mean = sum / n;
    return std::max(0.0, sum_sq / n - mean * mean);
}

DispersionResult dispersion_experiment(const BipartiteModel &m,
                                       const Preparation &prep,
                                       const PointerObservable &pointer,
                                       const Calibration &cal, double tau,
                                       std::size_t trials, std::uint64_t seed,
                                       Execution exec) {
    if (trials == 0) {
        throw InputError("dispersion_experiment: at least one trial required");
    }
    if (!(tau >= 0.0)) {
        throw InputError("dispersion_experiment: tau must be non-negative");
    }
    cal.validate(m.dS(), m.dM());
    const std::optional<std::size_t> label = system_label(prep);
    const DensityOperator state =
        evolve_exact(m, prepare_initial(m, prep, pointer.basis()), tau);
    const std::vector<double> p = outcome_distribution(state, pointer, m.dS(), m.dM());

    DispersionResult result;
    result.outcomes.resize(trials);
    result.readings.resize(trials);
    for_each_index(trials, exec, [&](std::size_t k) {
        Rng rng(derive_seed(seed, k));
        const std::size_t lambda = sample_outcome(p, rng);
        result.outcomes[k] = lambda;
        result.readings[k] = cal.value(label, lambda);
    });
    result.degenerate = trials < 2;
    result.variance = population_variance(result.readings);
    return result;
}

void write_record_csv(std::ostream &out, const MeasurementRecord &record) {
    out << "trial,time,i,lambda,reading\n";
    for (const auto &e : record.entries) {
        out << e.trial << ',' << format_double(e.time) << ',';
        if (e.system_index) {
            out << *e.system_index;
        }
        out << ',' << e.lambda << ',' << format_double(e.reading) << '\n';
    }
}

} // namespace qmeasure
