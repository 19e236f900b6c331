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
 * Projective pointer readout on the apparatus factor.
 *
 * Outcome lambda of a pointer observable with eigenbasis {|m_lambda>} has
 * Born weight p_lambda = tr(omega (I_S (x) Pi_lambda)), Pi_lambda =
 * |m_lambda><m_lambda|. After a readout the joint state is updated by the
 * Lueders rule on the apparatus only. Repeated readouts and many independent
 * trials are aggregated into sigma_i = sum_lambda p_lambda c_{i lambda}.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "qmeasure/dynamics.hpp"
#include "qmeasure/linalg.hpp"
#include "qmeasure/model.hpp"
#include "qmeasure/parallel.hpp"
#include "qmeasure/random.hpp"

namespace qmeasure {

class PointerObservable {
  public:
    explicit PointerObservable(HermitianOperator op);

    [[nodiscard]] std::size_t dim() const noexcept { return op_.dim(); }
    [[nodiscard]] const HermitianOperator &op() const noexcept { return op_; }
    [[nodiscard]] const SpectralDecomposition &basis() const noexcept {
        return basis_;
    }
    /// Raw readings: the eigenvalues, ascending.
    [[nodiscard]] const std::vector<double> &values() const noexcept {
        return values_;
    }
    /// |m_lambda><m_lambda| on M.
    [[nodiscard]] ComplexMatrix projector(std::size_t lambda) const;

  private:
    HermitianOperator op_;
    SpectralDecomposition basis_;
    std::vector<double> values_;
};

/// c_{i lambda}. Either the pointer eigenvalues (independent of i) or an
/// explicit dS x dM table.
class Calibration {
  public:
    static Calibration from_pointer(const PointerObservable &pointer);
    /// table[i][lambda]; every row must have the same, non-zero length.
    static Calibration from_table(std::vector<std::vector<double>> table);

    [[nodiscard]] bool depends_on_system() const noexcept {
        return !table_.empty();
    }
    [[nodiscard]] std::size_t pointer_dim() const noexcept;
    /// Throws InputError for an out-of-range pair, or when i is absent and
    /// the table depends on i.
    [[nodiscard]] double value(std::optional<std::size_t> i,
                               std::size_t lambda) const;
    [[nodiscard]] std::vector<double> row(std::optional<std::size_t> i) const;

    [[nodiscard]] const std::vector<std::vector<double>> &table() const noexcept {
        return table_;
    }

    /// Checks that the calibration covers every (i, lambda) of a (dS, dM)
    /// model.
    void validate(std::size_t dS, std::size_t dM) const;

  private:
    std::vector<double> pointer_values_;
    std::vector<std::vector<double>> table_;
};

struct MeasurementEntry {
    std::size_t trial = 0;
    double time = 0.0;
    std::optional<std::size_t> system_index;
    std::size_t lambda = 0;
    double reading = 0.0;

    bool operator==(const MeasurementEntry &) const = default;
};

struct MeasurementRecord {
    std::vector<MeasurementEntry> entries;

    void append(const MeasurementRecord &other);
};

struct PointerStatistics {
    std::vector<double> p;
    double sigma = 0.0;
    std::optional<std::size_t> system_index;
};

/// p_lambda = tr(omega (I (x) Pi_lambda)). Values in [-tol::pos, 0) are set to
/// 0 and the vector renormalized; a more negative weight is an InputError.
[[nodiscard]] std::vector<double>
outcome_distribution(const DensityOperator &w, const PointerObservable &pointer,
                     std::size_t dS, std::size_t dM);

/// CDF inversion with one uniform draw u in [0, 1): the first lambda with
/// u < p_0 + ... + p_lambda. Zero-weight outcomes are never selected.
[[nodiscard]] std::size_t sample_outcome(const std::vector<double> &p, double u);
[[nodiscard]] std::size_t sample_outcome(const std::vector<double> &p, Rng &rng);

/// (I (x) Pi) w (I (x) Pi) / p_lambda. Throws ImpossibleOutcome when
/// p_lambda <= tol::pos.
[[nodiscard]] DensityOperator collapse_after_outcome(const DensityOperator &w,
                                                     const PointerObservable &pointer,
                                                     std::size_t lambda,
                                                     std::size_t dS,
                                                     std::size_t dM);

struct RepeatSchedule {
    double tau = 1.0;        ///< time of the first readout
    double dtau = 0.5;       ///< spacing of the following readouts
    std::size_t repeats = 5; ///< readouts per trial, first one included
};

/// One trial: prepare, evolve to tau, read out and collapse, then
/// (repeats - 1) times evolve by dtau, read out and collapse. The uniform
/// draws come from Rng(derive_seed(seed, trial)).
[[nodiscard]] MeasurementRecord
repeatability_protocol(const BipartiteModel &m, const Preparation &prep,
                       const PointerObservable &pointer, const Calibration &cal,
                       const RepeatSchedule &schedule, std::uint64_t seed,
                       std::size_t trial = 0);

/// `trials` independent repeatability trials, concatenated in trial order.
[[nodiscard]] MeasurementRecord
repeatability_trials(const BipartiteModel &m, const Preparation &prep,
                     const PointerObservable &pointer, const Calibration &cal,
                     const RepeatSchedule &schedule, std::size_t trials,
                     std::uint64_t seed, Execution exec = Execution::serial);

/// Number of consecutive readouts within a trial whose outcome differs from
/// the previous one, summed over all trials.
[[nodiscard]] std::size_t count_outcome_changes(const MeasurementRecord &record);

/// sigma_i from Born weights.
[[nodiscard]] PointerStatistics aggregate_sigma(const std::vector<double> &p,
                                                const Calibration &cal,
                                                std::optional<std::size_t> i);

/// sigma_i from the empirical outcome frequencies of a record. The
/// frequencies count every entry; `dM` sets the length of p. Throws on an
/// empty record.
[[nodiscard]] PointerStatistics aggregate_sigma(const MeasurementRecord &record,
                                                const Calibration &cal,
                                                std::optional<std::size_t> i,
                                                std::size_t dM);

/// Population variance, computed on values shifted by the first one so that
/// identical readings give exactly 0.
[[nodiscard]] double population_variance(const std::vector<double> &values);

struct DispersionResult {
    std::vector<std::size_t> outcomes; ///< per trial
    std::vector<double> readings;      ///< per trial
    double variance = 0.0;
    bool degenerate = false; ///< fewer than two trials
};

/// `trials` independent prepare -> evolve(tau) -> read-out runs. The state at
/// tau is the same for every trial and is computed once; trial k samples with
/// Rng(derive_seed(seed, k)), so its outcome equals the first readout of
/// repeatability trial k for the same seed.
[[nodiscard]] DispersionResult
dispersion_experiment(const BipartiteModel &m, const Preparation &prep,
                      const PointerObservable &pointer, const Calibration &cal,
                      double tau, std::size_t trials, std::uint64_t seed,
                      Execution exec = Execution::serial);

/// Header: trial,time,i,lambda,reading (i empty when absent).
void write_record_csv(std::ostream &out, const MeasurementRecord &record);

} // namespace qmeasure
