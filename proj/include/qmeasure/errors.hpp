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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "qmeasure/csv.hpp"

namespace qmeasure {

/// Raised when an argument violates an operation's precondition
/// (dimension mismatch, non-Hermitian operator, index out of range, ...).
class InputError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A projective readout was requested for an outcome of zero probability.
class ImpossibleOutcome : public std::runtime_error {
  public:
    ImpossibleOutcome(std::size_t outcome, double probability)
        : std::runtime_error("outcome " + std::to_string(outcome) +
                             " has probability " +
                             format_double(probability)),
          outcome_(outcome), probability_(probability) {}

    ImpossibleOutcome(std::size_t outcome, double probability, std::size_t trial)
        : std::runtime_error("trial " + std::to_string(trial) + ": outcome " +
                             std::to_string(outcome) + " has probability " +
                             format_double(probability)),
          outcome_(outcome), probability_(probability) {}

    [[nodiscard]] std::size_t outcome() const noexcept { return outcome_; }
    [[nodiscard]] double probability() const noexcept { return probability_; }

  private:
    std::size_t outcome_;
    double probability_;
};

/// A stepped trajectory left the set of valid density operators.
class IntegrationFailure : public std::runtime_error {
  public:
    IntegrationFailure(double time, const std::string &why)
        : std::runtime_error("integration failed at t=" + format_double(time) +
                             ": " + why),
          time_(time) {}

    [[nodiscard]] double time() const noexcept { return time_; }

  private:
    double time_;
};

} // namespace qmeasure
