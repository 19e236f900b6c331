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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qmeasure::cli {

/// Process exit codes.
enum ExitCode : int {
    ok = 0,       ///< success, or both conditions hold
    negative = 1, ///< a condition fails, or a runtime failure
    input = 2,    ///< malformed input or invalid flags
};

/// Seeds of the reference sweep shipped in data/reference_sweep.csv.
extern const std::vector<std::uint64_t> published_seeds;

/// Runs `qmeasure <args...>` (args excludes the program name). Summaries go
/// to `out`, diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

} // namespace qmeasure::cli
