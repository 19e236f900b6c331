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
#include <exception>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace qmeasure {

/// Selects the trial/sweep-point kernel. `serial` is the reference loop kept
/// for testing; `parallel` distributes indices over OpenMP threads. Both
/// write results by index, so their outputs are identical.
enum class Execution { serial, parallel };

/// Calls `body(k)` for k in [0, n). Exceptions thrown by any index are
/// captured and the one from the lowest index is rethrown after the loop.
template <class Body>
void for_each_index(std::size_t n, Execution exec, Body &&body) {
    if (exec == Execution::serial) {
        for (std::size_t k = 0; k < n; ++k) {
            body(k);
        }
        return;
    }

    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long long k = 0; k < count; ++k) {
        try {
            body(static_cast<std::size_t>(k));
        } catch (...) {
            errors[static_cast<std::size_t>(k)] = std::current_exception();
        }
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

/// Number of threads a parallel region would use.
inline int max_threads() {
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace qmeasure
