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

// Serial reference kernels against their OpenMP counterparts. The first
// benchmark argument is the dimension d of both factors (d (x) d joint
// space); the second selects the kernel (0 = serial, 1 = parallel).

#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "qmeasure/measurement.hpp"
#include "qmeasure/model.hpp"
#include "qmeasure/parallel.hpp"
#include "qmeasure/scenarios.hpp"

using namespace qmeasure;

namespace {

Execution execution(const benchmark::State &state) {
    return state.range(1) == 0 ? Execution::serial : Execution::parallel;
}

void set_label(benchmark::State &state) {
    state.SetLabel(state.range(1) == 0 ? "serial"
                                       : "parallel x" + std::to_string(max_threads()));
}

void BM_RepeatabilityTrials(benchmark::State &state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    const BipartiteModel m = random_model(d, d, ModelFamily::violating(), 7);
    const PointerObservable pointer(m.hM());
    const Calibration cal = Calibration::from_pointer(pointer);
    constexpr std::size_t trials = 64;
    for (auto _ : state) {
        benchmark::DoNotOptimize(repeatability_trials(m, IndexPreparation{}, pointer, cal,
                                                      RepeatSchedule{}, trials, 11,
                                                      execution(state)));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * trials));
    set_label(state);
}

void BM_Dispersion(benchmark::State &state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    const BipartiteModel m = random_model(d, d, ModelFamily::violating(), 7);
    const PointerObservable pointer(m.hM());
    const Calibration cal = Calibration::from_pointer(pointer);
    constexpr std::size_t trials = 20000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(dispersion_experiment(m, IndexPreparation{}, pointer, cal, 1.0,
                                                       trials, 11, execution(state)));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * trials));
    set_label(state);
}

void BM_Sweep(benchmark::State &state) {
    const auto d = static_cast<std::size_t>(state.range(0));
    Schedule schedule;
    schedule.trials = 20;
    schedule.constancy_points = 21;
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            interpolation_sweep(d, d, default_eta_grid, seeds, schedule, execution(state)));
    }
    state.SetItemsProcessed(
        static_cast<std::int64_t>(state.iterations() * default_eta_grid.size() * seeds.size()));
    set_label(state);
}

void dims(benchmark::internal::Benchmark *b) {
    for (const std::int64_t d : {2, 4, 8}) {
        b->Args({d, 0});
        b->Args({d, 1});
    }
    b->Unit(benchmark::kMillisecond)->UseRealTime();
}

} // namespace

BENCHMARK(BM_RepeatabilityTrials)->Apply(dims);
BENCHMARK(BM_Dispersion)->Apply(dims);
BENCHMARK(BM_Sweep)->Apply(dims);

BENCHMARK_MAIN();
