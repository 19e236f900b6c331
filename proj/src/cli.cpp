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

#include "qmeasure/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qmeasure/csv.hpp"
#include "qmeasure/dynamics.hpp"
#include "qmeasure/errors.hpp"
#include "qmeasure/scenario_file.hpp"
#include "qmeasure/scenarios.hpp"

namespace qmeasure::cli {

const std::vector<std::uint64_t> published_seeds{
    1001, 1002, 1003, 1004, 1005, 1006, 1007, 1008, 1009, 1010,
    1011, 1012, 1013, 1014, 1015, 1016, 1017, 1018, 1019, 1020};

namespace {

struct Common {
    bool quiet = false;
    std::string out_path;
};

/// Writes via `emit` to --out, or to `fallback` when no path was given.
void write_output(const std::string &path, std::ostream &fallback,
                  const std::function<void(std::ostream &)> &emit) {
    if (path.empty()) {
        emit(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw InputError("cannot open '" + path + "' for writing");
    }
    emit(file);
    if (!file) {
        throw std::runtime_error("failed writing '" + path + "'");
    }
}

template <class T>
std::vector<T> parse_list(const std::string &text, const char *what) {
    std::vector<T> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (item.empty()) {
            continue;
        }
        std::istringstream parse(item);
        parse.imbue(std::locale::classic());
        T value{};
        if (!(parse >> value) || !parse.eof()) {
            throw InputError(std::string("invalid ") + what + " entry '" + item + "'");
        }
        out.push_back(value);
    }
    return out;
}

// ---------------------------------------------------------------------------
// check

int cmd_check(const std::string &path, double threshold, const Common &common,
              std::ostream &out) {
    const Scenario s = load_scenario(path);
    const BipartiteModel m = build_model(s.model);
    const ConditionReport r = check_conditions(m, threshold);
    if (!common.quiet) {
        out << "scenario: " << s.name << '\n'
            << "eq4_defect: " << format_double(r.eq4_defect) << '\n'
            << "eq5_defect: " << format_double(r.eq5_defect) << '\n'
            << "threshold: " << format_double(r.threshold) << '\n'
            << "eq4_holds: " << (r.eq4_holds ? "true" : "false") << '\n'
            << "eq5_holds: " << (r.eq5_holds ? "true" : "false") << '\n';
    }
    return r.both_hold() ? ok : negative;
}

// ---------------------------------------------------------------------------
// evolve

struct EvolveOptions {
    double t_end = 1.0;
    double dt = default_time_step;
    bool exact = false;
    bool stepped = false;
};

int cmd_evolve(const std::string &path, const EvolveOptions &opt,
               const Common &common, std::ostream &out, std::ostream &err) {
    if (!(opt.t_end >= 0.0) || !std::isfinite(opt.t_end)) {
        throw InputError("--t-end must be a non-negative number");
    }
    if (!(opt.dt > 0.0)) {
        throw InputError("--dt must be positive");
    }
    const Scenario s = load_scenario(path);
    const ResolvedScenario r = resolve(s);
    const DensityOperator w0 = prepare_initial(r.model, s.preparation, r.pointer.basis());

    Trajectory traj;
    if (opt.t_end == 0.0) {
        traj.times = {0.0};
        traj.states = {w0};
    } else if (opt.stepped) {
        traj = evolve_stepped(r.model, w0, opt.t_end, std::min(opt.dt, opt.t_end));
    } else {
        const auto steps = static_cast<std::size_t>(
            std::max(1.0, std::ceil(opt.t_end / opt.dt - 1e-9)));
        std::vector<double> times(steps + 1);
        for (std::size_t k = 0; k <= steps; ++k) {
            times[k] = k == steps ? opt.t_end
                                  : opt.t_end * static_cast<double>(k) /
                                        static_cast<double>(steps);
        }
        traj = evolve_exact_on_grid(r.model, w0, times);
    }

    std::ostream &summary = common.out_path.empty() ? err : out;
    write_output(common.out_path, out,
                 [&](std::ostream &o) { write_trajectory_csv(o, traj); });

    if (!common.quiet) {
        const double purity0 = w0.purity();
        double drift = 0.0;
        for (const auto &state : traj.states) {
            drift = std::max(drift, std::abs(state.purity() - purity0));
        }
        const double trace_dev =
            std::abs(traj.back().matrix().trace() - Complex(1.0, 0.0));
        summary << "mode: " << (opt.stepped ? "stepped" : "exact") << '\n'
                << "rows: " << traj.size() << '\n'
                << "terminal_trace_deviation: " << format_double(trace_dev) << '\n'
                << "purity_drift: " << format_double(drift) << '\n';
        if (opt.stepped && opt.t_end > 0.0) {
            const DensityOperator exact = evolve_exact(r.model, w0, opt.t_end);
            summary << "terminal_deviation_from_exact: "
                    << format_double((traj.back().matrix() - exact.matrix()).norm())
                    << '\n';
        }
    }
    return ok;
}

// ---------------------------------------------------------------------------
// measure

struct MeasureOptions {
    std::optional<std::size_t> repeats;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    bool serial = false;
};

int cmd_measure(const std::string &path, const MeasureOptions &opt,
                const Common &common, std::ostream &out, std::ostream &err) {
    Scenario s = load_scenario(path);
    if (opt.repeats) {
        s.schedule.repeats = *opt.repeats;
    }
    if (opt.trials) {
        s.schedule.trials = *opt.trials;
    }
    if (opt.seed) {
        s.seed = *opt.seed;
    }
    if (s.schedule.repeats < 2 || s.schedule.trials == 0) {
        throw InputError("--repeats must be at least 2 and --trials at least 1");
    }

    const ScenarioResult result =
        run_scenario(s, opt.serial ? Execution::serial : Execution::parallel);

    std::ostream &summary = common.out_path.empty() ? err : out;
    write_output(common.out_path, out,
                 [&](std::ostream &o) { write_record_csv(o, result.repeats); });

    if (!common.quiet) {
        const std::optional<std::size_t> label = system_label(s.preparation);
        summary << "scenario: " << s.name << '\n'
                << "system_index: " << (label ? std::to_string(*label) : "absent")
                << '\n'
                << "trials: " << s.schedule.trials << '\n'
                << "repeats: " << s.schedule.repeats << '\n'
                << "p:";
        for (const double p : result.distribution) {
            summary << ' ' << format_double(p);
        }
        summary << '\n'
                << "sigma_analytic: " << format_double(result.row.sigma_analytic) << '\n'
                << "sigma_empirical: " << format_double(result.row.sigma_empirical)
                << '\n'
                << "reading_variance: " << format_double(result.row.reading_variance);
        if (result.dispersion.degenerate) {
            summary << " (degenerate: single trial)";
        }
        summary << '\n' << "repeat_changes: " << result.row.repeat_changes << '\n';
    }
    return ok;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOptions {
    std::string dims = "2,2";
    std::string eta_grid = "0,0.25,0.5,0.75,1";
    std::optional<std::string> seeds;
    std::string seeds_file;
    Schedule schedule;
    bool serial = false;
};

int cmd_sweep(const SweepOptions &opt, const Common &common, std::ostream &out,
              std::ostream &err) {
    const auto dims = parse_list<std::size_t>(opt.dims, "--dims");
    if (dims.size() != 2 || dims[0] < 2 || dims[1] < 2) {
        throw InputError("--dims must be 'dS,dM' with both at least 2");
    }
    const auto eta_grid = parse_list<double>(opt.eta_grid, "--eta-grid");
    if (eta_grid.empty()) {
        throw InputError("--eta-grid is empty");
    }

    std::vector<std::uint64_t> seeds;
    if (opt.seeds) {
        seeds = parse_list<std::uint64_t>(*opt.seeds, "--seeds");
    } else if (!opt.seeds_file.empty()) {
        std::ifstream in(opt.seeds_file);
        if (!in) {
            throw InputError("cannot open seed file '" + opt.seeds_file + "'");
        }
        std::string line;
        std::string joined;
        while (std::getline(in, line)) {
            if (const auto hash = line.find('#'); hash != std::string::npos) {
                line.erase(hash);
            }
            joined += line + ",";
        }
        seeds = parse_list<std::uint64_t>(joined, "seed file");
    } else {
        seeds = published_seeds;
    }
    if (seeds.empty()) {
        throw InputError("seed list is empty");
    }

    const SweepResult rows =
        interpolation_sweep(dims[0], dims[1], eta_grid, seeds, opt.schedule,
                            opt.serial ? Execution::serial : Execution::parallel);
    write_output(common.out_path, out,
                 [&](std::ostream &o) { write_sweep_csv(o, rows); });

    if (!common.quiet) {
        std::ostream &summary = common.out_path.empty() ? err : out;
        summary << "rows: " << rows.size() << '\n';
        for (const double eta : eta_grid) {
            std::size_t dispersed = 0;
            std::size_t total = 0;
            for (const auto &r : rows) {
                if (r.eta == eta) {
                    ++total;
                    dispersed += r.reading_variance > 0.0 ? 1 : 0;
                }
            }
            summary << "eta " << format_double(eta) << ": " << dispersed << "/"
                    << total << " seeds with positive reading variance\n";
        }
    }
    return ok;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
    CLI::App app{"Simulate projective measurements of a system coupled to an "
                 "apparatus",
                 "qmeasure"};
    app.require_subcommand(1);

    Common common;
    const auto add_common = [&](CLI::App *sub, bool with_out) {
        sub->add_flag("-q,--quiet", common.quiet, "Suppress the summary");
        if (with_out) {
            sub->add_option("-o,--out", common.out_path,
                            "Output CSV path (default: standard output)");
        }
    };

    std::string scenario_path;
    double threshold = default_condition_threshold;
    auto *check = app.add_subcommand("check", "Check the commutation conditions");
    check->add_option("scenario", scenario_path, "Scenario file")->required();
    check->add_option("--threshold", threshold, "Relative defect threshold")
        ->check(CLI::PositiveNumber);
    add_common(check, false);

    EvolveOptions evolve_opt;
    auto *evolve = app.add_subcommand("evolve", "Write a trajectory of omega(t)");
    evolve->add_option("scenario", scenario_path, "Scenario file")->required();
    evolve->add_option("--t-end", evolve_opt.t_end, "Final time")->required();
    evolve->add_option("--dt", evolve_opt.dt, "Time step / output spacing");
    auto *exact_flag = evolve->add_flag("--exact", evolve_opt.exact,
                                        "Spectral propagator (default)");
    auto *stepped_flag = evolve->add_flag("--stepped", evolve_opt.stepped,
                                          "Fourth-order Runge-Kutta");
    exact_flag->excludes(stepped_flag);
    add_common(evolve, true);

    MeasureOptions measure_opt;
    auto *measure = app.add_subcommand("measure", "Run repeated pointer readouts");
    measure->add_option("scenario", scenario_path, "Scenario file")->required();
    measure->add_option("--repeats", measure_opt.repeats, "Readouts per trial");
    measure->add_option("--trials", measure_opt.trials, "Independent trials");
    measure->add_option("--seed", measure_opt.seed, "Sampling seed");
    measure->add_flag("--serial", measure_opt.serial,
                      "Use the serial reference kernel");
    add_common(measure, true);

    SweepOptions sweep_opt;
    auto *sweep = app.add_subcommand("sweep", "Interpolation sweep between "
                                              "non-demolition and violating couplings");
    sweep->add_option("--dims", sweep_opt.dims, "dS,dM")->capture_default_str();
    sweep->add_option("--eta-grid", sweep_opt.eta_grid, "Comma-separated eta values")
        ->capture_default_str();
    auto *seeds_opt = sweep->add_option("--seeds", sweep_opt.seeds,
                                        "Comma-separated model seeds");
    sweep->add_option("--seeds-file", sweep_opt.seeds_file,
                      "File with one seed per line")
        ->excludes(seeds_opt);
    sweep->add_option("--tau", sweep_opt.schedule.tau)->capture_default_str();
    sweep->add_option("--dtau", sweep_opt.schedule.dtau)->capture_default_str();
    sweep->add_option("--repeats", sweep_opt.schedule.repeats)->capture_default_str();
    sweep->add_option("--trials", sweep_opt.schedule.trials)->capture_default_str();
    sweep->add_flag("--serial", sweep_opt.serial, "Use the serial reference kernel");
    add_common(sweep, true);

    std::vector<const char *> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("qmeasure");
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return input;
    }

    try {
        if (check->parsed()) {
            return cmd_check(scenario_path, threshold, common, out);
        }
        if (evolve->parsed()) {
            return cmd_evolve(scenario_path, evolve_opt, common, out, err);
        }
        if (measure->parsed()) {
            return cmd_measure(scenario_path, measure_opt, common, out, err);
        }
        if (sweep->parsed()) {
            return cmd_sweep(sweep_opt, common, out, err);
        }
    } catch (const InputError &e) {
        err << "error: " << e.what() << '\n';
        return input;
    } catch (const IntegrationFailure &e) {
        err << "error: " << e.what() << '\n';
        return negative;
    } catch (const ImpossibleOutcome &e) {
        err << "error: " << e.what() << '\n';
        return negative;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return negative;
    }
    return input;
}

} // namespace qmeasure::cli
