// dvsim: off-line speed analysis, single-system simulation, batch energy
// experiments and trace validation for multiprocessor DVS scheduling.
//
// Exit codes: 0 ok, 1 validation failure, 2 infeasible, 3 I/O or config error.
// DVSIM_WORKERS sets the number of worker threads for `experiment`.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dvs/analysis.hpp"
#include "dvs/errors.hpp"
#include "dvs/harness.hpp"
#include "dvs/io.hpp"
#include "dvs/oracle.hpp"
#include "dvs/power.hpp"
#include "dvs/sim.hpp"
#include "dvs/workload.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using dvs::Rational;
using dvs::io::json;

enum Exit { kOk = 0, kInvalid = 1, kInfeasible = 2, kConfig = 3 };

void set_workers() {
    const char* env = std::getenv("DVSIM_WORKERS");
    if (!env || !*env) return;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1) throw dvs::ConfigError(std::string("DVSIM_WORKERS must be a positive integer, got '") + env + "'");
#ifdef _OPENMP
    omp_set_num_threads(static_cast<int>(n));
#endif
}

Rational rational_arg(const std::string& s, const char* what) {
    try {
        return Rational::parse(s);
    } catch (const std::exception& e) {
        throw dvs::ConfigError(std::string(what) + ": " + e.what());
    }
}

dvs::IdlePolicy idle_arg(const std::string& s) {
    if (s == "s_min" || s == "idle-at-s_min") return dvs::IdlePolicy::AtMinSpeed;
    if (s == "zero" || s == "idle-zero-power") return dvs::IdlePolicy::ZeroPower;
    throw dvs::ConfigError("unknown idle policy '" + s + "' (use s_min or zero)");
}

// A preset name or a path to a power-model JSON file.
dvs::PowerModel model_arg(const std::string& s) {
    if (s == "tm5400" || s == "sa1100" || s == "cubic") return dvs::PowerModel::preset(s);
    return dvs::io::power_model_from_json(dvs::io::read_json_file(s));
}

struct PlatformArgs {
    std::string model = "cubic";
    std::string s_min = "1/10";
    std::string idle = "s_min";
    int m = 0;  // 0: required_processors

    dvs::PlatformSpec build(const dvs::TaskSystem& ts) const {
        const int cpus = m > 0 ? m : dvs::required_processors(ts);
        auto pm = model_arg(model);
        auto plat = pm.is_table() ? dvs::PlatformSpec::discrete_platform(cpus, pm, idle_arg(idle))
                                  : dvs::PlatformSpec::continuous_platform(cpus, rational_arg(s_min, "--s-min"), pm,
                                                                           idle_arg(idle));
        plat.check();
        return plat;
    }

    void add_to(CLI::App* cmd) {
        cmd->add_option("--model", model, "power model preset (tm5400, sa1100, cubic) or JSON file")
            ->capture_default_str();
        cmd->add_option("--s-min", s_min, "minimum speed for analytic models")->capture_default_str();
        cmd->add_option("--idle", idle, "idle accounting: s_min or zero")->capture_default_str();
        cmd->add_option("-m,--cpus", m, "processor count (default: required_processors)");
    }
};

void print_rational(const char* label, const Rational& r) {
    std::printf("%-14s %s (%s)\n", label, dvs::io::decimal(r).c_str(), r.str().c_str());
}

int cmd_analyze(const std::string& tasks_path, const PlatformArgs& pa, bool as_json) {
    const auto ts = dvs::io::tasks_from_json(dvs::io::read_json_file(tasks_path));
    if (ts.empty()) throw dvs::ConfigError(tasks_path + ": empty task set");
    const auto plat = pa.build(ts);
    const Rational edf = dvs::edf_min_speed(ts, plat.m);
    const auto off = dvs::offline_speed(ts, plat.m, plat.s_min);
    if (as_json) {
        json out = {{"n", ts.size()},
                    {"m", plat.m},
                    {"lambda_sum", ts.total_density().str()},
                    {"lambda_max", ts.max_density().str()},
                    {"edf_speed", edf.str()},
                    {"s_ol", off.s_ol.str()},
                    {"k_opt", off.k_opt},
                    {"dispatch_speed", plat.admissible(off.s_ol).str()},
                    {"hyperperiod", dvs::hyperperiod(ts).str()}};
        std::cout << out.dump(2) << '\n';
        return kOk;
    }
    std::printf("%-14s %zu\n", "n", ts.size());
    std::printf("%-14s %d\n", "m", plat.m);
    print_rational("lambda_sum", ts.total_density());
    print_rational("lambda_max", ts.max_density());
    print_rational("edf_speed", edf);
    print_rational("s_ol", off.s_ol);
    std::printf("%-14s %d\n", "k_opt", off.k_opt);
    print_rational("dispatch", plat.admissible(off.s_ol));
    return kOk;
}

struct SimulateArgs {
    std::string tasks;
    std::string method = "MOTE";
    std::string horizon;
    std::optional<std::uint64_t> acet_seed;
    std::string acet_min = "1/4";
    std::string acet_max = "1";
    bool mote_privileged = true;
    std::string csv_out, json_out;
    bool validate = false;
};

int cmd_simulate(const SimulateArgs& a, const PlatformArgs& pa) {
    const auto ts = dvs::io::tasks_from_json(dvs::io::read_json_file(a.tasks));
    if (ts.empty()) throw dvs::ConfigError(a.tasks + ": empty task set");
    const auto plat = pa.build(ts);
    const Rational horizon = a.horizon.empty() ? dvs::hyperperiod(ts) : rational_arg(a.horizon, "--horizon");
    const auto method = dvs::parse_method(a.method);
    const auto policy = dvs::make_policy(method, ts, plat, {a.mote_privileged});

    std::vector<dvs::JobRelease> releases;
    dvs::GenParams gen;
    if (a.acet_seed) {
        gen.acet_ratio_min = rational_arg(a.acet_min, "--acet-min");
        gen.acet_ratio_max = rational_arg(a.acet_max, "--acet-max");
        gen.check();
        const dvs::AcetStream stream(*a.acet_seed, 0);
        releases = dvs::periodic_releases(ts, horizon, dvs::acet_source(ts, gen, stream));
    } else {
        releases = dvs::periodic_releases(ts, horizon);
    }
    const auto trace = dvs::simulate(ts, plat, policy, releases, horizon);

    if (!a.csv_out.empty()) {
        std::ostringstream os;
        dvs::io::write_trace_csv(os, trace, ts);
        dvs::io::write_text_file(a.csv_out, os.str());
    }
    if (!a.json_out.empty()) dvs::io::write_text_file(a.json_out, dvs::io::trace_to_json(trace, ts).dump(1) + "\n");

    std::printf("method %s  m=%d  k_opt=%d  horizon=%s\n", dvs::to_string(method).c_str(), plat.m, policy.k_opt,
                horizon.str().c_str());
    std::printf("energy %.6f  misses %zu  events %zu\n", dvs::energy_of_trace(trace, plat.model, plat),
                dvs::count_misses(trace), trace.events.size());
    if (a.validate) {
        const auto report = dvs::validate_trace(trace, ts, plat, policy.k_opt);
        if (!report.ok()) {
            std::fputs(report.summary().c_str(), stderr);
            return kInvalid;
        }
        std::puts("validation ok");
    }
    return dvs::count_misses(trace) == 0 ? kOk : kInvalid;
}

struct ExperimentArgs {
    std::string config;
    std::optional<int> systems;
    std::optional<std::uint64_t> seed;
    std::string json_out, csv_out, plot_out;
    bool serial = false;
};

int cmd_experiment(const ExperimentArgs& a) {
    dvs::ExperimentConfig cfg = a.config.empty() ? dvs::ExperimentConfig{}
                                                 : dvs::io::experiment_from_json(dvs::io::read_json_file(a.config));
    if (a.systems) cfg.systems = *a.systems;
    if (a.seed) cfg.gen.seed = *a.seed;
    try {
        cfg.check();
    } catch (const dvs::ModelError& e) {
        throw dvs::ConfigError(e.what());
    }
    const auto report = a.serial ? dvs::run_comparison_serial(cfg) : dvs::run_comparison(cfg);

    if (!a.json_out.empty()) dvs::io::write_text_file(a.json_out, dvs::io::report_to_json(report).dump(1) + "\n");
    if (!a.csv_out.empty()) {
        std::ostringstream os;
        dvs::io::write_report_csv(os, report);
        dvs::io::write_text_file(a.csv_out, os.str());
    }
    if (!a.plot_out.empty()) {
        std::ostringstream os;
        dvs::io::write_plot_data(os, report);
        dvs::io::write_text_file(a.plot_out, os.str());
    }

    std::printf("%-10s %-14s %8s %10s %8s\n", "model", "method", "systems", "savings%", "stddev");
    for (const auto& s : report.summary)
        std::printf("%-10s %-14s %8zu %10.2f %8.2f\n", s.model.c_str(), dvs::to_string(s.method).c_str(), s.count,
                    s.mean_savings, s.stddev);
    if (report.failed() > 0) {
        std::fprintf(stderr, "%zu of %zu systems failed:\n", report.failed(), report.systems.size());
        int shown = 0;
        for (const auto& s : report.systems)
            if (!s.error.empty() && shown++ < 5) std::fprintf(stderr, "  system %zu: %s\n", s.system, s.error.c_str());
        return kInvalid;
    }
    return kOk;
}

struct ValidateArgs {
    std::string trace;
    std::string tasks;
    std::string horizon;
    int k_opt = 0;  // 0: taken from the trace metadata or recomputed
};

int cmd_validate(const ValidateArgs& a, const PlatformArgs& pa) {
    const auto ts = dvs::io::tasks_from_json(dvs::io::read_json_file(a.tasks));
    dvs::Trace trace;
    const bool csv = a.trace.size() >= 4 && a.trace.compare(a.trace.size() - 4, 4, ".csv") == 0;
    if (csv) {
        std::ifstream in(a.trace);
        if (!in) throw dvs::ConfigError("cannot open " + a.trace);
        dvs::Trace header;
        header.horizon = a.horizon.empty() ? dvs::hyperperiod(ts) : rational_arg(a.horizon, "--horizon");
        trace = dvs::io::read_trace_csv(in, ts, header);
    } else {
        trace = dvs::io::trace_from_json(dvs::io::read_json_file(a.trace), ts);
        if (!a.horizon.empty()) trace.horizon = rational_arg(a.horizon, "--horizon");
    }
    PlatformArgs p = pa;
    if (p.m == 0 && !csv) p.m = trace.m;
    const auto plat = p.build(ts);
    trace.m = plat.m;
    int k = a.k_opt;
    if (k == 0) k = csv ? dvs::offline_speed(ts, plat.m, plat.s_min).k_opt : trace.k_opt;

    const auto report = dvs::validate_trace(trace, ts, plat, k);
    std::cout << dvs::io::validation_to_json(report, ts).dump(2) << '\n';
    return report.ok() ? kOk : kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiprocessor DVS scheduling: analysis, simulation and energy experiments"};
    app.require_subcommand(1);

    PlatformArgs analyze_pa, simulate_pa, validate_pa;
    std::string analyze_tasks;
    bool analyze_json = false;
    auto* analyze = app.add_subcommand("analyze", "processor count and minimum speeds for a task set");
    analyze->add_option("tasks", analyze_tasks, "task-set JSON file")->required();
    analyze->add_flag("--json", analyze_json, "print JSON");
    analyze_pa.add_to(analyze);

    SimulateArgs sim;
    std::optional<std::uint64_t> sim_seed;
    auto* simulate = app.add_subcommand("simulate", "simulate one task set under one method");
    simulate->add_option("tasks", sim.tasks, "task-set JSON file")->required();
    simulate->add_option("--method", sim.method, "SMAX, OFFLINE_EDF, OFFLINE_EDFK or MOTE")->capture_default_str();
    simulate->add_option("--horizon", sim.horizon, "simulated time (default: one hyperperiod)");
    simulate->add_option("--acet-seed", sim_seed, "draw actual execution times with this seed (default: worst case)");
    simulate->add_option("--acet-min", sim.acet_min, "lower acet/wcet ratio")->capture_default_str();
    simulate->add_option("--acet-max", sim.acet_max, "upper acet/wcet ratio")->capture_default_str();
    simulate->add_flag("!--no-mote-privileged", sim.mote_privileged, "skip the reclaiming step for privileged tasks");
    simulate->add_option("--trace-csv", sim.csv_out, "write the trace as CSV");
    simulate->add_option("--trace-json", sim.json_out, "write the trace as JSON");
    simulate->add_flag("--validate", sim.validate, "check the trace with the independent validator");
    simulate_pa.add_to(simulate);

    ExperimentArgs ex;
    std::optional<int> ex_systems;
    std::optional<std::uint64_t> ex_seed;
    auto* experiment = app.add_subcommand("experiment", "batch energy comparison over generated systems");
    experiment->add_option("-c,--config", ex.config, "experiment JSON (defaults apply to missing keys)");
    experiment->add_option("--systems", ex_systems, "override the system count");
    experiment->add_option("--seed", ex_seed, "override the generator seed");
    experiment->add_option("--report", ex.json_out, "write the report as JSON");
    experiment->add_option("--csv", ex.csv_out, "write per-run energies as CSV");
    experiment->add_option("--emit-plot-data", ex.plot_out, "write tidy CSV (system, method, model, savings)");
    experiment->add_flag("--serial", ex.serial, "single-threaded reference path");

    ValidateArgs va;
    auto* validate = app.add_subcommand("validate", "replay a trace file and report violations");
    validate->add_option("trace", va.trace, "trace file (.json, or .csv with --horizon)")->required();
    validate->add_option("--tasks", va.tasks, "task-set JSON file")->required();
    validate->add_option("--horizon", va.horizon, "trace horizon (CSV default: one hyperperiod)");
    validate->add_option("-k,--k-opt", va.k_opt, "priority parameter (default: from the trace or the analysis)");
    validate_pa.add_to(validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        set_workers();
        if (*analyze) return cmd_analyze(analyze_tasks, analyze_pa, analyze_json);
        if (*simulate) {
            sim.acet_seed = sim_seed;
            return cmd_simulate(sim, simulate_pa);
        }
        if (*experiment) {
            ex.systems = ex_systems;
            ex.seed = ex_seed;
            return cmd_experiment(ex);
        }
        if (*validate) return cmd_validate(va, validate_pa);
    } catch (const dvs::InfeasibleError& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return kInfeasible;
    } catch (const dvs::MalformedTrace& e) {
        std::fprintf(stderr, "malformed trace: %s\n", e.what());
        return kConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfig;
    }
    return kConfig;
}
