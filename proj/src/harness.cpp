#include "dvs/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "dvs/analysis.hpp"
#include "dvs/errors.hpp"
#include "dvs/oracle.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dvs {

void ExperimentConfig::check() const {
    gen.check();
    if (systems < 1) throw ConfigError("experiment needs at least one system");
    if (models.empty()) throw ConfigError("experiment needs at least one power model");
    if (std::find(methods.begin(), methods.end(), Method::Smax) == methods.end())
        throw ConfigError("SMAX must be among the methods: it is the savings baseline");
    if (std::find(methods.begin(), methods.end(), Method::UniformSpeed) != methods.end())
        throw ConfigError("UNIFORM is not an experiment method");
    if (transition_inflation.sign() < 0) throw ConfigError("transition_inflation must be non-negative");
}

std::size_t EnergyReport::failed() const {
    return static_cast<std::size_t>(
        std::count_if(systems.begin(), systems.end(), [](const SystemResult& s) { return !s.error.empty(); }));
}

const MethodSummary* EnergyReport::find(const std::string& model, Method method) const {
    for (const auto& s : summary)
        if (s.model == model && s.method == method) return &s;
    return nullptr;
}

SystemResult run_system(const ExperimentConfig& cfg, std::size_t index) {
    SystemResult row;
    row.system = index;
    try {
        TaskSystem ts = generate(cfg.gen, static_cast<std::uint64_t>(index));
        if (cfg.transition_inflation.sign() > 0) ts = ts.with_inflated_wcet(cfg.transition_inflation);
        row.n = ts.size();
        row.m = required_processors(ts);
        row.lambda_sum = ts.total_density();
        row.hyperperiod = hyperperiod(ts);
        row.edf_speed = edf_min_speed(ts, row.m);
        if (row.hyperperiod > cfg.max_hyperperiod)
            throw ConfigError("hyperperiod " + row.hyperperiod.str() + " over budget");

        const AcetStream stream(cfg.gen.seed, index);
        const auto releases = periodic_releases(ts, row.hyperperiod, acet_source(ts, cfg.gen, stream));

        for (const auto& model : cfg.models) {
            const PlatformSpec platform =
                model.is_table() ? PlatformSpec::discrete_platform(row.m, model, cfg.idle)
                                 : PlatformSpec::continuous_platform(row.m, cfg.continuous_s_min, model, cfg.idle);
            const OfflineResult off = offline_speed(ts, row.m, platform.s_min);
            row.s_ol = off.s_ol;
            row.k_opt = off.k_opt;

            std::vector<RunResult> runs;
            double baseline = 0;
            for (Method method : cfg.methods) {
                const Policy policy = make_policy(method, ts, platform, {cfg.mote_privileged});
                const Trace trace = simulate(ts, platform, policy, releases, row.hyperperiod);
                const ValidationReport report = validate_trace(trace, ts, platform, policy.k_opt);
                if (!report.ok())
                    throw std::runtime_error("validation failed for " + to_string(method) + " on " + model.name() +
                                             ":\n" + report.summary(5));
                RunResult run{index, model.name(), method, energy_of_trace(trace, model, platform), 0};
                if (method == Method::Smax) baseline = run.energy;
                runs.push_back(std::move(run));
            }
            for (auto& run : runs) run.savings = 100.0 * (1.0 - run.energy / baseline);
            row.runs.insert(row.runs.end(), runs.begin(), runs.end());
        }
    } catch (const std::exception& e) {
        row.error = e.what();
        row.runs.clear();
    }
    return row;
}

std::vector<MethodSummary> summarize(const ExperimentConfig& cfg, const std::vector<SystemResult>& systems) {
    std::vector<MethodSummary> out;
    for (const auto& model : cfg.models) {
        for (Method method : cfg.methods) {
            std::vector<double> values;
            for (const auto& sys : systems) {
                if (!sys.error.empty()) continue;
                for (const auto& run : sys.runs)
                    if (run.model == model.name() && run.method == method) values.push_back(run.savings);
            }
            MethodSummary s{model.name(), method, values.size(), 0, 0};
            if (!values.empty()) {
                double sum = 0;
                for (double v : values) sum += v;
                s.mean_savings = sum / static_cast<double>(values.size());
                if (values.size() > 1) {
                    double sq = 0;
                    for (double v : values) sq += (v - s.mean_savings) * (v - s.mean_savings);
                    s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
                }
            }
            out.push_back(std::move(s));
        }
    }
    return out;
}

EnergyReport run_comparison_serial(const ExperimentConfig& cfg) {
    cfg.check();
    EnergyReport report;
    report.systems.reserve(static_cast<std::size_t>(cfg.systems));
    for (int i = 0; i < cfg.systems; ++i) report.systems.push_back(run_system(cfg, static_cast<std::size_t>(i)));
    report.summary = summarize(cfg, report.systems);
    return report;
}

EnergyReport run_comparison(const ExperimentConfig& cfg) {
    cfg.check();
    EnergyReport report;
    report.systems.resize(static_cast<std::size_t>(cfg.systems));
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < cfg.systems; ++i)
        report.systems[static_cast<std::size_t>(i)] = run_system(cfg, static_cast<std::size_t>(i));
    report.summary = summarize(cfg, report.systems);
    return report;
}

}  // namespace dvs
