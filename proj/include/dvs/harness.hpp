#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dvs/power.hpp"
#include "dvs/rational.hpp"
#include "dvs/sim.hpp"
#include "dvs/workload.hpp"

namespace dvs {

struct ExperimentConfig {
    GenParams gen;
    int systems = 100;
    /// Table models run in discrete speed mode, analytic ones in continuous mode.
    std::vector<PowerModel> models{PowerModel::preset("sa1100"), PowerModel::preset("tm5400")};
    std::vector<Method> methods{Method::Smax, Method::OfflineEdf, Method::OfflineEdfk, Method::Mote};
    IdlePolicy idle = IdlePolicy::AtMinSpeed;
    /// s_min for analytic (continuous) models.
    Rational continuous_s_min{1, 10};
    bool mote_privileged = true;
    /// Added to every WCET before analysis (speed-transition overhead).
    Rational transition_inflation{0};
    Rational max_hyperperiod{100000};

    /// Throws ConfigError when SMAX is missing, no model is given, or the
    /// system count is not positive.
    void check() const;
};

struct RunResult {
    std::size_t system = 0;
    std::string model;
    Method method = Method::Smax;
    double energy = 0;
    double savings = 0;  ///< percent vs SMAX on the same model

    friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Per-system facts; `error` is set when the row was rejected (validator
/// failure, infeasibility), in which case its runs are not aggregated.
struct SystemResult {
    std::size_t system = 0;
    std::size_t n = 0;
    int m = 0;
    Rational lambda_sum;
    Rational hyperperiod;
    Rational edf_speed;
    Rational s_ol;
    int k_opt = 1;
    std::string error;
    std::vector<RunResult> runs;

    friend bool operator==(const SystemResult&, const SystemResult&) = default;
};

struct MethodSummary {
    std::string model;
    Method method = Method::Smax;
    std::size_t count = 0;
    double mean_savings = 0;
    double stddev = 0;  ///< sample standard deviation across systems
};

struct EnergyReport {
    std::vector<SystemResult> systems;
    std::vector<MethodSummary> summary;

    std::size_t failed() const;
    const MethodSummary* find(const std::string& model, Method method) const;
};

/// Simulates system `index` of the batch under every configured method and
/// model over one hyperperiod, with one shared ACET stream.
SystemResult run_system(const ExperimentConfig& cfg, std::size_t index);

/// Batch over cfg.systems, OpenMP-parallel across systems. Result is
/// identical to run_comparison_serial.
EnergyReport run_comparison(const ExperimentConfig& cfg);

/// Single-threaded reference path.
EnergyReport run_comparison_serial(const ExperimentConfig& cfg);

/// Means and standard deviations per (model, method), ordered as configured.
std::vector<MethodSummary> summarize(const ExperimentConfig& cfg, const std::vector<SystemResult>& systems);

}  // namespace dvs
