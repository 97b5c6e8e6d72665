#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "dvs/harness.hpp"
#include "dvs/oracle.hpp"
#include "dvs/power.hpp"
#include "dvs/sim.hpp"
#include "dvs/task_model.hpp"

namespace dvs::io {

using nlohmann::json;

/// Rationals are written as "p/q" strings; reads accept such strings or
/// JSON numbers (decimals converted exactly).
Rational rational_from_json(const json& j);
json rational_to_json(const Rational& r);

/// [{"id": 1, "wcet": "3", "deadline": "5", "period": "5"}, ...]
TaskSystem tasks_from_json(const json& j);
json tasks_to_json(const TaskSystem& ts);

/// {"name":..., "rows":[{"freq":..,"volt":..,"power":..,"speed":"p/q"}]} or
/// {"name":..., "analytic":{"c0":..,"c1":..,"gamma":..}}. A bare string names a preset.
PowerModel power_model_from_json(const json& j);
json power_model_to_json(const PowerModel& model);

/// Trace rows use external task ids; `ts` maps them to ranks.
void write_trace_csv(std::ostream& os, const Trace& trace, const TaskSystem& ts);
Trace read_trace_csv(std::istream& is, const TaskSystem& ts, const Trace& header);
json trace_to_json(const Trace& trace, const TaskSystem& ts);
Trace trace_from_json(const json& j, const TaskSystem& ts);

json validation_to_json(const ValidationReport& report, const TaskSystem& ts);

json report_to_json(const EnergyReport& report);
EnergyReport report_from_json(const json& j);
/// One row per (system, model, method); header only for an empty report.
void write_report_csv(std::ostream& os, const EnergyReport& report);
/// Tidy plotting data: system, method, model, savings.
void write_plot_data(std::ostream& os, const EnergyReport& report);

/// Experiment configuration; every key optional, defaults from ExperimentConfig.
ExperimentConfig experiment_from_json(const json& j);
json experiment_to_json(const ExperimentConfig& cfg);

/// Whole-file helpers; failures throw ConfigError carrying the OS message.
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

/// Shortest decimal that round-trips `r`'s double value.
std::string decimal(const Rational& r);

}  // namespace dvs::io
