#include "dvs/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dvs/errors.hpp"

namespace dvs::io {

namespace {

std::string idle_name(IdlePolicy p) { return p == IdlePolicy::AtMinSpeed ? "idle-at-s_min" : "idle-zero-power"; }

IdlePolicy parse_idle(const std::string& s) {
    if (s == "idle-at-s_min" || s == "s_min") return IdlePolicy::AtMinSpeed;
    if (s == "idle-zero-power" || s == "zero") return IdlePolicy::ZeroPower;
    throw ConfigError("unknown idle policy '" + s + "'");
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string t_next_cell(const TraceEvent& ev) {
    if (!ev.t_next) return "";
    return *ev.t_next ? (*ev.t_next)->str() : "inf";
}

std::optional<std::optional<Rational>> parse_t_next(const std::string& s) {
    if (s.empty()) return std::nullopt;
    if (s == "inf") return std::optional<Rational>{};
    return std::optional<Rational>{Rational::parse(s)};
}

const char* kTraceHeader = "time,time_q,kind,task,job,cpu,speed,speed_q,acet_q,t_next_q";

}  // namespace

std::string decimal(const Rational& r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", r.to_double());
    return buf;
}

Rational rational_from_json(const json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_number()) return Rational::parse(j.dump());
    throw ConfigError("expected a rational (\"p/q\" or number), got " + j.dump());
}

json rational_to_json(const Rational& r) { return r.str(); }

TaskSystem tasks_from_json(const json& j) {
    const json& arr = j.is_object() && j.contains("tasks") ? j.at("tasks") : j;
    if (!arr.is_array()) throw ConfigError("task set must be a JSON array");
    std::vector<TaskSpec> tasks;
    for (const auto& t : arr) {
        try {
            tasks.push_back({t.at("id").get<int>(), rational_from_json(t.at("wcet")),
                             rational_from_json(t.at("deadline")), rational_from_json(t.at("period"))});
        } catch (const json::exception& e) {
            throw ConfigError(std::string("bad task entry ") + t.dump() + ": " + e.what());
        }
    }
    return TaskSystem::normalize(std::move(tasks));
}

json tasks_to_json(const TaskSystem& ts) {
    json arr = json::array();
    for (const auto& t : ts.tasks())
        arr.push_back({{"id", t.id},
                       {"wcet", t.wcet.str()},
                       {"deadline", t.deadline.str()},
                       {"period", t.min_interarrival.str()}});
    return arr;
}

PowerModel power_model_from_json(const json& j) {
    if (j.is_string()) return PowerModel::preset(j.get<std::string>());
    try {
        const std::string name = j.value("name", "custom");
        if (j.contains("analytic")) {
            const auto& a = j.at("analytic");
            return PowerModel::analytic(name, a.value("c0", 0.0), a.value("c1", 100.0), a.value("gamma", 3.0));
        }
        std::vector<PowerRow> rows;
        for (const auto& r : j.at("rows"))
            rows.push_back({r.value("freq", 0.0), r.value("volt", 0.0), r.at("power").get<double>(),
                            rational_from_json(r.at("speed"))});
        std::sort(rows.begin(), rows.end(), [](const PowerRow& a, const PowerRow& b) { return a.speed < b.speed; });
        return PowerModel::table(name, std::move(rows));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad power model: ") + e.what());
    }
}

json power_model_to_json(const PowerModel& model) {
    if (!model.is_table())
        return {{"name", model.name()}, {"analytic", {{"c0", model.c0()}, {"c1", model.c1()}, {"gamma", model.gamma()}}}};
    json rows = json::array();
    for (const auto& r : model.rows())
        rows.push_back({{"freq", r.freq_mhz}, {"volt", r.volt}, {"power", r.power}, {"speed", r.speed.str()}});
    return {{"name", model.name()}, {"rows", rows}};
}

void write_trace_csv(std::ostream& os, const Trace& trace, const TaskSystem& ts) {
    os << kTraceHeader << '\n';
    for (const auto& ev : trace.events) {
        os << decimal(ev.time) << ',' << ev.time.str() << ',' << to_string(ev.kind) << ',' << ts[ev.task].id << ','
           << ev.job << ',';
        if (ev.cpu >= 0) os << ev.cpu;
        os << ',';
        if (ev.speed) os << decimal(*ev.speed) << ',' << ev.speed->str();
        else os << ',';
        os << ',';
        if (ev.acet) os << ev.acet->str();
        os << ',' << t_next_cell(ev) << '\n';
    }
}

Trace read_trace_csv(std::istream& is, const TaskSystem& ts, const Trace& header) {
    Trace trace = header;
    trace.events.clear();
    std::string line;
    if (!std::getline(is, line) || line != kTraceHeader) throw MalformedTrace("trace CSV: missing or unknown header");
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != 10) throw MalformedTrace("trace CSV line " + std::to_string(lineno) + ": expected 10 cells");
        try {
            TraceEvent ev;
            ev.time = Rational::parse(cells[1]);
            ev.kind = parse_event_kind(cells[2]);
            ev.task = ts.rank_of(std::stoi(cells[3]));
            ev.job = std::stoll(cells[4]);
            if (!cells[5].empty()) ev.cpu = std::stoi(cells[5]);
            if (!cells[7].empty()) ev.speed = Rational::parse(cells[7]);
            if (!cells[8].empty()) ev.acet = Rational::parse(cells[8]);
            ev.t_next = parse_t_next(cells[9]);
            trace.events.push_back(std::move(ev));
        } catch (const MalformedTrace&) {
            throw;
        } catch (const std::exception& e) {
            throw MalformedTrace("trace CSV line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return trace;
}

json trace_to_json(const Trace& trace, const TaskSystem& ts) {
    json events = json::array();
    for (const auto& ev : trace.events) {
        json row = {{"time", ev.time.str()}, {"kind", to_string(ev.kind)}, {"task", ts[ev.task].id}, {"job", ev.job}};
        if (ev.cpu >= 0) row["cpu"] = ev.cpu;
        if (ev.speed) row["speed"] = ev.speed->str();
        if (ev.acet) row["acet"] = ev.acet->str();
        if (ev.t_next) row["t_next"] = t_next_cell(ev);
        events.push_back(std::move(row));
    }
    return {{"horizon", trace.horizon.str()}, {"m", trace.m},         {"k_opt", trace.k_opt},
            {"method", to_string(trace.method)}, {"s_min", trace.s_min.str()}, {"events", events}};
}

Trace trace_from_json(const json& j, const TaskSystem& ts) {
    try {
        Trace trace;
        trace.horizon = rational_from_json(j.at("horizon"));
        trace.m = j.at("m").get<int>();
        trace.k_opt = j.value("k_opt", 1);
        trace.method = parse_method(j.value("method", "SMAX"));
        trace.s_min = rational_from_json(j.value("s_min", json("1")));
        for (const auto& row : j.at("events")) {
            TraceEvent ev;
            ev.time = rational_from_json(row.at("time"));
            ev.kind = parse_event_kind(row.at("kind").get<std::string>());
            ev.task = ts.rank_of(row.at("task").get<int>());
            ev.job = row.at("job").get<std::int64_t>();
            ev.cpu = row.value("cpu", -1);
            if (row.contains("speed")) ev.speed = rational_from_json(row.at("speed"));
            if (row.contains("acet")) ev.acet = rational_from_json(row.at("acet"));
            if (row.contains("t_next")) ev.t_next = parse_t_next(row.at("t_next").get<std::string>());
            trace.events.push_back(std::move(ev));
        }
        return trace;
    } catch (const json::exception& e) {
        throw MalformedTrace(std::string("trace JSON: ") + e.what());
    } catch (const std::out_of_range& e) {
        throw MalformedTrace(std::string("trace JSON: ") + e.what());
    }
}

json validation_to_json(const ValidationReport& report, const TaskSystem& ts) {
    const auto findings = [&](const std::vector<Finding>& list) {
        json arr = json::array();
        for (const auto& f : list)
            arr.push_back({{"time", f.time.str()}, {"task", ts[f.task].id}, {"job", f.job}, {"what", f.what}});
        return arr;
    };
    json misses = json::array();
    for (const auto& m : report.misses) {
        json row = {{"task", ts[m.task].id}, {"job", m.job}, {"deadline", m.deadline.str()}};
        row["completion"] = m.completion ? json(m.completion->str()) : json(nullptr);
        misses.push_back(std::move(row));
    }
    return {{"ok", report.ok()},
            {"misses", misses},
            {"priority_violations", findings(report.priority_violations)},
            {"overlap_violations", findings(report.overlap_violations)},
            {"speed_violations", findings(report.speed_violations)},
            {"work_violations", findings(report.work_violations)},
            {"non_interference_violations", findings(report.non_interference_violations)},
            {"once_only_violations", findings(report.once_only_violations)}};
}

json report_to_json(const EnergyReport& report) {
    json systems = json::array();
    for (const auto& s : report.systems) {
        json runs = json::array();
        for (const auto& r : s.runs)
            runs.push_back({{"model", r.model}, {"method", to_string(r.method)}, {"energy", r.energy}, {"savings", r.savings}});
        systems.push_back({{"system", s.system},
                           {"n", s.n},
                           {"m", s.m},
                           {"lambda_sum", s.lambda_sum.str()},
                           {"hyperperiod", s.hyperperiod.str()},
                           {"edf_speed", s.edf_speed.str()},
                           {"s_ol", s.s_ol.str()},
                           {"k_opt", s.k_opt},
                           {"error", s.error},
                           {"runs", runs}});
    }
    json summary = json::array();
    for (const auto& s : report.summary)
        summary.push_back({{"model", s.model},
                           {"method", to_string(s.method)},
                           {"count", s.count},
                           {"mean_savings", s.mean_savings},
                           {"stddev", s.stddev}});
    return {{"systems", systems}, {"summary", summary}};
}

EnergyReport report_from_json(const json& j) {
    EnergyReport report;
    try {
        for (const auto& s : j.at("systems")) {
            SystemResult row;
            row.system = s.at("system").get<std::size_t>();
            row.n = s.at("n").get<std::size_t>();
            row.m = s.at("m").get<int>();
            row.lambda_sum = rational_from_json(s.at("lambda_sum"));
            row.hyperperiod = rational_from_json(s.at("hyperperiod"));
            row.edf_speed = rational_from_json(s.at("edf_speed"));
            row.s_ol = rational_from_json(s.at("s_ol"));
            row.k_opt = s.at("k_opt").get<int>();
            row.error = s.at("error").get<std::string>();
            for (const auto& r : s.at("runs"))
                row.runs.push_back({row.system, r.at("model").get<std::string>(),
                                    parse_method(r.at("method").get<std::string>()), r.at("energy").get<double>(),
                                    r.at("savings").get<double>()});
            report.systems.push_back(std::move(row));
        }
        for (const auto& s : j.at("summary"))
            report.summary.push_back({s.at("model").get<std::string>(), parse_method(s.at("method").get<std::string>()),
                                      s.at("count").get<std::size_t>(), s.at("mean_savings").get<double>(),
                                      s.at("stddev").get<double>()});
    } catch (const json::exception& e) {
        throw ConfigError(std::string("report JSON: ") + e.what());
    }
    return report;
}

void write_report_csv(std::ostream& os, const EnergyReport& report) {
    os << "system,model,method,energy,savings_pct\n";
    char buf[64];
    for (const auto& s : report.systems)
        for (const auto& r : s.runs) {
            std::snprintf(buf, sizeof buf, "%.6f,%.6f", r.energy, r.savings);
            os << s.system << ',' << r.model << ',' << to_string(r.method) << ',' << buf << '\n';
        }
}

void write_plot_data(std::ostream& os, const EnergyReport& report) {
    os << "system,method,model,savings\n";
    char buf[32];
    for (const auto& s : report.systems)
        for (const auto& r : s.runs) {
            std::snprintf(buf, sizeof buf, "%.6f", r.savings);
            os << s.system << ',' << to_string(r.method) << ',' << r.model << ',' << buf << '\n';
        }
}

ExperimentConfig experiment_from_json(const json& j) {
    ExperimentConfig cfg;
    try {
        if (j.contains("gen")) {
            const auto& g = j.at("gen");
            auto& p = cfg.gen;
            if (g.contains("n_range")) {
                p.n_min = g.at("n_range").at(0).get<int>();
                p.n_max = g.at("n_range").at(1).get<int>();
            }
            const auto range = [&](const char* key, Rational& lo, Rational& hi) {
                if (!g.contains(key)) return;
                lo = rational_from_json(g.at(key).at(0));
                hi = rational_from_json(g.at(key).at(1));
            };
            range("lambda_sum_range", p.lambda_sum_min, p.lambda_sum_max);
            range("deadline_ratio_range", p.deadline_ratio_min, p.deadline_ratio_max);
            range("acet_ratio_range", p.acet_ratio_min, p.acet_ratio_max);
            if (g.contains("period_pool")) {
                p.period_pool.clear();
                for (const auto& v : g.at("period_pool")) p.period_pool.push_back(rational_from_json(v));
            }
            p.seed = g.value("seed", p.seed);
        }
        cfg.systems = j.value("systems", cfg.systems);
        if (j.contains("power_models")) {
            cfg.models.clear();
            for (const auto& m : j.at("power_models")) cfg.models.push_back(power_model_from_json(m));
        }
        if (j.contains("methods")) {
            cfg.methods.clear();
            for (const auto& m : j.at("methods")) cfg.methods.push_back(parse_method(m.get<std::string>()));
        }
        if (j.contains("idle_policy")) cfg.idle = parse_idle(j.at("idle_policy").get<std::string>());
        if (j.contains("continuous_s_min")) cfg.continuous_s_min = rational_from_json(j.at("continuous_s_min"));
        cfg.mote_privileged = j.value("mote_privileged", cfg.mote_privileged);
        if (j.contains("transition_inflation"))
            cfg.transition_inflation = rational_from_json(j.at("transition_inflation"));
        if (j.contains("max_hyperperiod")) cfg.max_hyperperiod = rational_from_json(j.at("max_hyperperiod"));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("experiment config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("experiment config: ") + e.what());
    }
    return cfg;
}

json experiment_to_json(const ExperimentConfig& cfg) {
    const auto& p = cfg.gen;
    json pool = json::array();
    for (const auto& v : p.period_pool) pool.push_back(v.str());
    json models = json::array();
    for (const auto& m : cfg.models) models.push_back(power_model_to_json(m));
    json methods = json::array();
    for (Method m : cfg.methods) methods.push_back(to_string(m));
    return {{"gen",
             {{"n_range", {p.n_min, p.n_max}},
              {"lambda_sum_range", {p.lambda_sum_min.str(), p.lambda_sum_max.str()}},
              {"deadline_ratio_range", {p.deadline_ratio_min.str(), p.deadline_ratio_max.str()}},
              {"acet_ratio_range", {p.acet_ratio_min.str(), p.acet_ratio_max.str()}},
              {"period_pool", pool},
              {"seed", p.seed}}},
            {"systems", cfg.systems},
            {"power_models", models},
            {"methods", methods},
            {"idle_policy", idle_name(cfg.idle)},
            {"continuous_s_min", cfg.continuous_s_min.str()},
            {"mote_privileged", cfg.mote_privileged},
            {"transition_inflation", cfg.transition_inflation.str()},
            {"max_hyperperiod", cfg.max_hyperperiod.str()}};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path + ": " + std::strerror(errno));
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path + ": " + std::strerror(errno));
    out << contents;
    if (!out) throw ConfigError("write failed for " + path + ": " + std::strerror(errno));
}

}  // namespace dvs::io
