#include "dvs/power.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dvs/errors.hpp"
#include "dvs/sim.hpp"

namespace dvs {

namespace {

std::vector<PowerRow> rows_of(std::initializer_list<std::tuple<double, double, double, const char*>> raw) {
    std::vector<PowerRow> rows;
    for (const auto& [f, v, p, s] : raw) rows.push_back({f, v, p, Rational::parse(s)});
    std::reverse(rows.begin(), rows.end());
    return rows;
}

}  // namespace

PowerModel PowerModel::table(std::string name, std::vector<PowerRow> rows) {
    if (rows.empty()) throw ModelError("power model '" + name + "' has no rows");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].speed.sign() <= 0) throw ModelError("power model '" + name + "': non-positive speed");
        if (i > 0 && !(rows[i - 1].speed < rows[i].speed))
            throw ModelError("power model '" + name + "': speeds must be strictly increasing");
        if (i > 0 && rows[i].power < rows[i - 1].power)
            throw ModelError("power model '" + name + "': power must be non-decreasing in speed");
    }
    if (rows.back().speed != Rational(1) || rows.back().power != 100.0)
        throw ModelError("power model '" + name + "': top row must have speed 1 and power 100");
    PowerModel m;
    m.name_ = std::move(name);
    m.rows_ = std::move(rows);
    return m;
}

PowerModel PowerModel::analytic(std::string name, double c0, double c1, double gamma) {
    if (!(gamma >= 2.0) || c0 < 0 || c1 < 0 || std::abs(c0 + c1 - 100.0) > 1e-9)
        throw ModelError("analytic power model '" + name + "' needs gamma >= 2, c0, c1 >= 0, c0 + c1 = 100");
    PowerModel m;
    m.name_ = std::move(name);
    m.c0_ = c0;
    m.c1_ = c1;
    m.gamma_ = gamma;
    return m;
}

PowerModel PowerModel::preset(const std::string& name) {
    if (name == "tm5400")
        return table(name, rows_of({{700, 1.65, 100, "1"},
                                    {600, 1.60, 80.59, "0.857"},
                                    {500, 1.50, 59.03, "0.714"},
                                    {400, 1.40, 41.14, "0.571"},
                                    {300, 1.25, 24.60, "0.429"},
                                    {200, 1.10, 12.70, "0.286"}}));
    if (name == "sa1100")
        return table(name, rows_of({{206, 1.50, 100, "1"},
                                    {195, 1.42, 78.9, "0.947"},
                                    {180, 1.30, 63.2, "0.874"},
                                    {165, 1.20, 50.0, "0.801"},
                                    {150, 1.15, 39.9, "0.728"},
                                    {135, 1.10, 33.6, "0.655"},
                                    {120, 1.08, 33.0, "0.583"},
                                    {105, 0.95, 19.8, "0.510"},
                                    {90, 0.90, 15.0, "0.437"},
                                    {75, 0.82, 11.8, "0.364"},
                                    {60, 0.80, 9.44, "0.291"}}));
    if (name == "cubic") return analytic(name, 0.0, 100.0, 3.0);
    throw ModelError("unknown power model preset '" + name + "'");
}

const Rational& PowerModel::min_speed() const {
    if (rows_.empty()) throw std::logic_error("min_speed() on an analytic power model");
    return rows_.front().speed;
}

Rational quantize_speed(const PowerModel& model, const Rational& requested) {
    if (requested > Rational(1))
        throw InfeasibleError("requested speed " + requested.str() + " exceeds s_max = 1");
    if (!model.is_table()) return requested;
    const auto& rows = model.rows();
    const auto it = std::lower_bound(rows.begin(), rows.end(), requested,
                                     [](const PowerRow& r, const Rational& s) { return r.speed < s; });
    return it->speed;
}

double power_at(const PowerModel& model, const Rational& s) {
    if (!model.is_table()) return model.c0() + model.c1() * std::pow(s.to_double(), model.gamma());
    const auto& rows = model.rows();
    const auto it = std::lower_bound(rows.begin(), rows.end(), s,
                                     [](const PowerRow& r, const Rational& v) { return r.speed < v; });
    if (it == rows.end() || it->speed != s)
        throw std::invalid_argument("speed " + s.str() + " is not a table speed of '" + model.name() + "'");
    return it->power;
}

PlatformSpec PlatformSpec::discrete_platform(int m, PowerModel model, IdlePolicy idle) {
    PlatformSpec p;
    p.m = m;
    p.s_min = model.min_speed();
    p.model = std::move(model);
    p.idle = idle;
    p.check();
    return p;
}

PlatformSpec PlatformSpec::continuous_platform(int m, Rational s_min, PowerModel model, IdlePolicy idle) {
    PlatformSpec p;
    p.m = m;
    p.s_min = std::move(s_min);
    p.model = std::move(model);
    p.idle = idle;
    p.check();
    return p;
}

Rational PlatformSpec::admissible(const Rational& s) const { return quantize_speed(model, max(s_min, s)); }

void PlatformSpec::check() const {
    if (m < 1) throw ModelError("platform needs at least one processor");
    if (s_min.sign() <= 0 || s_min > Rational(1)) throw ModelError("s_min must lie in (0, 1]");
    if (discrete() && s_min != model.min_speed())
        throw ModelError("discrete platform: s_min must equal the smallest table speed");
}

double energy_of_segments(std::vector<SpeedSegment> segments, const Rational& horizon,
                          const PowerModel& model, const PlatformSpec& platform) {
    std::sort(segments.begin(), segments.end(), [](const SpeedSegment& a, const SpeedSegment& b) {
        return a.cpu != b.cpu ? a.cpu < b.cpu : a.start < b.start;
    });
    double energy = 0;
    Rational busy(0);
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& seg = segments[i];
        if (seg.cpu < 0 || seg.cpu >= platform.m) throw MalformedTrace("segment on unknown cpu");
        if (!(seg.start < seg.end)) throw MalformedTrace("empty or reversed speed segment");
        if (i > 0 && segments[i - 1].cpu == seg.cpu && seg.start < segments[i - 1].end)
            throw MalformedTrace("overlapping speed segments on cpu " + std::to_string(seg.cpu));
        const Rational len = seg.end - seg.start;
        energy += power_at(model, seg.speed) * len.to_double();
        busy += len;
    }
    if (platform.idle == IdlePolicy::AtMinSpeed) {
        const Rational idle = horizon * Rational(platform.m) - busy;
        energy += power_at(model, platform.s_min) * idle.to_double();
    }
    return energy;
}

double energy_of_trace(const Trace& trace, const PowerModel& model, const PlatformSpec& platform) {
    return energy_of_segments(speed_segments(trace), trace.horizon, model, platform);
}

}  // namespace dvs
