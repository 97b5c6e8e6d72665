#pragma once

#include <string>
#include <vector>

#include "dvs/rational.hpp"

namespace dvs {

struct Trace;

/// One operating point of a discrete DVS processor.
struct PowerRow {
    double freq_mhz = 0;
    double volt = 0;
    double power = 0;  ///< percent of the power at full speed
    Rational speed;    ///< f / f_max
};

/// Either a frequency table or power(s) = c0 + c1 * s^gamma, with
/// power(1) = 100 in both cases.
class PowerModel {
public:
    /// Rows must be sorted by strictly increasing speed, end at speed 1 with
    /// power 100, and have non-decreasing power. Throws ModelError otherwise.
    static PowerModel table(std::string name, std::vector<PowerRow> rows);
    /// Requires gamma >= 2, c0, c1 >= 0 and c0 + c1 = 100.
    static PowerModel analytic(std::string name, double c0, double c1, double gamma);

    /// Built-in presets: "tm5400" (Transmeta Crusoe) and "sa1100" (StrongARM),
    /// and "cubic" (0 + 100 s^3). Throws ModelError for unknown names.
    static PowerModel preset(const std::string& name);

    const std::string& name() const { return name_; }
    bool is_table() const { return !rows_.empty(); }
    const std::vector<PowerRow>& rows() const { return rows_; }
    double c0() const { return c0_; }
    double c1() const { return c1_; }
    double gamma() const { return gamma_; }

    /// Smallest table speed (table models only).
    const Rational& min_speed() const;

private:
    std::string name_;
    std::vector<PowerRow> rows_;
    double c0_ = 0, c1_ = 0, gamma_ = 0;
};

/// Smallest table speed >= requested. Analytic models return `requested`
/// unchanged. Throws InfeasibleError when requested > 1.
Rational quantize_speed(const PowerModel& model, const Rational& requested);

/// Power (percent of full-speed power) at speed s. For table models s must
/// be one of the table speeds, else std::invalid_argument.
double power_at(const PowerModel& model, const Rational& s);

enum class IdlePolicy { AtMinSpeed, ZeroPower };

/// m identical DVS processors. Continuous speeds go with an analytic power
/// model; discrete speeds go with a frequency table, whose lowest speed is s_min.
struct PlatformSpec {
    int m = 1;
    Rational s_min{1};
    PowerModel model = PowerModel::preset("cubic");
    IdlePolicy idle = IdlePolicy::AtMinSpeed;

    bool discrete() const { return model.is_table(); }

    /// Discrete platform on a table model; s_min from the table.
    static PlatformSpec discrete_platform(int m, PowerModel model, IdlePolicy idle = IdlePolicy::AtMinSpeed);
    /// Continuous platform on an analytic model.
    static PlatformSpec continuous_platform(int m, Rational s_min, PowerModel model,
                                            IdlePolicy idle = IdlePolicy::AtMinSpeed);

    /// max(s_min, s), quantized upward in discrete mode.
    Rational admissible(const Rational& s) const;

    /// Throws ModelError if the invariants do not hold.
    void check() const;
};

/// Piecewise-constant busy interval of one CPU.
struct SpeedSegment {
    int cpu = 0;
    Rational start;
    Rational end;
    Rational speed;
};

/// Energy (percent * time units) over [0, trace.horizon]. Busy segments cost
/// power_at(speed) * duration; uncovered CPU time costs power_at(s_min) per
/// time unit under IdlePolicy::AtMinSpeed and nothing under ZeroPower.
/// Throws MalformedTrace on overlapping segments.
double energy_of_trace(const Trace& trace, const PowerModel& model, const PlatformSpec& platform);

/// Same accounting over explicit segments.
double energy_of_segments(std::vector<SpeedSegment> segments, const Rational& horizon,
                          const PowerModel& model, const PlatformSpec& platform);

}  // namespace dvs
