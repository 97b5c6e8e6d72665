#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dvs/mote.hpp"
#include "dvs/power.hpp"
#include "dvs/rational.hpp"
#include "dvs/sim.hpp"
#include "dvs/task_model.hpp"

namespace dvs {

struct Finding {
    Rational time;
    std::size_t task = 0;
    std::int64_t job = 0;
    std::string what;
};

struct Miss {
    std::size_t task = 0;
    std::int64_t job = 0;
    Rational deadline;
    std::optional<Rational> completion;  ///< empty: unfinished at the horizon
};

/// Independent replay of a trace. ok() iff every list is empty.
struct ValidationReport {
    std::vector<Miss> misses;
    std::vector<Finding> priority_violations;
    std::vector<Finding> overlap_violations;
    std::vector<Finding> speed_violations;
    std::vector<Finding> work_violations;
    /// A job displaced from its CPU before its computed contention instant.
    std::vector<Finding> non_interference_violations;
    /// A job strictly slowed by the reclaiming step and later preempted.
    std::vector<Finding> once_only_violations;

    bool ok() const;
    /// One line per finding, capped at `limit` lines.
    std::string summary(std::size_t limit = 10) const;
};

/// Replays `trace` against `ts`: deadlines, executed work = ACET, single
/// occupancy per CPU and per job, speed bounds (and table membership in
/// discrete mode), EDF^(k_opt) priority compliance and work conservation at
/// every timestamp, at most two speed assignments per job, and the MOTE
/// non-interference / once-only claims. Throws MalformedTrace on time
/// disorder or unmatched rows.
ValidationReport validate_trace(const Trace& trace, const TaskSystem& ts, const PlatformSpec& platform, int k_opt);

/// Reference contention instant: evaluates the bound separately at every
/// candidate instant and keeps the earliest one where it is <= 0.
std::optional<Rational> brute_force_tnext(const ContentionView& view);

/// Synchronous periodic arrivals, ACET = WCET, uniform speed `s`, EDF^(k_opt),
/// one hyperperiod: true iff no deadline is missed. Throws ModelError when the
/// hyperperiod exceeds `max_hyperperiod`.
bool worst_case_feasibility(const TaskSystem& ts, int m, const Rational& s, int k_opt,
                            const Rational& max_hyperperiod = Rational(100000));

}  // namespace dvs
