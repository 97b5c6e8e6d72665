#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dvs/analysis.hpp"
#include "dvs/power.hpp"
#include "dvs/rational.hpp"
#include "dvs/task_model.hpp"

namespace dvs {

enum class Method { Smax, OfflineEdf, OfflineEdfk, Mote, UniformSpeed };

std::string to_string(Method m);
/// Accepts "SMAX", "OFFLINE_EDF", "OFFLINE_EDFK", "MOTE" (case-insensitive).
Method parse_method(const std::string& s);

/// EDF^(k) priority: lexicographically smaller is higher priority.
struct PriorityKey {
    int cls = 1;           ///< 0 for privileged tasks, 1 otherwise
    Rational key;          ///< 0 for class 0, absolute deadline for class 1
    std::size_t task = 0;  ///< density rank
    std::int64_t job = 0;

    friend bool operator==(const PriorityKey&, const PriorityKey&) = default;
    friend auto operator<=>(const PriorityKey& a, const PriorityKey& b) {
        if (auto c = a.cls <=> b.cls; c != 0) return c;
        if (auto c = a.key <=> b.key; c != 0) return c;
        if (auto c = a.task <=> b.task; c != 0) return c;
        return a.job <=> b.job;
    }
};

/// k_opt = 1 is plain EDF.
PriorityKey priority_key(std::size_t task_rank, std::int64_t job_index, const Rational& abs_deadline, int k_opt);

/// One job release: density rank, per-task job index (0-based), arrival
/// time and actual execution requirement at speed 1.
struct JobRelease {
    std::size_t task = 0;
    std::int64_t job = 0;
    Rational arrival;
    Rational acet;
};

/// Per-job ACET source for periodic releases.
using AcetFn = std::function<Rational(std::size_t task_rank, std::int64_t job_index)>;

/// Synchronous periodic releases in [0, horizon), sorted by (arrival, task).
std::vector<JobRelease> periodic_releases(const TaskSystem& ts, const Rational& horizon, const AcetFn& acet);
/// Same with ACET = WCET.
std::vector<JobRelease> periodic_releases(const TaskSystem& ts, const Rational& horizon);

/// Sorts and validates an explicit sporadic sequence: job indices consecutive
/// from 0 per task, inter-arrival >= T_i, 0 < acet <= C_i, arrivals >= 0.
/// Throws MalformedTrace otherwise.
std::vector<JobRelease> check_releases(const TaskSystem& ts, std::vector<JobRelease> releases);

enum class EventKind { Release, Dispatch, Preempt, Complete, SpeedSet, DeadlineMiss };

std::string to_string(EventKind k);
EventKind parse_event_kind(const std::string& s);

struct TraceEvent {
    Rational time;
    EventKind kind = EventKind::Release;
    std::size_t task = 0;
    std::int64_t job = 0;
    int cpu = -1;                    ///< dispatch / preempt / complete only
    std::optional<Rational> speed;   ///< dispatch / speed-set
    std::optional<Rational> acet;    ///< release only
    /// Dispatch rows of MOTE runs: the computed contention instant. An empty
    /// optional inside means +infinity.
    std::optional<std::optional<Rational>> t_next;

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct Trace {
    Rational horizon;
    int m = 1;
    int k_opt = 1;
    Method method = Method::Smax;
    Rational s_min{1};
    std::vector<TraceEvent> events;

    friend bool operator==(const Trace&, const Trace&) = default;
};

/// Busy segments per CPU, from dispatch to the matching preempt/complete
/// (or the horizon). Throws MalformedTrace on unmatched rows.
std::vector<SpeedSegment> speed_segments(const Trace& trace);

/// Speed policy of one simulation run, derived from the analysis module.
struct Policy {
    Method method = Method::Smax;
    int k_opt = 1;
    /// Uniform methods: speed of every job. MOTE: unused.
    Rational uniform_speed{1};
    /// MOTE: admissible initial speed per rank.
    std::vector<Rational> initial_speeds;
    /// MOTE: apply the reduction step to privileged tasks too.
    bool mote_privileged = true;
    OfflineResult offline;
};

struct PolicyOptions {
    bool mote_privileged = true;
};

/// Builds the policy for `method` on this platform. OFFLINE_EDF uses
/// edf_min_speed; when that exceeds 1 on m >= n processors it falls back to
/// speed 1. Throws InfeasibleError when no admissible speed exists.
Policy make_policy(Method method, const TaskSystem& ts, const PlatformSpec& platform, PolicyOptions opts = {});

/// Uniform speed `speed` under EDF^(k_opt); no quantization applied.
Policy uniform_policy(const Rational& speed, int k_opt);

/// Event-driven global preemptive EDF^(k) over platform.m CPUs. Events at one
/// instant are processed as completions, deadline checks, releases, then one
/// dispatch pass. Deadline misses are recorded, never fatal.
Trace simulate(const TaskSystem& ts, const PlatformSpec& platform, const Policy& policy,
               std::span<const JobRelease> releases, const Rational& horizon);

/// Number of deadline-miss events.
std::size_t count_misses(const Trace& trace);

}  // namespace dvs
