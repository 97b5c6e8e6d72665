#include "dvs/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "dvs/errors.hpp"

namespace dvs {

bool ValidationReport::ok() const {
    return misses.empty() && priority_violations.empty() && overlap_violations.empty() &&
           speed_violations.empty() && work_violations.empty() && non_interference_violations.empty() &&
           once_only_violations.empty();
}

std::string ValidationReport::summary(std::size_t limit) const {
    std::ostringstream os;
    std::size_t lines = 0;
    const auto line = [&](const std::string& s) {
        if (lines++ < limit) os << s << '\n';
    };
    for (const auto& m : misses)
        line("miss: task " + std::to_string(m.task) + " job " + std::to_string(m.job) + " deadline " +
             m.deadline.str() + (m.completion ? " completed " + m.completion->str() : " unfinished"));
    const auto findings = [&](const char* kind, const std::vector<Finding>& list) {
        for (const auto& f : list)
            line(std::string(kind) + " @" + f.time.str() + ": task " + std::to_string(f.task) + " job " +
                 std::to_string(f.job) + ": " + f.what);
    };
    findings("priority", priority_violations);
    findings("overlap", overlap_violations);
    findings("speed", speed_violations);
    findings("work", work_violations);
    findings("non-interference", non_interference_violations);
    findings("once-only", once_only_violations);
    if (lines > limit) os << "... " << (lines - limit) << " more\n";
    return os.str();
}

namespace {

using JobId = std::pair<std::size_t, std::int64_t>;

struct Replayed {
    Rational deadline;
    Rational acet;
    PriorityKey key;
    Rational executed{0};
    std::optional<Rational> assigned_speed;
    int speed_sets = 0;
    bool reduced = false;
    int cpu = -1;
    Rational run_start;
    Rational run_speed;
    std::optional<Rational> protected_until;  ///< contention instant of the current run
    bool protected_forever = false;
    bool done = false;
};

class Replay {
public:
    Replay(const Trace& trace, const TaskSystem& ts, const PlatformSpec& platform, int k_opt)
        : trace_(trace), ts_(ts), platform_(platform), k_opt_(k_opt),
          cpus_(static_cast<std::size_t>(std::max(platform.m, trace.m))) {}

    ValidationReport run() {
        const auto& events = trace_.events;
        for (std::size_t i = 0; i < events.size();) {
            const Rational& t = events[i].time;
            if (i > 0 && t < events[i - 1].time) throw MalformedTrace("events out of time order at t=" + t.str());
            if (t.sign() < 0 || t > trace_.horizon) throw MalformedTrace("event outside [0, horizon]: t=" + t.str());
            std::size_t j = i;
            while (j < events.size() && events[j].time == t) apply(events[j++]);
            check_priorities(t);
            i = j;
        }
        finish();
        return std::move(report_);
    }

private:
    Replayed& job_of(const TraceEvent& ev) {
        const auto it = jobs_.find({ev.task, ev.job});
        if (it == jobs_.end())
            throw MalformedTrace(to_string(ev.kind) + " of unreleased job at t=" + ev.time.str());
        return it->second;
    }

    void finding(std::vector<Finding>& list, const TraceEvent& ev, std::string what) {
        list.push_back({ev.time, ev.task, ev.job, std::move(what)});
    }

    bool admissible(const Rational& s) const {
        if (s < platform_.s_min || s > Rational(1)) return false;
        if (!platform_.discrete()) return true;
        const auto& rows = platform_.model.rows();
        return std::any_of(rows.begin(), rows.end(), [&](const PowerRow& r) { return r.speed == s; });
    }

    void stop_run(Replayed& job, const TraceEvent& ev) {
        if (job.cpu != ev.cpu || ev.cpu < 0)
            throw MalformedTrace(to_string(ev.kind) + " of a job not running on cpu " + std::to_string(ev.cpu) +
                                 " at t=" + ev.time.str());
        job.executed += job.run_speed * (ev.time - job.run_start);
        cpus_[static_cast<std::size_t>(ev.cpu)].reset();
        job.cpu = -1;
    }

    void apply(const TraceEvent& ev) {
        switch (ev.kind) {
            case EventKind::Release: {
                if (ev.task >= ts_.size()) throw MalformedTrace("release of unknown task rank");
                if (!ev.acet) throw MalformedTrace("release row without acet at t=" + ev.time.str());
                Replayed job;
                job.deadline = ev.time + ts_[ev.task].deadline;
                job.acet = *ev.acet;
                job.key = priority_key(ev.task, ev.job, job.deadline, k_opt_);
                if (!jobs_.emplace(JobId{ev.task, ev.job}, std::move(job)).second)
                    throw MalformedTrace("job released twice at t=" + ev.time.str());
                if (ev.acet->sign() <= 0 || *ev.acet > ts_[ev.task].wcet)
                    finding(report_.work_violations, ev, "acet outside (0, C]");
                ready_.insert({ev.task, ev.job});
                break;
            }
            case EventKind::SpeedSet: {
                auto& job = job_of(ev);
                if (!ev.speed) throw MalformedTrace("speed-set without speed");
                if (job.cpu >= 0) finding(report_.speed_violations, ev, "speed changed while running");
                if (job.assigned_speed && *ev.speed < *job.assigned_speed) job.reduced = true;
                job.assigned_speed = ev.speed;
                if (++job.speed_sets == 3) finding(report_.speed_violations, ev, "more than two speed assignments");
                break;
            }
            case EventKind::Dispatch: {
                auto& job = job_of(ev);
                if (!ev.speed) throw MalformedTrace("dispatch without speed");
                if (ev.cpu < 0 || static_cast<std::size_t>(ev.cpu) >= cpus_.size())
                    throw MalformedTrace("dispatch on unknown cpu " + std::to_string(ev.cpu));
                if (job.done) throw MalformedTrace("dispatch of a completed job at t=" + ev.time.str());
                if (job.cpu >= 0) {
                    finding(report_.overlap_violations, ev, "job already running on cpu " + std::to_string(job.cpu));
                    break;
                }
                auto& slot = cpus_[static_cast<std::size_t>(ev.cpu)];
                if (slot) {
                    finding(report_.overlap_violations, ev, "cpu " + std::to_string(ev.cpu) + " already busy");
                    break;
                }
                if (!admissible(*ev.speed)) finding(report_.speed_violations, ev, "inadmissible speed " + ev.speed->str());
                if (job.assigned_speed && *job.assigned_speed != *ev.speed)
                    finding(report_.speed_violations, ev, "dispatched at a speed other than the assigned one");
                slot = JobId{ev.task, ev.job};
                job.cpu = ev.cpu;
                job.run_start = ev.time;
                job.run_speed = *ev.speed;
                job.protected_until.reset();
                job.protected_forever = false;
                if (ev.t_next) {
                    if (!*ev.t_next) job.protected_forever = true;
                    else if (**ev.t_next > ev.time) job.protected_until = **ev.t_next;
                }
                ready_.erase({ev.task, ev.job});
                running_.insert({ev.task, ev.job});
                break;
            }
            case EventKind::Preempt: {
                auto& job = job_of(ev);
                stop_run(job, ev);
                if (job.protected_forever || (job.protected_until && ev.time < *job.protected_until))
                    finding(report_.non_interference_violations, ev, "preempted before its contention instant");
                if (job.reduced) finding(report_.once_only_violations, ev, "preempted after a speed reduction");
                running_.erase({ev.task, ev.job});
                ready_.insert({ev.task, ev.job});
                break;
            }
            case EventKind::Complete: {
                auto& job = job_of(ev);
                stop_run(job, ev);
                job.done = true;
                running_.erase({ev.task, ev.job});
                if (job.executed != job.acet)
                    finding(report_.work_violations, ev,
                            "executed " + job.executed.str() + " but acet is " + job.acet.str());
                if (ev.time > job.deadline) report_.misses.push_back({ev.task, ev.job, job.deadline, ev.time});
                break;
            }
            case EventKind::DeadlineMiss: break;  // recomputed independently
        }
    }

    void check_priorities(const Rational& t) {
        if (ready_.empty()) return;
        std::optional<PriorityKey> best_ready;
        for (const auto& id : ready_) {
            const auto& key = jobs_.at(id).key;
            if (!best_ready || key < *best_ready) best_ready = key;
        }
        const bool idle = std::any_of(cpus_.begin(), cpus_.end(), [](const auto& c) { return !c.has_value(); });
        if (idle) {
            report_.priority_violations.push_back(
                {t, best_ready->task, best_ready->job, "ready job waits while a cpu is idle"});
            return;
        }
        for (const auto& id : running_)
            if (*best_ready < jobs_.at(id).key)
                report_.priority_violations.push_back(
                    {t, id.first, id.second,
                     "runs while task " + std::to_string(best_ready->task) + " job " +
                         std::to_string(best_ready->job) + " waits"});
    }

    void finish() {
        for (auto& [id, job] : jobs_) {
            if (job.done) continue;
            if (job.cpu >= 0) job.executed += job.run_speed * (trace_.horizon - job.run_start);
            if (job.executed > job.acet) {
                Finding f{trace_.horizon, id.first, id.second, "executed more than acet"};
                report_.work_violations.push_back(f);
            }
            if (job.deadline <= trace_.horizon) report_.misses.push_back({id.first, id.second, job.deadline, {}});
        }
    }

    const Trace& trace_;
    const TaskSystem& ts_;
    const PlatformSpec& platform_;
    int k_opt_;
    std::map<JobId, Replayed> jobs_;
    std::vector<std::optional<JobId>> cpus_;
    std::set<JobId> ready_;
    std::set<JobId> running_;
    ValidationReport report_;
};

}  // namespace

ValidationReport validate_trace(const Trace& trace, const TaskSystem& ts, const PlatformSpec& platform, int k_opt) {
    return Replay(trace, ts, platform, k_opt).run();
}

std::optional<Rational> brute_force_tnext(const ContentionView& view) {
    const std::size_t n = view.tasks.size();
    if (static_cast<std::size_t>(view.m) > n) return std::nullopt;

    std::vector<Rational> candidates{view.now};
    for (std::size_t i = 0; i < n; ++i) {
        const auto& task = view.tasks[i];
        candidates.push_back(max(view.now, task.last_release + task.period));
        if (i != view.subject && task.remaining_wcet.sign() > 0) {
            const Rational d = task.last_release + task.deadline;
            if (d >= view.now) candidates.push_back(d);
        }
    }

    // Direct evaluation of the availability bound at one instant.
    const auto bound_at = [&](const Rational& tp) {
        long arrivals = 0;
        long still_active = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& task = view.tasks[i];
            if (!(tp < task.last_release + task.period)) ++arrivals;
            if (i == view.subject) continue;
            const bool pending = task.remaining_wcet > Rational(0);
            const bool before_deadline = tp < task.last_release + task.deadline;
            if (pending && !(tp < view.now) && before_deadline) ++still_active;
        }
        return static_cast<long>(view.m) - still_active - arrivals;
    };

    std::optional<Rational> best;
    for (const auto& c : candidates)
        if (bound_at(c) <= 0 && (!best || c < *best)) best = c;
    return best;
}

bool worst_case_feasibility(const TaskSystem& ts, int m, const Rational& s, int k_opt,
                            const Rational& max_hyperperiod) {
    const Rational h = hyperperiod(ts);
    if (h > max_hyperperiod)
        throw ModelError("hyperperiod " + h.str() + " exceeds the budget " + max_hyperperiod.str());
    const PlatformSpec platform = PlatformSpec::continuous_platform(m, s, PowerModel::preset("cubic"));
    const auto releases = periodic_releases(ts, h);
    const Trace trace = simulate(ts, platform, uniform_policy(s, k_opt), releases, h);
    return count_misses(trace) == 0 && validate_trace(trace, ts, platform, k_opt).misses.empty();
}

}  // namespace dvs
