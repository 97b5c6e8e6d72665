#include "dvs/sim.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <queue>
#include <stdexcept>
#include <utility>

#include "dvs/errors.hpp"
#include "dvs/mote.hpp"

namespace dvs {

std::string to_string(Method m) {
    switch (m) {
        case Method::Smax: return "SMAX";
        case Method::OfflineEdf: return "OFFLINE_EDF";
        case Method::OfflineEdfk: return "OFFLINE_EDFK";
        case Method::Mote: return "MOTE";
        case Method::UniformSpeed: return "UNIFORM";
    }
    return "?";
}

Method parse_method(const std::string& s) {
    std::string u;
    for (char c : s) u.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    std::replace(u.begin(), u.end(), '-', '_');
    if (u == "SMAX") return Method::Smax;
    if (u == "OFFLINE_EDF") return Method::OfflineEdf;
    if (u == "OFFLINE_EDFK") return Method::OfflineEdfk;
    if (u == "MOTE") return Method::Mote;
    if (u == "UNIFORM") return Method::UniformSpeed;
    throw ConfigError("unknown method '" + s + "'");
}

std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::Release: return "release";
        case EventKind::Dispatch: return "dispatch";
        case EventKind::Preempt: return "preempt";
        case EventKind::Complete: return "complete";
        case EventKind::SpeedSet: return "speed-set";
        case EventKind::DeadlineMiss: return "deadline-miss";
    }
    return "?";
}

EventKind parse_event_kind(const std::string& s) {
    for (auto k : {EventKind::Release, EventKind::Dispatch, EventKind::Preempt, EventKind::Complete,
                   EventKind::SpeedSet, EventKind::DeadlineMiss})
        if (to_string(k) == s) return k;
    throw MalformedTrace("unknown event kind '" + s + "'");
}

PriorityKey priority_key(std::size_t task_rank, std::int64_t job_index, const Rational& abs_deadline, int k_opt) {
    PriorityKey key;
    key.task = task_rank;
    key.job = job_index;
    if (task_rank + 1 < static_cast<std::size_t>(k_opt)) {
        key.cls = 0;
        key.key = Rational(0);
    } else {
        key.cls = 1;
        key.key = abs_deadline;
    }
    return key;
}

std::vector<JobRelease> periodic_releases(const TaskSystem& ts, const Rational& horizon, const AcetFn& acet) {
    std::vector<JobRelease> out;
    for (std::size_t r = 0; r < ts.size(); ++r) {
        std::int64_t j = 0;
        for (Rational at(0); at < horizon; at += ts[r].min_interarrival, ++j)
            out.push_back({r, j, at, acet(r, j)});
    }
    std::stable_sort(out.begin(), out.end(), [](const JobRelease& a, const JobRelease& b) {
        return a.arrival != b.arrival ? a.arrival < b.arrival : a.task < b.task;
    });
    return out;
}

std::vector<JobRelease> periodic_releases(const TaskSystem& ts, const Rational& horizon) {
    return periodic_releases(ts, horizon, [&](std::size_t r, std::int64_t) { return ts[r].wcet; });
}

std::vector<JobRelease> check_releases(const TaskSystem& ts, std::vector<JobRelease> releases) {
    std::stable_sort(releases.begin(), releases.end(), [](const JobRelease& a, const JobRelease& b) {
        return a.arrival != b.arrival ? a.arrival < b.arrival : a.task < b.task;
    });
    std::vector<std::int64_t> next_job(ts.size(), 0);
    std::vector<std::optional<Rational>> last(ts.size());
    for (const auto& rel : releases) {
        const auto where = [&] {
            return " (task rank " + std::to_string(rel.task) + ", job " + std::to_string(rel.job) + ")";
        };
        if (rel.task >= ts.size()) throw MalformedTrace("release of unknown task" + where());
        if (rel.arrival.sign() < 0) throw MalformedTrace("negative arrival" + where());
        if (rel.acet.sign() <= 0 || rel.acet > ts[rel.task].wcet)
            throw MalformedTrace("acet outside (0, C]" + where());
        if (rel.job != next_job[rel.task]) throw MalformedTrace("job indices not consecutive" + where());
        if (last[rel.task] && rel.arrival - *last[rel.task] < ts[rel.task].min_interarrival)
            throw MalformedTrace("inter-arrival shorter than T" + where());
        last[rel.task] = rel.arrival;
        ++next_job[rel.task];
    }
    return releases;
}

std::vector<SpeedSegment> speed_segments(const Trace& trace) {
    struct Open {
        int cpu;
        Rational start;
        Rational speed;
    };
    std::map<std::pair<std::size_t, std::int64_t>, Open> open;
    std::vector<SpeedSegment> out;
    const auto close = [&](const TraceEvent& ev) {
        const auto it = open.find({ev.task, ev.job});
        if (it == open.end() || it->second.cpu != ev.cpu)
            throw MalformedTrace(to_string(ev.kind) + " of a job not running on cpu " + std::to_string(ev.cpu) +
                                 " at t=" + ev.time.str());
        if (it->second.start < ev.time) out.push_back({ev.cpu, it->second.start, ev.time, it->second.speed});
        open.erase(it);
    };
    for (const auto& ev : trace.events) {
        switch (ev.kind) {
            case EventKind::Dispatch:
                if (!ev.speed) throw MalformedTrace("dispatch without speed at t=" + ev.time.str());
                if (!open.emplace(std::pair{ev.task, ev.job}, Open{ev.cpu, ev.time, *ev.speed}).second)
                    throw MalformedTrace("dispatch of a running job at t=" + ev.time.str());
                break;
            case EventKind::Preempt:
            case EventKind::Complete: close(ev); break;
            default: break;
        }
    }
    for (const auto& [id, o] : open)
        if (o.start < trace.horizon) out.push_back({o.cpu, o.start, trace.horizon, o.speed});
    return out;
}

Policy uniform_policy(const Rational& speed, int k_opt) {
    Policy p;
    p.method = Method::UniformSpeed;
    p.k_opt = k_opt;
    p.uniform_speed = speed;
    return p;
}

Policy make_policy(Method method, const TaskSystem& ts, const PlatformSpec& platform, PolicyOptions opts) {
    Policy p;
    p.method = method;
    p.mote_privileged = opts.mote_privileged;
    switch (method) {
        case Method::Smax:
            p.uniform_speed = Rational(1);
            break;
        case Method::OfflineEdf: {
            Rational s = edf_min_speed(ts, platform.m);
            if (s > Rational(1)) {
                // With one CPU per task every job starts at release, so speed 1 suffices.
                if (static_cast<std::size_t>(platform.m) < ts.size())
                    throw InfeasibleError("EDF speed bound " + s.str() + " exceeds 1 on m=" +
                                          std::to_string(platform.m));
                s = Rational(1);
            }
            p.uniform_speed = platform.admissible(s);
            break;
        }
        case Method::OfflineEdfk:
            p.offline = offline_speed(ts, platform.m, platform.s_min);
            p.k_opt = p.offline.k_opt;
            p.uniform_speed = platform.admissible(p.offline.s_ol);
            break;
        case Method::Mote:
            p.offline = offline_speed(ts, platform.m, platform.s_min);
            p.k_opt = p.offline.k_opt;
            p.initial_speeds.reserve(ts.size());
            for (std::size_t r = 0; r < ts.size(); ++r)
                p.initial_speeds.push_back(initial_speed(r, p.offline, ts, platform));
            break;
        case Method::UniformSpeed:
            throw std::invalid_argument("use uniform_policy() for explicit uniform speeds");
    }
    return p;
}

namespace {

struct JobState {
    std::size_t task = 0;
    std::int64_t job = 0;
    Rational deadline;
    Rational acet;
    Rational wcet;
    Rational executed{0};
    Rational speed;
    PriorityKey key;
    int cpu = -1;
    bool done = false;
};

class Simulator {
public:
    Simulator(const TaskSystem& ts, const PlatformSpec& platform, const Policy& policy, const Rational& horizon)
        : ts_(ts), platform_(platform), policy_(policy), running_(static_cast<std::size_t>(platform.m)),
          last_release_(ts.size()), latest_job_(ts.size()) {
        trace_.horizon = horizon;
        trace_.m = platform.m;
        trace_.k_opt = policy.k_opt;
        trace_.method = policy.method;
        trace_.s_min = platform.s_min;
        for (std::size_t r = 0; r < ts.size(); ++r) last_release_[r] = -ts[r].min_interarrival;
    }

    Trace run(std::span<const JobRelease> releases) {
        jobs_.reserve(releases.size());
        std::size_t next = 0;
        const Rational& horizon = trace_.horizon;
        while (true) {
            Rational t = horizon;
            if (next < releases.size()) t = min(t, releases[next].arrival);
            for (const auto& slot : running_)
                if (slot) t = min(t, now_ + (jobs_[*slot].acet - jobs_[*slot].executed) / jobs_[*slot].speed);
            if (!deadlines_.empty()) t = min(t, deadlines_.top().first);
            advance(t);

            complete_finished();
            check_deadlines();
            if (now_ >= horizon) break;
            while (next < releases.size() && releases[next].arrival == now_) release(releases[next++]);
            dispatch();
        }
        return std::move(trace_);
    }

private:
    using DeadlineEntry = std::pair<Rational, std::size_t>;
    struct Later {
        bool operator()(const DeadlineEntry& a, const DeadlineEntry& b) const { return b.first < a.first; }
    };

    void emit(EventKind kind, const JobState& job, int cpu = -1, std::optional<Rational> speed = std::nullopt) {
        TraceEvent ev;
        ev.time = now_;
        ev.kind = kind;
        ev.task = job.task;
        ev.job = job.job;
        ev.cpu = cpu;
        ev.speed = std::move(speed);
        trace_.events.push_back(std::move(ev));
    }

    void advance(const Rational& t) {
        const Rational dt = t - now_;
        if (dt.sign() > 0)
            for (const auto& slot : running_)
                if (slot) jobs_[*slot].executed += jobs_[*slot].speed * dt;
        now_ = t;
    }

    void complete_finished() {
        for (std::size_t cpu = 0; cpu < running_.size(); ++cpu) {
            if (!running_[cpu]) continue;
            auto& job = jobs_[*running_[cpu]];
            if (job.executed < job.acet) continue;
            job.done = true;
            job.cpu = -1;
            emit(EventKind::Complete, job, static_cast<int>(cpu));
            running_[cpu].reset();
        }
    }

    void check_deadlines() {
        while (!deadlines_.empty() && deadlines_.top().first <= now_) {
            const auto& job = jobs_[deadlines_.top().second];
            if (!job.done) emit(EventKind::DeadlineMiss, job, job.cpu);
            deadlines_.pop();
        }
    }

    void release(const JobRelease& rel) {
        const auto& task = ts_[rel.task];
        JobState job;
        job.task = rel.task;
        job.job = rel.job;
        job.deadline = rel.arrival + task.deadline;
        job.acet = rel.acet;
        job.wcet = task.wcet;
        job.key = priority_key(rel.task, rel.job, job.deadline, policy_.k_opt);
        job.speed = policy_.method == Method::Mote ? policy_.initial_speeds.at(rel.task) : policy_.uniform_speed;

        const std::size_t id = jobs_.size();
        jobs_.push_back(std::move(job));
        last_release_[rel.task] = rel.arrival;
        latest_job_[rel.task] = id;
        deadlines_.emplace(jobs_[id].deadline, id);
        ready_.emplace(jobs_[id].key, id);

        emit(EventKind::Release, jobs_[id]);
        trace_.events.back().acet = rel.acet;
        emit(EventKind::SpeedSet, jobs_[id], -1, jobs_[id].speed);
    }

    ContentionView view_for(std::size_t subject) const {
        ContentionView view;
        view.now = now_;
        view.m = platform_.m;
        view.subject = subject;
        view.tasks.reserve(ts_.size());
        for (std::size_t r = 0; r < ts_.size(); ++r) {
            TaskContention tc{last_release_[r], ts_[r].min_interarrival, ts_[r].deadline, Rational(0)};
            if (latest_job_[r]) {
                const auto& job = jobs_[*latest_job_[r]];
                if (!job.done) tc.remaining_wcet = job.wcet - job.executed;
            }
            view.tasks.push_back(std::move(tc));
        }
        return view;
    }

    int idle_cpu() const {
        for (std::size_t cpu = 0; cpu < running_.size(); ++cpu)
            if (!running_[cpu]) return static_cast<int>(cpu);
        return -1;
    }

    // Lowest-priority running job; ties go to the highest CPU index.
    int victim_cpu() const {
        int victim = -1;
        for (std::size_t cpu = 0; cpu < running_.size(); ++cpu)
            if (victim < 0 || !(jobs_[*running_[cpu]].key < jobs_[*running_[static_cast<std::size_t>(victim)]].key))
                victim = static_cast<int>(cpu);
        return victim;
    }

    void dispatch() {
        while (!ready_.empty()) {
            const auto head = ready_.begin();
            const std::size_t id = head->second;
            int cpu = idle_cpu();
            if (cpu < 0) {
                cpu = victim_cpu();
                const std::size_t victim = *running_[static_cast<std::size_t>(cpu)];
                if (!(jobs_[id].key < jobs_[victim].key)) break;
                jobs_[victim].cpu = -1;
                emit(EventKind::Preempt, jobs_[victim], cpu);
                running_[static_cast<std::size_t>(cpu)].reset();
                ready_.emplace(jobs_[victim].key, victim);
            }
            ready_.erase(head);
            allocate(id, cpu);
        }
    }

    void allocate(std::size_t id, int cpu) {
        auto& job = jobs_[id];
        std::optional<std::optional<Rational>> t_next;
        const bool privileged = job.key.cls == 0;
        if (policy_.method == Method::Mote && (policy_.mote_privileged || !privileged)) {
            const auto tn = next_contention(view_for(job.task));
            t_next = tn;
            if ((!tn || *tn > now_) && job.deadline > now_) {
                Rational reduced = reduce_speed(job.speed, job.wcet - job.executed, job.deadline, now_, tn, platform_);
                if (reduced != job.speed) {
                    job.speed = std::move(reduced);
                    emit(EventKind::SpeedSet, job, -1, job.speed);
                }
            }
        }
        job.cpu = cpu;
        running_[static_cast<std::size_t>(cpu)] = id;
        emit(EventKind::Dispatch, job, cpu, job.speed);
        trace_.events.back().t_next = std::move(t_next);
    }

    const TaskSystem& ts_;
    const PlatformSpec& platform_;
    const Policy& policy_;
    Trace trace_;
    Rational now_{0};
    std::vector<JobState> jobs_;
    std::vector<std::optional<std::size_t>> running_;
    std::map<PriorityKey, std::size_t> ready_;
    std::priority_queue<DeadlineEntry, std::vector<DeadlineEntry>, Later> deadlines_;
    std::vector<Rational> last_release_;
    std::vector<std::optional<std::size_t>> latest_job_;
};

}  // namespace

Trace simulate(const TaskSystem& ts, const PlatformSpec& platform, const Policy& policy,
               std::span<const JobRelease> releases, const Rational& horizon) {
    platform.check();
    if (policy.method == Method::Mote && policy.initial_speeds.size() != ts.size())
        throw std::invalid_argument("MOTE policy without per-task initial speeds");
    for (std::size_t i = 1; i < releases.size(); ++i)
        if (releases[i].arrival < releases[i - 1].arrival)
            throw MalformedTrace("releases are not sorted by arrival");
    return Simulator(ts, platform, policy, horizon).run(releases);
}

std::size_t count_misses(const Trace& trace) {
    return static_cast<std::size_t>(std::count_if(trace.events.begin(), trace.events.end(), [](const TraceEvent& e) {
        return e.kind == EventKind::DeadlineMiss;
    }));
}

}  // namespace dvs
