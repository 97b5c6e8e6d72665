#include "dvs/mote.hpp"

#include <algorithm>
#include <stdexcept>

namespace dvs {

long pi(const ContentionView& view, const Rational& t_prime) {
    long available = view.m;
    for (std::size_t i = 0; i < view.tasks.size(); ++i) {
        const auto& task = view.tasks[i];
        if (i != view.subject && task.remaining_wcet.sign() > 0 && view.now <= t_prime &&
            t_prime < task.last_release + task.deadline)
            --available;
        if (t_prime >= task.last_release + task.period) --available;
    }
    return available;
}

std::optional<Rational> next_contention(const ContentionView& view) {
    const std::size_t n = view.tasks.size();
    if (static_cast<std::size_t>(view.m) > n) return std::nullopt;

    struct Change {
        Rational at;
        int delta;
    };
    std::vector<Change> changes;
    changes.reserve(2 * n + 1);
    changes.push_back({view.now, 0});  // the bound is tested at `now` even without a change there
    long level = view.m;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& task = view.tasks[i];
        changes.push_back({max(view.now, task.last_release + task.period), -1});
        if (i != view.subject && task.remaining_wcet.sign() > 0) {
            --level;
            changes.push_back({max(view.now, task.last_release + task.deadline), +1});
        }
    }
    std::stable_sort(changes.begin(), changes.end(), [](const Change& a, const Change& b) { return a.at < b.at; });

    // Every change sharing a timestamp lands before the bound is tested.
    for (std::size_t i = 0; i < changes.size();) {
        std::size_t j = i;
        while (j < changes.size() && changes[j].at == changes[i].at) level += changes[j++].delta;
        if (level <= 0) return changes[i].at;
        i = j;
    }
    // Unreachable for m <= n: all n arrival decrements bring the level to m - n.
    return changes.back().at;
}

Rational initial_speed(std::size_t rank, const OfflineResult& offline, const TaskSystem& ts,
                       const PlatformSpec& platform) {
    const Rational raw = offline.is_privileged(rank) ? ts.density(rank)
                                                     : edfk_shared_speed(ts, platform.m, offline.k_opt);
    return platform.admissible(raw);
}

Rational reduce_speed(const Rational& current, const Rational& remaining_wcet, const Rational& abs_deadline,
                      const Rational& now, const std::optional<Rational>& t_next, const PlatformSpec& platform) {
    const Rational end = t_next ? min(abs_deadline, *t_next) : abs_deadline;
    const Rational window = end - now;
    if (window.sign() <= 0)
        throw std::invalid_argument("reduce_speed: empty window at t=" + now.str() + " (ends " + end.str() + ")");
    return platform.admissible(min(current, remaining_wcet / window));
}

}  // namespace dvs
