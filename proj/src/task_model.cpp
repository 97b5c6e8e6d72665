#include "dvs/task_model.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "dvs/errors.hpp"

namespace dvs {

Rational density(const TaskSpec& task) { return task.wcet / task.deadline; }

void check_task(const TaskSpec& task) {
    const auto fail = [&](const char* what) {
        throw ModelError("task " + std::to_string(task.id) + ": " + what + " (C=" + task.wcet.str() +
                         ", D=" + task.deadline.str() + ", T=" + task.min_interarrival.str() + ")");
    };
    if (task.wcet.sign() <= 0) fail("wcet must be positive");
    if (task.wcet > task.deadline) fail("wcet exceeds deadline");
    if (task.deadline > task.min_interarrival) fail("deadline exceeds period");
}

TaskSystem TaskSystem::normalize(std::vector<TaskSpec> tasks) {
    std::set<int> ids;
    for (const auto& t : tasks) {
        check_task(t);
        if (!ids.insert(t.id).second) throw ModelError("duplicate task id " + std::to_string(t.id));
    }

    std::vector<Rational> dens;
    dens.reserve(tasks.size());
    for (const auto& t : tasks) dens.push_back(dvs::density(t));
    std::vector<std::size_t> order(tasks.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (dens[a] != dens[b]) return dens[a] > dens[b];
        return tasks[a].id < tasks[b].id;
    });

    TaskSystem ts;
    ts.tasks_.reserve(tasks.size());
    ts.densities_.reserve(tasks.size());
    for (std::size_t idx : order) {
        ts.tasks_.push_back(std::move(tasks[idx]));
        ts.densities_.push_back(std::move(dens[idx]));
    }
    ts.suffix_.assign(ts.tasks_.size() + 1, Rational(0));
    for (std::size_t r = ts.tasks_.size(); r-- > 0;) ts.suffix_[r] = ts.suffix_[r + 1] + ts.densities_[r];
    return ts;
}

Rational TaskSystem::max_density() const { return densities_.empty() ? Rational(0) : densities_.front(); }

const Rational& TaskSystem::suffix_density_sum(std::size_t from) const {
    if (from > tasks_.size())
        throw std::out_of_range("suffix index " + std::to_string(from) + " outside [0, " +
                                std::to_string(tasks_.size()) + "]");
    return suffix_[from];
}

std::size_t TaskSystem::rank_of(int id) const {
    for (std::size_t r = 0; r < tasks_.size(); ++r)
        if (tasks_[r].id == id) return r;
    throw std::out_of_range("no task with id " + std::to_string(id));
}

TaskSystem TaskSystem::with_inflated_wcet(const Rational& amount) const {
    std::vector<TaskSpec> copy(tasks_.begin(), tasks_.end());
    for (auto& t : copy) t.wcet += amount;
    return normalize(std::move(copy));
}

Rational hyperperiod(const TaskSystem& ts) {
    if (ts.empty()) throw ModelError("hyperperiod of an empty task system");
    Rational h = ts[0].min_interarrival;
    for (std::size_t r = 1; r < ts.size(); ++r) h = lcm(h, ts[r].min_interarrival);
    return h;
}

}  // namespace dvs
