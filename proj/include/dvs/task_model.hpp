#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dvs/rational.hpp"

namespace dvs {

/// Sporadic constrained-deadline task. `wcet` is expressed in execution
/// units at s_max = 1; 0 < wcet <= deadline <= min_interarrival.
struct TaskSpec {
    int id = 0;
    Rational wcet;
    Rational deadline;
    Rational min_interarrival;
};

/// lambda = C / D.
Rational density(const TaskSpec& task);

/// Throws ModelError naming the task when 0 < C <= D <= T does not hold.
void check_task(const TaskSpec& task);

/// Immutable task system sorted by non-increasing density (ties: ascending
/// id). A task's position in this order is its "rank"; ranks are 0-based in
/// the API, so rank r corresponds to index r+1 in the usual 1-based notation.
class TaskSystem {
public:
    TaskSystem() = default;

    /// Validates every task and sorts. Throws ModelError on a violated
    /// invariant or a duplicate id.
    static TaskSystem normalize(std::vector<TaskSpec> tasks);

    std::size_t size() const noexcept { return tasks_.size(); }
    bool empty() const noexcept { return tasks_.empty(); }
    const TaskSpec& operator[](std::size_t rank) const { return tasks_[rank]; }
    std::span<const TaskSpec> tasks() const noexcept { return tasks_; }

    const Rational& density(std::size_t rank) const { return densities_[rank]; }
    /// lambda_max; zero for an empty system.
    Rational max_density() const;
    Rational total_density() const { return suffix_[0]; }

    /// Sum of densities of ranks [from, n). `from` must be in [0, n];
    /// from == n yields zero. Throws std::out_of_range otherwise.
    const Rational& suffix_density_sum(std::size_t from) const;

    /// Rank of the task with the given external id, or throws std::out_of_range.
    std::size_t rank_of(int id) const;

    /// Returns a copy with `amount` added to every WCET and re-normalized.
    /// Throws ModelError if any task ends up with C > D.
    TaskSystem with_inflated_wcet(const Rational& amount) const;

private:
    std::vector<TaskSpec> tasks_;
    std::vector<Rational> densities_;
    std::vector<Rational> suffix_{Rational(0)};
};

/// lcm of all periods. Throws ModelError on an empty system.
Rational hyperperiod(const TaskSystem& ts);

}  // namespace dvs
