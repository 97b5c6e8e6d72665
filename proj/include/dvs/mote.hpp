#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dvs/analysis.hpp"
#include "dvs/power.hpp"
#include "dvs/rational.hpp"
#include "dvs/task_model.hpp"

namespace dvs {

/// Per-task state visible to the contention bound at a dispatch instant.
struct TaskContention {
    Rational last_release;      ///< B_i(t); -T_i before the first release
    Rational period;            ///< T_i
    Rational deadline;          ///< D_i (relative)
    Rational remaining_wcet;    ///< omega at speed 1; zero when no job is pending
};

/// Snapshot taken when `subject`'s job is allocated a CPU at time `now`.
struct ContentionView {
    Rational now;
    int m = 1;
    std::size_t subject = 0;
    std::vector<TaskContention> tasks;
};

/// Lower bound on free CPUs at `t_prime` >= now ignoring the subject job:
/// m - #{i != subject : omega_i > 0, now <= t' < B_i + D_i} - #{i : t' >= B_i + T_i}.
/// May be negative.
long pi(const ContentionView& view, const Rational& t_prime);

/// Earliest t' >= now with pi <= 0; std::nullopt (+infinity) when m > n.
/// O(n log n): one sort of at most 2n candidate instants.
std::optional<Rational> next_contention(const ContentionView& view);

/// Speed assigned to a job of `rank` on its first allocation: lambda_i for
/// privileged ranks, the EDF^(k_opt) shared speed otherwise; then made
/// admissible on the platform (s_min clamp, upward quantization).
Rational initial_speed(std::size_t rank, const OfflineResult& offline, const TaskSystem& ts,
                       const PlatformSpec& platform);

/// max{s_min, min{current, remaining_wcet / (min{abs_deadline, t_next} - now)}},
/// quantized upward in discrete mode. `t_next` empty means +infinity. Throws
/// std::invalid_argument if the window is not positive.
Rational reduce_speed(const Rational& current, const Rational& remaining_wcet, const Rational& abs_deadline,
                      const Rational& now, const std::optional<Rational>& t_next, const PlatformSpec& platform);

}  // namespace dvs
