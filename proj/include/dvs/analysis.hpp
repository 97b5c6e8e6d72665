#pragma once

#include <cstddef>

#include "dvs/rational.hpp"
#include "dvs/task_model.hpp"

namespace dvs {

/// Result of the off-line EDF^(k) speed sweep.
struct OfflineResult {
    Rational s_ol;            ///< speed in (0, 1], clamped to [max(s_min, lambda_1), 1]
    int k_opt = 1;            ///< EDF^(k) parameter; ranks [0, k_opt-1) are privileged
    Rational sweep_minimum;   ///< smallest edfk_speed seen during the sweep, unclamped

    /// Number of privileged (top-priority) tasks.
    std::size_t privileged_count() const { return static_cast<std::size_t>(k_opt - 1); }
    bool is_privileged(std::size_t rank) const { return rank + 1 < static_cast<std::size_t>(k_opt); }
};

/// Global EDF speed bound lambda_max + (lambda_sum - lambda_max) / m.
/// Not clamped to 1. Requires a non-empty system and m >= 1.
Rational edf_min_speed(const TaskSystem& ts, int m);

/// EDF^(k) speed bound max{lambda_1, lambda_k + lambda_sum(ranks >= k) / (m-k+1)}.
/// Throws std::out_of_range unless 1 <= k <= min(m, n).
Rational edfk_speed(const TaskSystem& ts, int m, int k);

/// The non-privileged part of edfk_speed, without the max against lambda_1.
Rational edfk_shared_speed(const TaskSystem& ts, int m, int k);

/// Sweeps k = 1..min(m, n), stops once the floor max(s_min, lambda_1) is
/// reached, and returns the minimizing k (smallest on ties). Throws
/// InfeasibleError when every swept bound exceeds 1.
OfflineResult offline_speed(const TaskSystem& ts, int m, const Rational& s_min);

/// Processors needed to schedule the system at speed 1:
/// min{n, ceil((lambda_sum - lambda_max) / (1 - lambda_max))}, at least 1;
/// n when lambda_max = 1.
int required_processors(const TaskSystem& ts);

}  // namespace dvs
