#pragma once

#include <random>

#include "dvs/mote.hpp"

namespace testing {

/// Random contention snapshot on a coarse time grid, so instants coincide
/// often. Some tasks have an arrival already due before `now`, some are idle,
/// and m ranges past n.
inline dvs::ContentionView random_view(std::mt19937_64& rng, int max_n = 8) {
    using dvs::Rational;
    std::uniform_int_distribution<int> n_dist(1, max_n);
    const int n = n_dist(rng);
    std::uniform_int_distribution<int> m_dist(1, n + 2);
    std::uniform_int_distribution<long> now_dist(0, 20);
    std::uniform_int_distribution<long> t_dist(1, 12);
    std::uniform_int_distribution<int> coin(0, 3);

    dvs::ContentionView view;
    view.now = Rational(now_dist(rng), 2);
    view.m = m_dist(rng);
    view.subject = std::uniform_int_distribution<std::size_t>(0, static_cast<std::size_t>(n - 1))(rng);
    for (int i = 0; i < n; ++i) {
        const Rational period(t_dist(rng), 2);
        const Rational deadline = period * Rational(std::uniform_int_distribution<long>(1, 4)(rng), 4);
        Rational back(std::uniform_int_distribution<long>(0, 30)(rng), 2);
        if (coin(rng) == 0) back = back * Rational(2);  // often past its next arrival
        Rational last = view.now - back;
        if (coin(rng) == 0) last = -period;  // never released
        Rational remaining(0);
        if (coin(rng) != 0 && last + deadline > view.now) remaining = Rational(std::uniform_int_distribution<long>(1, 6)(rng), 3);
        view.tasks.push_back({last, period, deadline, remaining});
    }
    view.tasks[view.subject].remaining_wcet = Rational(1);
    return view;
}

}  // namespace testing
