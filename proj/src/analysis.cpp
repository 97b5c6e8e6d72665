#include "dvs/analysis.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "dvs/errors.hpp"

namespace dvs {

Rational edf_min_speed(const TaskSystem& ts, int m) {
    if (ts.empty()) throw ModelError("edf_min_speed: empty task system");
    if (m < 1) throw std::out_of_range("edf_min_speed: m must be positive");
    const Rational lmax = ts.max_density();
    return lmax + (ts.total_density() - lmax) / Rational(m);
}

Rational edfk_shared_speed(const TaskSystem& ts, int m, int k) {
    const int n = static_cast<int>(ts.size());
    if (k < 1 || k > std::min(m, n))
        throw std::out_of_range("k=" + std::to_string(k) + " outside [1, min(m, n)]");
    const auto rank = static_cast<std::size_t>(k - 1);
    return ts.density(rank) + ts.suffix_density_sum(rank + 1) / Rational(m - k + 1);
}

Rational edfk_speed(const TaskSystem& ts, int m, int k) {
    return max(ts.max_density(), edfk_shared_speed(ts, m, k));
}

OfflineResult offline_speed(const TaskSystem& ts, int m, const Rational& s_min) {
    if (ts.empty()) throw ModelError("offline_speed: empty task system");
    if (m < 1) throw std::out_of_range("offline_speed: m must be positive");
    if (s_min.sign() <= 0 || s_min > Rational(1)) throw ModelError("s_min must lie in (0, 1]");

    const Rational floor_speed = max(s_min, ts.max_density());
    const int k_max = std::min(m, static_cast<int>(ts.size()));

    OfflineResult res;
    res.k_opt = 1;
    res.sweep_minimum = edfk_speed(ts, m, 1);
    for (int k = 2; k <= k_max && res.sweep_minimum > floor_speed; ++k) {
        Rational s = edfk_speed(ts, m, k);
        if (s < res.sweep_minimum) {
            res.sweep_minimum = std::move(s);
            res.k_opt = k;
        }
    }
    if (res.sweep_minimum > Rational(1))
        throw InfeasibleError("no EDF^(k) speed <= 1 on m=" + std::to_string(m) +
                              " processors (best " + res.sweep_minimum.str() + ")");
    res.s_ol = max(res.sweep_minimum, floor_speed);
    return res;
}

int required_processors(const TaskSystem& ts) {
    if (ts.empty()) throw ModelError("required_processors: empty task system");
    const int n = static_cast<int>(ts.size());
    const Rational lmax = ts.max_density();
    if (lmax == Rational(1)) return n;
    const mpz_class q = ceil((ts.total_density() - lmax) / (Rational(1) - lmax));
    const long bounded = q < n ? q.get_si() : n;
    return static_cast<int>(std::max(1L, bounded));
}

}  // namespace dvs
