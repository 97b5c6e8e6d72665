#include "dvs/workload.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

#include "dvs/errors.hpp"

namespace dvs {

void GenParams::check() const {
    if (n_min < 1 || n_max < n_min) throw ModelError("n range must satisfy 1 <= n_min <= n_max");
    if (lambda_sum_min.sign() <= 0 || lambda_sum_max < lambda_sum_min)
        throw ModelError("lambda_sum range must be a non-empty interval of positive values");
    if (period_pool.empty()) throw ModelError("period pool is empty");
    for (const auto& p : period_pool)
        if (p.sign() <= 0) throw ModelError("period pool holds a non-positive period");
    const auto ratio_ok = [](const Rational& lo, const Rational& hi) {
        return lo.sign() > 0 && lo <= hi && hi <= Rational(1);
    };
    if (!ratio_ok(deadline_ratio_min, deadline_ratio_max))
        throw ModelError("deadline ratio range must lie in (0, 1]");
    if (!ratio_ok(acet_ratio_min, acet_ratio_max)) throw ModelError("acet ratio range must lie in (0, 1]");
}

Rational GenParams::pool_hyperperiod() const {
    if (period_pool.empty()) throw ModelError("period pool is empty");
    Rational h = period_pool.front();
    for (const auto& p : period_pool) h = lcm(h, p);
    return h;
}

std::vector<double> rand_fixed_sum(int n, double total, std::mt19937_64& rng) {
    if (n < 1 || total < 0 || total > n) throw ModelError("rand_fixed_sum: need 0 <= total <= n");
    if (n == 1) return {total};
    const auto un = static_cast<std::size_t>(n);
    const double k = std::min(std::floor(total), static_cast<double>(n - 1));

    std::vector<double> s1(un), s2(un);
    for (std::size_t c = 0; c < un; ++c) {
        s1[c] = total - (k - static_cast<double>(c));
        s2[c] = (k + static_cast<double>(n) - static_cast<double>(c)) - total;
    }
    // w[i][c]: scaled simplex volumes; t[i][c]: transition probabilities.
    std::vector<std::vector<double>> w(un, std::vector<double>(un + 1, 0.0));
    std::vector<std::vector<double>> t(un - 1, std::vector<double>(un, 0.0));
    w[0][1] = DBL_MAX;
    for (std::size_t i = 2; i <= un; ++i) {
        const double di = static_cast<double>(i);
        for (std::size_t c = 0; c < i; ++c) {
            const double tmp1 = w[i - 2][c + 1] * s1[c] / di;
            const double tmp2 = w[i - 2][c] * s2[un - i + c] / di;
            w[i - 1][c + 1] = tmp1 + tmp2;
            const double tmp3 = w[i - 1][c + 1] + DBL_TRUE_MIN;
            t[i - 2][c] = s2[un - i + c] > s1[c] ? tmp2 / tmp3 : 1.0 - tmp1 / tmp3;
        }
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> x(un);
    double s = total;
    auto j = static_cast<std::size_t>(k) + 1;  // 1-based column
    double sm = 0.0;
    double pr = 1.0;
    for (std::size_t i = un - 1; i >= 1; --i) {
        const bool e = unit(rng) <= t[i - 1][j - 1];
        const double sx = std::pow(unit(rng), 1.0 / static_cast<double>(i));
        sm += (1.0 - sx) * pr * s / static_cast<double>(i + 1);
        pr *= sx;
        x[un - i - 1] = sm + pr * (e ? 1.0 : 0.0);
        if (e) {
            s -= 1.0;
            --j;
        }
    }
    x[un - 1] = sm + pr * s;
    std::shuffle(x.begin(), x.end(), rng);
    return x;
}

namespace {

// Integer units summing to `total_units`, each in [1, cap], proportional to
// `weights` (largest-remainder rounding).
std::vector<long> apportion(const std::vector<double>& weights, long total_units, long cap) {
    const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
    const std::size_t n = weights.size();
    std::vector<long> units(n);
    std::vector<std::pair<double, std::size_t>> remainders;
    long assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double exact = wsum > 0 ? weights[i] / wsum * static_cast<double>(total_units)
                                      : static_cast<double>(total_units) / static_cast<double>(n);
        units[i] = static_cast<long>(std::floor(exact));
        assigned += units[i];
        remainders.emplace_back(exact - std::floor(exact), i);
    }
    std::sort(remainders.begin(), remainders.end(),
              [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
    for (std::size_t r = 0; assigned < total_units; r = (r + 1) % n, ++assigned) ++units[remainders[r].second];

    // Enforce the bounds by moving single units between extremes.
    while (true) {
        const auto lo = std::min_element(units.begin(), units.end());
        const auto hi = std::max_element(units.begin(), units.end());
        if (*lo < 1) {
            --*hi;
            ++*lo;
        } else if (*hi > cap) {
            --*hi;
            ++*lo;
        } else {
            break;
        }
    }
    return units;
}

Rational uniform_on_grid(const Rational& lo, const Rational& hi, long grid, std::mt19937_64& rng) {
    const mpz_class lo_units = ceil(lo * Rational(grid));
    const mpz_class hi_units = floor(hi * Rational(grid));
    if (hi_units < lo_units) throw ModelError("interval [" + lo.str() + ", " + hi.str() + "] has no grid point");
    std::uniform_int_distribution<long> pick(lo_units.get_si(), hi_units.get_si());
    return Rational(pick(rng), grid);
}

}  // namespace

TaskSystem generate(const GenParams& params, std::mt19937_64& rng) {
    params.check();
    const int n = std::uniform_int_distribution<int>(params.n_min, params.n_max)(rng);

    const long cap = kDensityGrid - 1;
    const Rational reachable(static_cast<long>(n) * cap, kDensityGrid);
    if (params.lambda_sum_min > reachable)
        throw ModelError("lambda_sum >= " + params.lambda_sum_min.str() + " is unattainable with n=" +
                         std::to_string(n) + " densities below 1");
    const Rational target = uniform_on_grid(params.lambda_sum_min, min(params.lambda_sum_max, reachable),
                                            kDensityGrid, rng);
    const long target_units = (target * Rational(kDensityGrid)).value().get_num().get_si();

    const auto shares = rand_fixed_sum(n, target.to_double(), rng);
    const auto units = apportion(shares, target_units, cap);

    std::uniform_int_distribution<std::size_t> pool_pick(0, params.period_pool.size() - 1);
    std::vector<TaskSpec> tasks;
    tasks.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        TaskSpec t;
        t.id = i + 1;
        t.min_interarrival = params.period_pool[pool_pick(rng)];
        t.deadline = t.min_interarrival *
                     uniform_on_grid(params.deadline_ratio_min, params.deadline_ratio_max, kRatioGrid, rng);
        t.wcet = Rational(units[static_cast<std::size_t>(i)], kDensityGrid) * t.deadline;
        tasks.push_back(std::move(t));
    }
    return TaskSystem::normalize(std::move(tasks));
}

TaskSystem generate(const GenParams& params, std::uint64_t index) {
    std::mt19937_64 rng(AcetStream::mix(params.seed) ^ AcetStream::mix(index * 0x9E3779B97F4A7C15ULL + 7));
    return generate(params, rng);
}

Rational sample_acet(const Rational& wcet, const GenParams& params, std::uint64_t random_word) {
    const mpz_class lo = ceil(params.acet_ratio_min * Rational(kAcetGrid));
    const mpz_class hi = floor(params.acet_ratio_max * Rational(kAcetGrid));
    if (hi < lo) throw ModelError("acet ratio range has no grid point");
    const auto span = static_cast<std::uint64_t>(hi.get_si() - lo.get_si() + 1);
    const long units = lo.get_si() + static_cast<long>(random_word % span);
    return wcet * Rational(units, kAcetGrid);
}

std::uint64_t AcetStream::mix(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t AcetStream::word(int task_id, std::int64_t job_index) const {
    return mix(key_ ^ mix((static_cast<std::uint64_t>(static_cast<std::uint32_t>(task_id)) << 40) ^
                          static_cast<std::uint64_t>(job_index)));
}

AcetFn acet_source(const TaskSystem& ts, const GenParams& params, const AcetStream& stream) {
    return [&ts, params, stream](std::size_t rank, std::int64_t job) {
        return sample_acet(ts[rank].wcet, params, stream.word(ts[rank].id, job));
    };
}

}  // namespace dvs
