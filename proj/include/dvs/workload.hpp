#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dvs/rational.hpp"
#include "dvs/sim.hpp"
#include "dvs/task_model.hpp"

namespace dvs {

/// Random task-system regime.
struct GenParams {
    int n_min = 5;
    int n_max = 40;
    Rational lambda_sum_min{1};
    Rational lambda_sum_max{10};
    std::vector<Rational> period_pool{5, 10, 20, 25, 50, 100};
    Rational deadline_ratio_min{1, 2};
    Rational deadline_ratio_max{1};
    Rational acet_ratio_min{1, 4};
    Rational acet_ratio_max{1};
    std::uint64_t seed = 1;

    /// Throws ModelError on an empty interval, a ratio outside (0, 1], a
    /// non-positive period, or n_min < 1.
    void check() const;
    /// lcm of the period pool: every generated hyperperiod divides it.
    Rational pool_hyperperiod() const;
};

/// Densities and ratios are drawn on fixed grids so every generated value
/// is an exact rational with a small denominator.
inline constexpr long kDensityGrid = 10000;
inline constexpr long kRatioGrid = 100;
inline constexpr long kAcetGrid = 1000;

/// A point drawn uniformly from {x in [0, 1]^n : sum x = total} (Stafford's
/// RandFixedSum). Same law as splitting `total` uniformly over the simplex
/// and rejecting splits with a component above 1, without the rejection loop.
std::vector<double> rand_fixed_sum(int n, double total, std::mt19937_64& rng);

/// Draws one task system. Target lambda_sum is uniform in
/// [lambda_sum_min, min(lambda_sum_max, n)] on the density grid and the n
/// densities sum to it exactly; each density lies in (0, 1). T is uniform
/// over the pool, D/T uniform on the ratio grid, C = lambda * D. Throws
/// ModelError when lambda_sum_min is unattainable for the drawn n.
TaskSystem generate(const GenParams& params, std::mt19937_64& rng);

/// Convenience: system number `index` of the batch seeded by params.seed.
TaskSystem generate(const GenParams& params, std::uint64_t index);

/// ACET = r * C with r uniform over the acet-ratio range on a 1/1000 grid,
/// driven by one 64-bit random word.
Rational sample_acet(const Rational& wcet, const GenParams& params, std::uint64_t random_word);

/// Counter-based per-job random words: the word for (task id, job index) does
/// not depend on draw order, so all methods of one system see the same ACETs.
class AcetStream {
public:
    AcetStream(std::uint64_t seed, std::uint64_t system_index) : key_(mix(seed ^ mix(system_index + 1))) {}
    std::uint64_t word(int task_id, std::int64_t job_index) const;

    static std::uint64_t mix(std::uint64_t x);

private:
    std::uint64_t key_;
};

/// ACET function for periodic_releases over `ts`.
AcetFn acet_source(const TaskSystem& ts, const GenParams& params, const AcetStream& stream);

}  // namespace dvs
