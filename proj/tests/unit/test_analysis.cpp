#include <doctest.h>

#include <random>

#include "dvs/analysis.hpp"
#include "dvs/errors.hpp"
#include "dvs/workload.hpp"
#include "test_support.hpp"

using dvs::Rational;
using testing::from_densities;

TEST_CASE("global EDF bound") {
    auto ts = testing::lambda_system();
    CHECK(dvs::edf_min_speed(ts, 2) == Rational(9, 10));
    CHECK(dvs::edf_min_speed(from_densities({Rational(2, 5)}), 1) == Rational(2, 5));
    CHECK(dvs::edf_min_speed(from_densities({Rational(2, 5)}), 4) == Rational(2, 5));
    auto halves = from_densities({Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2)});
    CHECK(dvs::edf_min_speed(halves, 3) == Rational(1));
}

TEST_CASE("EDF(k) bound") {
    auto ts = testing::lambda_system();
    CHECK(dvs::edfk_speed(ts, 2, 1) == Rational(9, 10));
    CHECK(dvs::edfk_speed(ts, 2, 2) == Rational(6, 10));
    CHECK(dvs::edfk_shared_speed(ts, 2, 2) == Rational(6, 10));
    CHECK_THROWS_AS(dvs::edfk_speed(ts, 2, 3), std::out_of_range);
    CHECK_THROWS_AS(dvs::edfk_speed(ts, 2, 0), std::out_of_range);
    // k = n with m >= n: the suffix is the last task alone.
    CHECK(dvs::edfk_speed(ts, 3, 3) == Rational(6, 10));
}

TEST_CASE("off-line sweep") {
    auto ts = testing::lambda_system();
    auto r = dvs::offline_speed(ts, 2, Rational(291, 1000));
    CHECK(r.s_ol == Rational(6, 10));
    CHECK(r.k_opt == 2);
    CHECK(r.privileged_count() == 1);
    CHECK(r.is_privileged(0));
    CHECK_FALSE(r.is_privileged(1));

    auto single = from_densities({Rational(1, 5)});
    auto r1 = dvs::offline_speed(single, 1, Rational(291, 1000));
    CHECK(r1.s_ol == Rational(291, 1000));
    CHECK(r1.k_opt == 1);
    CHECK(r1.privileged_count() == 0);

    auto heavy = from_densities({Rational(9, 10), Rational(9, 10)});
    auto r2 = dvs::offline_speed(heavy, 2, Rational(1, 10));
    CHECK(r2.s_ol == Rational(9, 10));
    CHECK(r2.k_opt == 2);

    auto over = from_densities({Rational(9, 10), Rational(9, 10), Rational(9, 10)});
    CHECK_THROWS_AS(dvs::offline_speed(over, 1, Rational(1, 10)), dvs::InfeasibleError);
}

TEST_CASE("required processors") {
    CHECK(dvs::required_processors(testing::lambda_system()) == 2);
    CHECK(dvs::required_processors(from_densities({Rational(1), Rational(1, 5)})) == 2);
    CHECK(dvs::required_processors(from_densities({Rational(1, 5)})) == 1);
}

TEST_CASE("EDF(1) equals EDF and the sweep dominates on random systems") {
    dvs::GenParams params;
    for (std::uint64_t i = 0; i < 300; ++i) {
        auto ts = dvs::generate(params, i);
        const int m = dvs::required_processors(ts);
        const Rational edf = dvs::edf_min_speed(ts, m);
        CHECK(dvs::edfk_speed(ts, m, 1) == edf);
        if (edf <= Rational(1)) {
            auto r = dvs::offline_speed(ts, m, Rational(1, 10));
            CHECK(r.s_ol <= edf);
            CHECK(r.s_ol >= ts.max_density());
        }
    }
}

TEST_CASE("EDF bound is feasible whenever the processor count is not capped") {
    // The cap at n breaks the bound: two tasks of density 0.9 need m = 2 but
    // the EDF bound is 1.35 there.
    auto capped = from_densities({Rational(9, 10), Rational(9, 10)});
    CHECK(dvs::required_processors(capped) == 2);
    CHECK(dvs::edf_min_speed(capped, 2) > Rational(1));

    dvs::GenParams params;
    for (std::uint64_t i = 0; i < 300; ++i) {
        auto ts = dvs::generate(params, i);
        const Rational l1 = ts.max_density();
        if (l1 == Rational(1)) continue;
        const auto need = dvs::ceil((ts.total_density() - l1) / (Rational(1) - l1));
        if (need > static_cast<long>(ts.size())) continue;
        const int m = static_cast<int>(need.get_si());
        if (m < 1) continue;
        CHECK(dvs::edf_min_speed(ts, m) <= Rational(1));
    }
}
