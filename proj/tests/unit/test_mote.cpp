#include <doctest.h>

#include <random>

#include "dvs/analysis.hpp"
#include "dvs/mote.hpp"
#include "dvs/oracle.hpp"
#include "snapshots.hpp"
#include "test_support.hpp"

using dvs::ContentionView;
using dvs::PlatformSpec;
using dvs::PowerModel;
using dvs::Rational;

namespace {

ContentionView three_cpu_view() {
    auto ts = testing::three_cpu_system();
    ContentionView view;
    view.now = Rational(0);
    view.m = 3;
    view.subject = ts.rank_of(3);
    for (const auto& t : ts.tasks()) view.tasks.push_back({Rational(0), t.min_interarrival, t.deadline, t.wcet});
    return view;
}

}  // namespace

TEST_CASE("three tasks on three CPUs: contention at the last earliest arrival") {
    auto view = three_cpu_view();
    auto tn = dvs::next_contention(view);
    REQUIRE(tn);
    CHECK(*tn == Rational(21));
    CHECK(dvs::pi(view, *tn) == 0);
    CHECK(dvs::pi(view, Rational(20)) == 1);
    CHECK(dvs::pi(view, Rational(0)) == 1);
    CHECK(dvs::brute_force_tnext(view) == tn);
}

TEST_CASE("bound right after a synchronous release") {
    ContentionView view;
    view.now = Rational(4);
    view.m = 5;
    view.subject = 1;
    for (int i = 0; i < 4; ++i) view.tasks.push_back({Rational(4), Rational(10 + i), Rational(8), Rational(1)});
    CHECK(dvs::pi(view, Rational(4)) == 5 - 3);
}

TEST_CASE("more CPUs than tasks never contend") {
    auto view = three_cpu_view();
    view.m = 4;
    CHECK_FALSE(dvs::next_contention(view).has_value());
    CHECK_FALSE(dvs::brute_force_tnext(view).has_value());
    CHECK(dvs::pi(view, Rational(5)) > 0);
}

TEST_CASE("single task on a single CPU contends at its next arrival") {
    ContentionView view;
    view.now = Rational(3);
    view.m = 1;
    view.subject = 0;
    view.tasks.push_back({Rational(2), Rational(7), Rational(5), Rational(2)});
    CHECK(dvs::next_contention(view) == Rational(9));
}

TEST_CASE("contention at now when the bound is already exhausted") {
    auto ts = testing::lambda_system();
    ContentionView view;
    view.now = Rational(0);
    view.m = 2;
    view.subject = 2;
    for (const auto& t : ts.tasks()) view.tasks.push_back({Rational(0), t.min_interarrival, t.deadline, t.wcet});
    CHECK(dvs::next_contention(view) == Rational(0));
    CHECK(dvs::brute_force_tnext(view) == Rational(0));
}

TEST_CASE("past-due arrivals count from now") {
    ContentionView view;
    view.now = Rational(10);
    view.m = 2;
    view.subject = 0;
    view.tasks.push_back({Rational(10), Rational(5), Rational(5), Rational(1)});
    view.tasks.push_back({Rational(1), Rational(4), Rational(4), Rational(0)});
    CHECK(dvs::pi(view, Rational(10)) == 1);
    CHECK(dvs::next_contention(view) == Rational(15));
}

TEST_CASE("sweep agrees with the brute-force reference on random snapshots") {
    std::mt19937_64 rng(12345);
    for (int i = 0; i < 3000; ++i) {
        auto view = testing::random_view(rng);
        const auto fast = dvs::next_contention(view);
        const auto slow = dvs::brute_force_tnext(view);
        REQUIRE(fast == slow);
        if (fast) {
            CHECK(*fast >= view.now);
            CHECK(dvs::pi(view, *fast) <= 0);
        }
    }
}

TEST_CASE("initial speeds") {
    auto ts = testing::lambda_system();
    auto cont = PlatformSpec::continuous_platform(2, Rational(1, 10), PowerModel::preset("cubic"));
    auto off = dvs::offline_speed(ts, 2, cont.s_min);
    REQUIRE(off.k_opt == 2);
    for (std::size_t r = 0; r < 3; ++r) CHECK(dvs::initial_speed(r, off, ts, cont) == Rational(6, 10));

    dvs::OfflineResult plain{Rational(9, 10), 1, Rational(9, 10)};
    for (std::size_t r = 0; r < 3; ++r) CHECK(dvs::initial_speed(r, plain, ts, cont) == Rational(9, 10));

    auto p1 = PlatformSpec::discrete_platform(2, PowerModel::preset("tm5400"));
    CHECK(dvs::initial_speed(1, off, ts, p1) == Rational(714, 1000));
}

TEST_CASE("speed reduction") {
    auto cont = PlatformSpec::continuous_platform(1, Rational(1, 10), PowerModel::preset("cubic"));
    CHECK(dvs::reduce_speed(Rational(6, 10), Rational(2), Rational(10), Rational(0), Rational(5), cont) ==
          Rational(2, 5));
    CHECK(dvs::reduce_speed(Rational(1), Rational(2), Rational(4), Rational(0), std::nullopt, cont) == Rational(1, 2));
    auto p2 = PlatformSpec::discrete_platform(1, PowerModel::preset("sa1100"));
    CHECK(dvs::reduce_speed(Rational(1), Rational(1), Rational(10), Rational(0), std::nullopt, p2) ==
          Rational(291, 1000));
    CHECK_THROWS_AS(dvs::reduce_speed(Rational(1), Rational(1), Rational(10), Rational(3), Rational(3), cont),
                    std::invalid_argument);
}

TEST_CASE("speed reduction is bounded and monotone in the remaining work") {
    auto cont = PlatformSpec::continuous_platform(1, Rational(1, 10), PowerModel::preset("cubic"));
    auto p1 = PlatformSpec::discrete_platform(1, PowerModel::preset("tm5400"));
    for (const auto* plat : {&cont, &p1}) {
        const Rational current = plat->admissible(Rational(3, 4));
        Rational previous(0);
        for (long w = 1; w <= 40; ++w) {
            const Rational s = dvs::reduce_speed(current, Rational(w, 10), Rational(8), Rational(2), Rational(6), *plat);
            CHECK(s <= current);
            CHECK(s >= plat->s_min);
            CHECK(s >= previous);
            CHECK(plat->admissible(s) == s);
            previous = s;
        }
    }
}
