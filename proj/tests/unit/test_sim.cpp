#include <doctest.h>

#include <algorithm>

#include "dvs/errors.hpp"
#include "dvs/mote.hpp"
#include "dvs/oracle.hpp"
#include "dvs/sim.hpp"
#include "test_support.hpp"

using dvs::EventKind;
using dvs::Method;
using dvs::PlatformSpec;
using dvs::PowerModel;
using dvs::Rational;

namespace {

std::size_t count_kind(const dvs::Trace& trace, EventKind kind) {
    return static_cast<std::size_t>(std::count_if(trace.events.begin(), trace.events.end(),
                                                  [&](const dvs::TraceEvent& e) { return e.kind == kind; }));
}

PlatformSpec cubic(int m, dvs::IdlePolicy idle = dvs::IdlePolicy::AtMinSpeed) {
    return PlatformSpec::continuous_platform(m, Rational(1, 10), PowerModel::preset("cubic"), idle);
}

dvs::Trace run(Method method, const dvs::TaskSystem& ts, const PlatformSpec& plat, const Rational& horizon) {
    auto policy = dvs::make_policy(method, ts, plat);
    auto releases = dvs::periodic_releases(ts, horizon);
    return dvs::simulate(ts, plat, policy, releases, horizon);
}

}  // namespace

TEST_CASE("priority keys") {
    auto privileged = dvs::priority_key(0, 0, Rational(100), 2);
    auto shared = dvs::priority_key(1, 0, Rational(1), 2);
    CHECK(privileged.cls == 0);
    CHECK(privileged < shared);

    CHECK(dvs::priority_key(1, 0, Rational(7), 1) < dvs::priority_key(0, 0, Rational(9), 1));
    CHECK(dvs::priority_key(3, 0, Rational(9), 1) < dvs::priority_key(5, 0, Rational(9), 1));
}

TEST_CASE("method names") {
    CHECK(dvs::parse_method("offline-edfk") == Method::OfflineEdfk);
    CHECK(dvs::parse_method("MOTE") == Method::Mote);
    CHECK(dvs::to_string(Method::OfflineEdf) == "OFFLINE_EDF");
    CHECK_THROWS_AS(dvs::parse_method("lazy"), dvs::ConfigError);
}

TEST_CASE("single task at full speed") {
    auto ts = dvs::TaskSystem::normalize({testing::task(1, 2, 4, 4)});
    auto trace = run(Method::Smax, ts, cubic(1), Rational(8));
    auto segs = dvs::speed_segments(trace);
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].start == Rational(0));
    CHECK(segs[0].end == Rational(2));
    CHECK(segs[1].start == Rational(4));
    CHECK(segs[1].end == Rational(6));
    CHECK(dvs::count_misses(trace) == 0);
}

TEST_CASE("three tasks on three CPUs under MOTE never preempt") {
    auto ts = testing::three_cpu_system();
    auto plat = cubic(3);
    auto trace = run(Method::Mote, ts, plat, Rational(15));
    CHECK(count_kind(trace, EventKind::Dispatch) == 3);
    CHECK(count_kind(trace, EventKind::Preempt) == 0);
    CHECK(dvs::count_misses(trace) == 0);
    for (const auto& e : trace.events)
        if (e.kind == EventKind::Dispatch) {
            REQUIRE(e.t_next.has_value());
            CHECK(*e.t_next == std::optional<Rational>(Rational(21)));
        }
    CHECK(dvs::validate_trace(trace, ts, plat, trace.k_opt).ok());
}

TEST_CASE("off-line EDF(k) at the swept speed meets every deadline") {
    auto ts = testing::lambda_system();
    auto plat = cubic(2);
    auto trace = run(Method::OfflineEdfk, ts, plat, Rational(10));
    CHECK(trace.k_opt == 2);
    CHECK(dvs::count_misses(trace) == 0);
    CHECK(dvs::validate_trace(trace, ts, plat, trace.k_opt).ok());
    for (const auto& e : trace.events)
        if (e.kind == EventKind::Dispatch) CHECK(*e.speed == Rational(6, 10));
}

TEST_CASE("energy of the swept speed against full speed") {
    auto ts = testing::lambda_system();
    auto plat = cubic(2, dvs::IdlePolicy::ZeroPower);
    auto edfk = run(Method::OfflineEdfk, ts, plat, Rational(10));
    auto smax = run(Method::Smax, ts, plat, Rational(10));
    // 12 work units: at 0.6 they take 20 time units at power 21.6.
    CHECK(dvs::energy_of_trace(edfk, plat.model, plat) == doctest::Approx(432));
    CHECK(dvs::energy_of_trace(smax, plat.model, plat) == doctest::Approx(1200));
}

TEST_CASE("MOTE on the reference system at worst-case execution") {
    auto ts = testing::lambda_system();
    auto plat = cubic(2);
    auto trace = run(Method::Mote, ts, plat, Rational(10));
    CHECK(dvs::count_misses(trace) == 0);
    auto report = dvs::validate_trace(trace, ts, plat, trace.k_opt);
    CHECK_MESSAGE(report.ok(), report.summary());
}

TEST_CASE("MOTE slows a lone job down to its deadline") {
    auto ts = dvs::TaskSystem::normalize(
        {testing::task(1, 5, 10, 100), testing::task(2, 5, 10, 100), testing::task(3, 1, 10, 10)});
    auto plat = cubic(2, dvs::IdlePolicy::ZeroPower);
    auto policy = dvs::make_policy(Method::Mote, ts, plat);
    REQUIRE(policy.k_opt == 2);
    const std::size_t small = ts.rank_of(3);
    CHECK(policy.initial_speeds[small] == Rational(6, 10));
    // The heavy jobs finish early; from t = 1 nothing can contend before 100.
    std::vector<dvs::JobRelease> releases{{ts.rank_of(1), 0, Rational(0), Rational(1, 10)},
                                          {ts.rank_of(2), 0, Rational(0), Rational(1, 10)},
                                          {small, 0, Rational(1), Rational(1, 2)}};
    auto trace = dvs::simulate(ts, plat, policy, dvs::check_releases(ts, releases), Rational(20));
    bool seen = false;
    for (const auto& e : trace.events)
        if (e.kind == EventKind::Dispatch && e.task == small) {
            CHECK(*e.speed == Rational(1, 10));
            CHECK(*e.t_next == std::optional<Rational>(Rational(100)));
            seen = true;
        }
    CHECK(seen);
    CHECK(dvs::validate_trace(trace, ts, plat, trace.k_opt).ok());
}

TEST_CASE("work conservation and preemption under EDF") {
    // One CPU, the later-deadline job is displaced at t = 1.
    auto ts = dvs::TaskSystem::normalize({testing::task(1, 2, 3, 10), testing::task(2, 3, 10, 10)});
    auto plat = cubic(1);
    auto policy = dvs::uniform_policy(Rational(1), 1);
    std::vector<dvs::JobRelease> releases{{1, 0, Rational(0), Rational(3)}, {0, 0, Rational(1), Rational(2)}};
    auto trace = dvs::simulate(ts, plat, policy, dvs::check_releases(ts, releases), Rational(10));
    CHECK(count_kind(trace, EventKind::Preempt) == 1);
    CHECK(dvs::count_misses(trace) == 0);
    CHECK(dvs::validate_trace(trace, ts, plat, 1).ok());
}

TEST_CASE("deadline misses are recorded, not fatal") {
    auto ts = dvs::TaskSystem::normalize({testing::task(1, 2, 2, 4), testing::task(2, 2, 2, 4)});
    auto plat = cubic(1);
    auto trace = dvs::simulate(ts, plat, dvs::uniform_policy(Rational(1), 1), dvs::periodic_releases(ts, Rational(8)),
                               Rational(8));
    CHECK(dvs::count_misses(trace) == 2);
    auto report = dvs::validate_trace(trace, ts, plat, 1);
    CHECK(report.misses.size() == 2);
    CHECK_FALSE(report.ok());
}

TEST_CASE("simulation is deterministic") {
    auto ts = testing::lambda_system();
    auto plat = PlatformSpec::discrete_platform(2, PowerModel::preset("sa1100"));
    CHECK(run(Method::Mote, ts, plat, Rational(10)) == run(Method::Mote, ts, plat, Rational(10)));
}

TEST_CASE("explicit release sequences are checked") {
    auto ts = testing::lambda_system();
    const std::size_t r = ts.rank_of(1);
    CHECK_THROWS_AS(dvs::check_releases(ts, {{r, 0, Rational(0), Rational(3)}, {r, 1, Rational(4), Rational(3)}}),
                    dvs::MalformedTrace);
    CHECK_THROWS_AS(dvs::check_releases(ts, {{r, 0, Rational(0), Rational(4)}}), dvs::MalformedTrace);
    CHECK_THROWS_AS(dvs::check_releases(ts, {{r, 1, Rational(0), Rational(3)}}), dvs::MalformedTrace);
    CHECK_THROWS_AS(dvs::check_releases(ts, {{r, 0, Rational(-1), Rational(3)}}), dvs::MalformedTrace);
    auto ok = dvs::check_releases(ts, {{r, 1, Rational(7), Rational(1)}, {r, 0, Rational(1), Rational(3)}});
    CHECK(ok.front().job == 0);
}

TEST_CASE("infeasible EDF bound with fewer CPUs than tasks") {
    auto ts = testing::from_densities({Rational(9, 10), Rational(9, 10), Rational(9, 10)});
    CHECK_THROWS_AS(dvs::make_policy(Method::OfflineEdf, ts, cubic(2)), dvs::InfeasibleError);
    auto full = dvs::make_policy(Method::OfflineEdf, ts, cubic(3));
    CHECK(full.uniform_speed == Rational(1));
}
