#include <doctest.h>

#include "dvs/errors.hpp"
#include "dvs/power.hpp"

using dvs::PlatformSpec;
using dvs::PowerModel;
using dvs::Rational;

TEST_CASE("table quantization picks the speed immediately above") {
    auto p1 = PowerModel::preset("tm5400");
    auto p2 = PowerModel::preset("sa1100");
    CHECK(dvs::quantize_speed(p1, Rational(6, 10)) == Rational(714, 1000));
    CHECK(dvs::quantize_speed(p2, Rational(947, 1000)) == Rational(947, 1000));
    CHECK(dvs::quantize_speed(p1, Rational(1)) == Rational(1));
    CHECK(dvs::quantize_speed(p2, Rational(1)) == Rational(1));
    CHECK(dvs::quantize_speed(p2, Rational(1, 100)) == Rational(291, 1000));
    CHECK_THROWS_AS(dvs::quantize_speed(p1, Rational(101, 100)), dvs::InfeasibleError);
    CHECK(p1.min_speed() == Rational(286, 1000));
    CHECK(p2.min_speed() == Rational(291, 1000));
}

TEST_CASE("quantization is idempotent and never lowers the speed") {
    for (const char* name : {"tm5400", "sa1100"}) {
        auto model = PowerModel::preset(name);
        for (long i = 1; i <= 1000; ++i) {
            Rational s(i, 1000);
            Rational q = dvs::quantize_speed(model, s);
            CHECK(q >= s);
            CHECK(dvs::quantize_speed(model, q) == q);
        }
    }
    auto cubic = PowerModel::preset("cubic");
    CHECK(dvs::quantize_speed(cubic, Rational(1, 3)) == Rational(1, 3));
}

TEST_CASE("power lookup") {
    auto p1 = PowerModel::preset("tm5400");
    auto p2 = PowerModel::preset("sa1100");
    CHECK(dvs::power_at(p1, Rational(714, 1000)) == doctest::Approx(59.03));
    CHECK(dvs::power_at(p2, Rational(291, 1000)) == doctest::Approx(9.44));
    CHECK(dvs::power_at(PowerModel::preset("cubic"), Rational(1, 2)) == doctest::Approx(12.5));
    CHECK_THROWS_AS(dvs::power_at(p1, Rational(1, 2)), std::invalid_argument);
}

TEST_CASE("power models validate their shape") {
    CHECK_THROWS_AS(PowerModel::preset("pentium"), dvs::ModelError);
    CHECK_THROWS_AS(PowerModel::analytic("bad", 10, 80, 3), dvs::ModelError);
    CHECK_THROWS_AS(PowerModel::analytic("bad", 0, 100, 1.5), dvs::ModelError);
    CHECK_THROWS_AS(PowerModel::table("bad", {{100, 1, 50, Rational(1, 2)}}), dvs::ModelError);
    CHECK_THROWS_AS(PowerModel::table("bad", {{100, 1, 100, Rational(1)}, {50, 1, 50, Rational(1, 2)}}),
                    dvs::ModelError);
    CHECK_NOTHROW(PowerModel::table("ok", {{50, 1, 40, Rational(1, 2)}, {100, 1, 100, Rational(1)}}));
}

TEST_CASE("platform admissible speeds") {
    auto p1 = PlatformSpec::discrete_platform(2, PowerModel::preset("tm5400"));
    CHECK(p1.discrete());
    CHECK(p1.s_min == Rational(286, 1000));
    CHECK(p1.admissible(Rational(1, 10)) == Rational(286, 1000));
    CHECK(p1.admissible(Rational(6, 10)) == Rational(714, 1000));
    auto cont = PlatformSpec::continuous_platform(2, Rational(1, 10), PowerModel::preset("cubic"));
    CHECK_FALSE(cont.discrete());
    CHECK(cont.admissible(Rational(1, 20)) == Rational(1, 10));
    CHECK(cont.admissible(Rational(1, 3)) == Rational(1, 3));
    PlatformSpec bad = cont;
    bad.m = 0;
    CHECK_THROWS_AS(bad.check(), dvs::ModelError);
}

TEST_CASE("energy of segments") {
    auto p1 = PowerModel::preset("tm5400");
    auto zero = PlatformSpec::discrete_platform(1, p1, dvs::IdlePolicy::ZeroPower);
    auto idle = PlatformSpec::discrete_platform(1, p1, dvs::IdlePolicy::AtMinSpeed);
    CHECK(dvs::energy_of_segments({{0, Rational(0), Rational(10), Rational(1)}}, Rational(10), p1, zero) ==
          doctest::Approx(1000));
    CHECK(dvs::energy_of_segments({{0, Rational(0), Rational(4), Rational(714, 1000)}}, Rational(10), p1, idle) ==
          doctest::Approx(312.32));
    auto two = PlatformSpec::discrete_platform(2, p1, dvs::IdlePolicy::ZeroPower);
    CHECK(dvs::energy_of_segments({}, Rational(5), p1, two) == 0.0);
    CHECK_THROWS_AS(dvs::energy_of_segments({{0, Rational(0), Rational(4), Rational(1)},
                                             {0, Rational(3), Rational(5), Rational(1)}},
                                            Rational(10), p1, zero),
                    dvs::MalformedTrace);
}

TEST_CASE("energy is additive over disjoint segments") {
    auto p2 = PowerModel::preset("sa1100");
    auto plat = PlatformSpec::discrete_platform(2, p2, dvs::IdlePolicy::AtMinSpeed);
    std::vector<dvs::SpeedSegment> a{{0, Rational(0), Rational(3), Rational(947, 1000)}};
    std::vector<dvs::SpeedSegment> b{{1, Rational(1), Rational(7, 2), Rational(510, 1000)},
                                     {0, Rational(5), Rational(8), Rational(291, 1000)}};
    std::vector<dvs::SpeedSegment> both = a;
    both.insert(both.end(), b.begin(), b.end());
    const double idle_all = dvs::energy_of_segments({}, Rational(10), p2, plat);
    const double ea = dvs::energy_of_segments(a, Rational(10), p2, plat) - idle_all;
    const double eb = dvs::energy_of_segments(b, Rational(10), p2, plat) - idle_all;
    const double eab = dvs::energy_of_segments(both, Rational(10), p2, plat) - idle_all;
    CHECK(eab == doctest::Approx(ea + eb));
}
