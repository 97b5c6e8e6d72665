#include <doctest.h>

#include "dvs/errors.hpp"
#include "dvs/harness.hpp"

using dvs::ExperimentConfig;
using dvs::Method;
using dvs::PowerModel;

namespace {

ExperimentConfig small_config(int systems) {
    ExperimentConfig cfg;
    cfg.systems = systems;
    cfg.gen.n_max = 12;
    cfg.gen.lambda_sum_max = dvs::Rational(4);
    cfg.gen.seed = 2024;
    return cfg;
}

}  // namespace

TEST_CASE("baseline-only experiment saves nothing") {
    auto cfg = small_config(3);
    cfg.methods = {Method::Smax};
    for (const char* name : {"sa1100", "tm5400", "cubic"}) {
        cfg.models = {PowerModel::preset(name)};
        auto report = dvs::run_comparison_serial(cfg);
        CHECK(report.failed() == 0);
        for (const auto& s : report.systems)
            for (const auto& r : s.runs) CHECK(r.savings == 0.0);
    }
}

TEST_CASE("parallel batch matches the serial reference") {
    auto cfg = small_config(12);
    auto serial = dvs::run_comparison_serial(cfg);
    auto parallel = dvs::run_comparison(cfg);
    CHECK(serial.failed() == 0);
    REQUIRE(serial.systems.size() == parallel.systems.size());
    for (std::size_t i = 0; i < serial.systems.size(); ++i) CHECK(serial.systems[i] == parallel.systems[i]);
    REQUIRE(serial.summary.size() == parallel.summary.size());
    for (std::size_t i = 0; i < serial.summary.size(); ++i) {
        CHECK(serial.summary[i].mean_savings == parallel.summary[i].mean_savings);
        CHECK(serial.summary[i].count == 12);
    }
}

TEST_CASE("summary follows the configured order") {
    auto cfg = small_config(4);
    auto report = dvs::run_comparison(cfg);
    REQUIRE(report.summary.size() == 8);
    CHECK(report.summary[0].model == "sa1100");
    CHECK(report.summary[0].method == Method::Smax);
    CHECK(report.summary[7].model == "tm5400");
    CHECK(report.summary[7].method == Method::Mote);
    const auto* mote = report.find("sa1100", Method::Mote);
    REQUIRE(mote != nullptr);
    CHECK(mote->mean_savings > 0);
    CHECK(report.find("p4", Method::Mote) == nullptr);
}

TEST_CASE("energy never rises from full speed to the on-line policy under a cubic model") {
    auto cfg = small_config(20);
    cfg.models = {PowerModel::preset("cubic")};
    auto report = dvs::run_comparison(cfg);
    CHECK(report.failed() == 0);
    for (const auto& s : report.systems) {
        REQUIRE(s.runs.size() == 4);
        CHECK(s.runs[3].energy <= s.runs[2].energy + 1e-9);
        CHECK(s.runs[2].energy <= s.runs[1].energy + 1e-9);
        CHECK(s.runs[1].energy <= s.runs[0].energy + 1e-9);
    }
}

TEST_CASE("configuration checks") {
    ExperimentConfig cfg;
    cfg.methods = {Method::Mote};
    CHECK_THROWS_AS(cfg.check(), dvs::ConfigError);
    cfg = {};
    cfg.systems = 0;
    CHECK_THROWS_AS(cfg.check(), dvs::ConfigError);
    cfg = {};
    cfg.models.clear();
    CHECK_THROWS_AS(cfg.check(), dvs::ConfigError);
}

TEST_CASE("oversized hyperperiods are rejected per system") {
    auto cfg = small_config(3);
    cfg.max_hyperperiod = dvs::Rational(1);
    auto report = dvs::run_comparison(cfg);
    CHECK(report.failed() == 3);
    for (const auto& s : report.summary) CHECK(s.count == 0);
}
