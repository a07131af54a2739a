#include <doctest.h>

#include "clusterperf/experiment.hpp"
#include "support/instances.hpp"

using namespace clusterperf;

TEST_CASE("method and axis names round-trip") {
    for (Method m : {Method::Iterative, Method::Exact, Method::Des}) {
        CHECK(parse_method(to_string(m)) == m);
    }
    CHECK(parse_methods("iterative,exact") == std::vector<Method>{Method::Iterative, Method::Exact});
    CHECK_THROWS_AS(parse_method("newton"), ParameterError);
    for (SweepAxis a : {SweepAxis::Lambda, SweepAxis::Mu, SweepAxis::Xi, SweepAxis::XiH, SweepAxis::Eta,
                        SweepAxis::EtaH, SweepAxis::Servers, SweepAxis::Capacity}) {
        CHECK(parse_axis(to_string(a)) == a);
    }
}

TEST_CASE("axis values land on the right parameter") {
    const SystemParams base = testing::small_cluster(2, 4);
    CHECK(with_axis_value(base, SweepAxis::Mu, 0.7).mu_h == 0.7);
    CHECK(with_axis_value(base, SweepAxis::Capacity, 9.0).capacity == 9);
    CHECK(with_axis_value(base, SweepAxis::EtaH, 0.05).eta_h == 0.05);
}

TEST_CASE("lambda sweep yields nondecreasing MQL in input order") {
    SweepSpec spec;
    spec.base = testing::cluster_baseline(10, 30, 1.0);
    spec.values = {0.5, 1.0, 2.0, 3.0, 4.0};
    spec.methods = {Method::Iterative, Method::Exact};
    spec.configs.solver.delta = 1e-9;
    const auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 10);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(rows[k].params.lambda == spec.values[k / 2]);
        CHECK(rows[k].method == spec.methods[k % 2]);
        REQUIRE(rows[k].metrics.has_value());
        if (k >= 2) {
            CHECK(rows[k].metrics->mql >= rows[k - 2].metrics->mql);
        }
    }
}

TEST_CASE("invalid sweep values are rejected before any work") {
    SweepSpec spec;
    spec.base = testing::small_cluster(3, 6);
    spec.axis = SweepAxis::Capacity;
    spec.values = {6.0, 2.0};
    CHECK_THROWS_AS(run_sweep(spec), ParameterError);
}

TEST_CASE("failed points are recorded without aborting the sweep") {
    SweepSpec spec;
    spec.base = testing::small_cluster(3, 6);
    spec.axis = SweepAxis::Capacity;
    spec.values = {4.0, 40.0, 5.0};
    spec.methods = {Method::Exact};
    spec.configs.oracle.max_states = 100;
    const auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].failure == FailureKind::None);
    CHECK(rows[1].failure == FailureKind::CapExceeded);
    CHECK_FALSE(rows[1].metrics.has_value());
    CHECK(rows[1].error.find("instance too large") != std::string::npos);
    CHECK(rows[2].failure == FailureKind::None);
    CHECK(rows[2].metrics.has_value());

    const SweepRow invalid = evaluate(testing::small_cluster(3, 2), Method::Iterative, {});
    CHECK(invalid.failure == FailureKind::Validation);
    CHECK(invalid.error.find("L >= S") != std::string::npos);
}

TEST_CASE("comparison of analytical methods") {
    MethodConfigs cfg;
    cfg.solver.delta = 1e-10;
    const ComparisonReport r = compare(testing::small_cluster(3, 6), {Method::Iterative, Method::Exact}, cfg);
    REQUIRE(!r.discrepancies.empty());
    for (const auto& d : r.discrepancies) {
        CHECK(d.relative <= 1e-4);
        CHECK(d.pass);
    }
    CHECK(r.all_pass());
    const ComparisonReport self = compare(testing::small_cluster(3, 6), {Method::Exact, Method::Exact}, cfg);
    for (const auto& d : self.discrepancies) {
        CHECK(d.relative == 0.0);
    }
    CHECK(relative_discrepancy(1.0, 1.0) == 0.0);
    CHECK(relative_discrepancy(1.1, 1.0) == doctest::Approx(0.1));
}

TEST_CASE("presets") {
    CHECK(preset_names().size() == 8);
    const Preset fig8 = make_preset("fig8");
    REQUIRE(fig8.sweeps.size() == 3);
    CHECK(fig8.curve_axis == SweepAxis::Xi);
    const std::vector<double> xis{0.001, 0.002, 0.004};
    for (std::size_t k = 0; k < 3; ++k) {
        const SweepSpec& s = fig8.sweeps[k];
        CHECK(s.base.servers == 500);
        CHECK(s.base.capacity == 1000);
        CHECK(s.base.mu == 0.25);
        CHECK(s.base.xi == xis[k]);
        CHECK(s.base.xi_h == 0.001);
        CHECK(s.axis == SweepAxis::Lambda);
        CHECK(s.values.front() == 10.0);
        CHECK(s.values.back() == 100.0);
        CHECK(s.methods == std::vector<Method>{Method::Iterative});
    }
    CHECK(make_preset("fig8", true).sweeps[0].methods.size() == 2);
    CHECK(make_preset("fig13").curve_axis == SweepAxis::Servers);
    CHECK(make_preset("fig14").curve_axis == SweepAxis::Capacity);
    CHECK_THROWS_AS(make_preset("fig99"), ParameterError);
}
