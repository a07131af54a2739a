#include <doctest.h>

#include <algorithm>

#include "clusterperf/des.hpp"
#include "clusterperf/exact_oracle.hpp"
#include "clusterperf/model.hpp"
#include "support/instances.hpp"

using namespace clusterperf;

namespace {

SimConfig quick(double horizon, int replications = 10, std::uint64_t seed = 7) {
    SimConfig cfg;
    cfg.horizon = horizon;
    cfg.replications = replications;
    cfg.seed = seed;
    return cfg;
}

bool covers(const Estimate& e, double truth) { return std::abs(e.mean - truth) <= e.half_width; }

}  // namespace

TEST_CASE("failure-free stable queue conserves flow") {
    SystemParams p = testing::small_cluster(3, 10);
    p.xi = p.xi_h = 1e-12;
    p.lambda = 1.0;
    const SimResult r = simulate(p, quick(2e4));
    CHECK(std::abs(r.thrp.mean - (1.0 - r.p_block.mean) * p.lambda) <= r.thrp.half_width + 1e-9);
    CHECK(r.availability.mean == doctest::Approx(1.0));
    CHECK(testing::relative_error(r.thrp.mean, p.lambda) <= 0.05);
}

TEST_CASE("oracle MQL lies inside the confidence interval (S=3, L=6)") {
    const SystemParams p = testing::small_cluster(3, 6);
    const Metrics exact = metrics_from(stationary(build_generator(p)), p);
    const SimResult r = simulate(p, quick(1e5));
    INFO("des " << r.mql.mean << " +- " << r.mql.half_width << " exact " << exact.mql);
    CHECK(covers(r.mql, exact.mql));
}

TEST_CASE("same seed gives the same trace and sample") {
    const SystemParams p = testing::small_cluster(3, 6);
    const SimConfig cfg = quick(2e3, 2, 99);
    std::vector<TraceRecord> first;
    std::vector<TraceRecord> second;
    const ReplicationSample a = run_replication(p, cfg, 1, [&](const TraceRecord& t) { first.push_back(t); });
    const ReplicationSample b = run_replication(p, cfg, 1, [&](const TraceRecord& t) { second.push_back(t); });
    REQUIRE(!first.empty());
    CHECK(first == second);
    CHECK(a.mql == b.mql);
    CHECK(a.events == b.events);
    const ReplicationSample c = run_replication(p, cfg, 0);
    CHECK(c.mql != a.mql);
}

TEST_CASE("trace stays inside the state space") {
    const SystemParams p = testing::small_cluster(3, 4);
    const StateSpace space(p);
    run_replication(p, quick(5e3, 2), 0, [&](const TraceRecord& t) {
        const StateIndex s{t.head_up ? Plane::HeadUp : Plane::HeadDown, t.operative, t.tasks};
        REQUIRE(space.contains(s));
    });
}

TEST_CASE("configuration checks") {
    const SystemParams p = testing::small_cluster(2, 2);
    CHECK_THROWS(simulate(p, quick(1e3, 1)));
    CHECK_THROWS(simulate(p, quick(0.0)));
    SimConfig bad = quick(1e3);
    bad.confidence = 1.0;
    CHECK_THROWS(simulate(p, bad));
    SystemParams invalid = p;
    invalid.capacity = 1;
    CHECK_THROWS_AS(simulate(invalid, quick(1e3)), ParameterError);
}

TEST_CASE("aggregation does not depend on replication order") {
    const SystemParams p = testing::small_cluster(3, 6);
    const SimResult r = simulate(p, quick(2e3, 8));
    std::vector<ReplicationSample> shuffled = r.samples;
    std::reverse(shuffled.begin(), shuffled.end());
    std::rotate(shuffled.begin(), shuffled.begin() + 3, shuffled.end());
    const SimResult s = aggregate(shuffled, 0.95);
    CHECK(s.mql.mean == r.mql.mean);
    CHECK(s.mql.half_width == r.mql.half_width);
    CHECK(s.thrp.mean == r.thrp.mean);
    CHECK(s.p_block.mean == r.p_block.mean);
}

TEST_CASE("summary statistics") {
    const Estimate e = summarize({1.0, 2.0, 3.0, 4.0}, 0.95);
    CHECK(e.mean == doctest::Approx(2.5));
    // t(0.975, 3) = 3.182446305...
    CHECK(e.half_width == doctest::Approx(3.182446305284263 * std::sqrt(5.0 / 3.0) / 2.0).epsilon(1e-9));
    CHECK(summarize({5.0, 5.0}, 0.9).half_width == 0.0);
}

TEST_CASE("tasks are conserved within each replication") {
    const SystemParams p = testing::small_cluster(3, 6);
    const ReplicationSample s = run_replication(p, quick(1e4), 0);
    CHECK(s.arrivals_accepted == s.departures_total + s.in_system_at_end);
    CHECK(s.arrivals_blocked > 0);
    CHECK(s.in_system_at_end <= 6);
}

TEST_CASE("Little's law matches the measured sojourn") {
    const SystemParams p = testing::small_cluster(3, 6);
    const SimResult r = simulate(p, quick(5e4));
    REQUIRE(r.mrt.has_value());
    CHECK(testing::relative_error(r.mrt->mean, r.mrt_sojourn.mean) <= 0.02);
}

TEST_CASE("agreement with the oracle over several instances") {
    // Five instances at 95% confidence: two misses are tolerated.
    std::vector<SystemParams> set{
        testing::small_cluster(2, 4),
        testing::small_cluster(3, 6, FailureSemantics::PerComputingNode),
        testing::small_cluster(4, 8),
        testing::cluster_baseline(4, 10, 0.8),
        testing::cluster_baseline(6, 12, 1.2),
    };
    set[2].lambda = 1.8;
    set[3].xi = set[3].xi_h = 0.02;
    int misses = 0;
    for (std::size_t k = 0; k < set.size(); ++k) {
        const auto& p = set[k];
        const Metrics exact = metrics_from(stationary(build_generator(p)), p);
        const SimResult r = simulate(p, quick(5e4, 10, 100 + k));
        INFO("instance " << k << ": des " << r.mql.mean << " +- " << r.mql.half_width << " exact " << exact.mql);
        if (!covers(r.mql, exact.mql)) {
            ++misses;
        }
        CHECK(testing::relative_error(r.mql.mean, exact.mql) <= 0.05);
    }
    CHECK(misses <= 2);
}

TEST_CASE("degenerate horizon is flagged") {
    SystemParams p = testing::small_cluster(2, 2);
    p.lambda = 1e-9;
    SimConfig cfg = quick(1.0, 2);
    cfg.warmup = 0.0;
    const ReplicationSample s = run_replication(p, cfg, 0);
    CHECK(s.zero_departures);
    CHECK_FALSE(s.mrt.has_value());
    const SimResult r = simulate(p, cfg);
    CHECK_FALSE(r.mrt.has_value());
}
