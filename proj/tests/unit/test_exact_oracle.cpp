#include <doctest.h>

#include "clusterperf/exact_oracle.hpp"
#include "clusterperf/model.hpp"
#include "support/dense_oracle.hpp"
#include "support/instances.hpp"

using namespace clusterperf;

TEST_CASE("head on/off chain") {
    SystemParams p = testing::small_cluster(1, 1);
    p.capacity = 0;
    p.xi_h = 0.3;
    p.eta_h = 0.7;
    const SparseGenerator g = build_generator(p);
    REQUIRE(g.dimension() == 2);
    const std::size_t up = g.space.index({Plane::HeadUp, 1, 0});
    const std::size_t down = g.space.index({Plane::HeadDown, 0, 0});
    CHECK(g.entry(up, up) == doctest::Approx(-0.3));
    CHECK(g.entry(up, down) == doctest::Approx(0.3));
    CHECK(g.entry(down, up) == doctest::Approx(0.7));
    CHECK(g.entry(down, down) == doctest::Approx(-0.7));
    const ProbabilityField pi = stationary(g);
    CHECK(pi.values()[up] == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(pi.values()[down] == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("generator rows sum to zero (S=2, L=2)") {
    const SparseGenerator g = build_generator(testing::small_cluster(2, 2));
    REQUIRE(g.dimension() == 12);
    for (std::size_t r = 0; r < g.dimension(); ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < g.dimension(); ++c) {
            row += g.entry(r, c);
        }
        CHECK(std::abs(row) <= 1e-15);
    }
}

TEST_CASE("size cap") {
    SystemParams p = testing::cluster_baseline(1000, 2000, 70.0);
    CHECK_THROWS_AS(build_generator(p), OracleCapExceeded);
    try {
        build_generator(p);
    } catch (const OracleCapExceeded& e) {
        CHECK(std::string(e.what()).find("instance too large for exact solve") != std::string::npos);
    }
    OracleLimits tight;
    tight.max_states = 10;
    CHECK_THROWS_AS(build_generator(testing::small_cluster(2, 2), tight), OracleCapExceeded);
    OracleLimits narrow;
    narrow.max_band_bytes = 64;
    CHECK_THROWS_AS(stationary(build_generator(testing::small_cluster(3, 6)), narrow), OracleCapExceeded);
}

TEST_CASE("balance residual and plane mass") {
    const SystemParams p = testing::small_cluster(2, 2);
    const SparseGenerator g = build_generator(p);
    const ProbabilityField pi = stationary(g);
    CHECK(balance_residual(pi, g) <= 1e-12);
    CHECK(std::abs(pi.total() - 1.0) <= 1e-12);
    for (const auto& q : testing::random_instances(15, 77)) {
        const ProbabilityField s = stationary(build_generator(q));
        CHECK(std::abs(s.plane_mass(Plane::HeadUp) - q.eta_h / (q.eta_h + q.xi_h)) <= 1e-10);
    }
}

TEST_CASE("agrees with a dense LU solve") {
    for (const auto& p : testing::random_instances(15, 1234)) {
        const ProbabilityField a = stationary(build_generator(p));
        const ProbabilityField b = testing::dense_stationary(p);
        for (std::size_t k = 0; k < a.values().size(); ++k) {
            CHECK(std::abs(a.values()[k] - b.values()[k]) <= 1e-9);
        }
    }
}

TEST_CASE("large band stays accurate (S=40, L=80)") {
    const SystemParams p = testing::cluster_baseline(40, 80, 8.0);
    const SparseGenerator g = build_generator(p);
    const ProbabilityField pi = stationary(g);
    CHECK(balance_residual(pi, g) <= 1e-12);
    const Metrics m = metrics_from(pi, p);
    CHECK(testing::relative_error(m.thrp, p.lambda * (1.0 - m.p_block)) <= 1e-10);
}

TEST_CASE("failure-free chain with repairs is reducible") {
    SystemParams p = testing::small_cluster(3, 4);
    p.xi = 0.0;
    try {
        stationary(build_generator(p));
        FAIL("expected a reducible chain error");
    } catch (const ReducibleChainError& e) {
        // Only the states with every computing node up are recurrent.
        CHECK(e.closed_set().size() == 2 * (4 + 1));
    }
}
