#include <doctest.h>

#include <cmath>
#include <numeric>

#include "clusterperf/approx_init.hpp"
#include "clusterperf/iterative_solver.hpp"
#include "support/instances.hpp"

using namespace clusterperf;

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("plane masses") {
    SystemParams p = testing::small_cluster(2, 4);
    SUBCASE("symmetric head rates") {
        p.xi_h = p.eta_h = 0.3;
        const auto [m0, m1] = plane_masses(p);
        CHECK(m0 == 0.5);
        CHECK(m1 == 0.5);
    }
    SUBCASE("cluster baseline") {
        p.xi_h = 0.001;
        p.eta_h = 0.5;
        const auto [m0, m1] = plane_masses(p);
        CHECK(m0 == doctest::Approx(0.001 / 0.501).epsilon(1e-14));
        CHECK(m1 == doctest::Approx(0.5 / 0.501).epsilon(1e-14));
        CHECK(m0 == doctest::Approx(0.0019960).epsilon(1e-4));
        CHECK(m0 + m1 == 1.0);
    }
}

TEST_CASE("operative marginal") {
    SUBCASE("single column holds all plane-1 mass") {
        const SystemParams p = testing::small_cluster(1, 3);
        const auto w = operative_marginal(p);
        REQUIRE(w.size() == 1);
        CHECK(w[0] == doctest::Approx(plane_masses(p).second));
    }
    SUBCASE("S=3, eta/xi=2, paper-literal") {
        SystemParams p = testing::small_cluster(3, 4);
        p.eta = 0.02;
        p.xi = 0.01;
        const double m1 = plane_masses(p).second;
        const auto w = operative_marginal(p);
        // Unnormalized weights (1, 1, 2/3) from P_{i+1} = P_i * eta / ((i+1) xi).
        const double norm = m1 / (8.0 / 3.0);
        CHECK(w[0] == doctest::Approx(1.0 * norm).epsilon(1e-13));
        CHECK(w[1] == doctest::Approx(1.0 * norm).epsilon(1e-13));
        CHECK(w[2] == doctest::Approx(2.0 / 3.0 * norm).epsilon(1e-13));
    }
    SUBCASE("S=3, eta/xi=2, per-computing-node") {
        SystemParams p = testing::small_cluster(3, 4, FailureSemantics::PerComputingNode);
        p.eta = 0.02;
        p.xi = 0.01;
        const double m1 = plane_masses(p).second;
        const auto w = operative_marginal(p);
        // P_{i+1} = P_i * eta / (i xi): weights (1, 2, 2).
        CHECK(w[0] == doctest::Approx(m1 / 5.0).epsilon(1e-13));
        CHECK(w[1] == doctest::Approx(2.0 * m1 / 5.0).epsilon(1e-13));
        CHECK(w[2] == doctest::Approx(2.0 * m1 / 5.0).epsilon(1e-13));
    }
    SUBCASE("failure-free limit") {
        SystemParams p = testing::small_cluster(4, 4);
        p.xi = 0.0;
        const auto w = operative_marginal(p);
        CHECK(w == std::vector<double>{0.0, 0.0, 0.0, plane_masses(p).second});
    }
    SUBCASE("large S stays finite") {
        SystemParams p = testing::cluster_baseline(2000, 5000, 70.0);
        p.eta = 50.0;
        const auto w = operative_marginal(p);
        for (double x : w) {
            REQUIRE(std::isfinite(x));
            REQUIRE(x >= 0.0);
        }
        CHECK(sum(w) == doctest::Approx(plane_masses(p).second).epsilon(1e-12));
    }
}

TEST_CASE("column conditional") {
    SUBCASE("one server gives a truncated geometric") {
        SystemParams p = testing::small_cluster(2, 5);
        p.lambda = 0.6;
        p.mu = p.mu_h = 0.4;
        const double rho = 1.5;
        const auto c = column_conditional(1, p);
        double norm = 0.0;
        for (int j = 0; j <= 5; ++j) {
            norm += std::pow(rho, j);
        }
        for (int j = 0; j <= 5; ++j) {
            CHECK(c[static_cast<std::size_t>(j)] == doctest::Approx(std::pow(rho, j) / norm).epsilon(1e-13));
        }
    }
    SUBCASE("two servers, rho=1, L=3") {
        SystemParams p = testing::small_cluster(2, 3);
        p.lambda = p.mu = p.mu_h = 0.5;
        const auto c = column_conditional(2, p);
        const std::vector<double> w{1.0, 1.0, 0.5, 0.25};
        for (std::size_t j = 0; j < w.size(); ++j) {
            CHECK(c[j] == doctest::Approx(w[j] / 2.75).epsilon(1e-14));
        }
    }
    SUBCASE("two servers, rho equal to the server count") {
        SystemParams p = testing::small_cluster(2, 3);
        p.lambda = 1.0;
        p.mu = p.mu_h = 0.5;
        const auto c = column_conditional(2, p);
        const std::vector<double> w{1.0, 2.0, 2.0, 2.0};
        for (std::size_t j = 0; j < w.size(); ++j) {
            CHECK(c[j] == doctest::Approx(w[j] / 7.0).epsilon(1e-14));
        }
    }
    SUBCASE("rows sum to one and stay finite at large scale") {
        SystemParams p = testing::cluster_baseline(2000, 5000, 700.0);
        for (int i : {1, 7, 1000, 2000}) {
            const auto c = column_conditional(i, p);
            for (double x : c) {
                REQUIRE(std::isfinite(x));
            }
            CHECK(std::abs(sum(c) - 1.0) <= 1e-12);
        }
    }
    SUBCASE("operative count out of range") {
        const SystemParams p = testing::small_cluster(2, 3);
        CHECK_THROWS_AS(column_conditional(0, p), std::out_of_range);
        CHECK_THROWS_AS(column_conditional(3, p), std::out_of_range);
    }
}

TEST_CASE("decomposition invariants") {
    for (const auto& p : testing::random_instances(10, 5)) {
        const Decomposition d = decompose(p);
        CHECK(d.m0 + d.m1 == 1.0);
        CHECK(sum(d.marginal) == doctest::Approx(d.m1).epsilon(1e-12));
        CHECK(d.rho == doctest::Approx(p.lambda / p.mu));
        for (const auto& row : d.conditional) {
            CHECK(std::abs(sum(row) - 1.0) <= 1e-12);
            for (double x : row) {
                CHECK(x >= 0.0);
            }
        }
    }
}

TEST_CASE("initial field") {
    SUBCASE("single node, no queue") {
        SystemParams p = testing::small_cluster(1, 1);
        p.capacity = 0;
        p.xi_h = p.eta_h = 0.2;
        const ProbabilityField f = initial_field(p);
        CHECK(f.at(Plane::HeadUp, 1, 0) == doctest::Approx(0.5));
        CHECK(f.at(Plane::HeadDown, 0, 0) == doctest::Approx(0.5));
    }
    SUBCASE("always normalized") {
        for (const auto& p : testing::random_instances(20, 9)) {
            CHECK(std::abs(initial_field(p).total() - 1.0) <= 1e-12);
        }
    }
    SUBCASE("plane 1 is the product of marginal and conditional (S=3, L=6)") {
        const SystemParams p = testing::small_cluster(3, 6);
        const ProbabilityField f = initial_field(p);
        const auto marginal = operative_marginal(p);
        for (int i = 1; i <= 3; ++i) {
            const auto cond = column_conditional(i, p);
            for (int j = 0; j <= 6; ++j) {
                CHECK(f[StateIndex{Plane::HeadUp, i, j}] ==
                      doctest::Approx(marginal[static_cast<std::size_t>(i - 1)] * cond[static_cast<std::size_t>(j)])
                          .epsilon(1e-15));
            }
        }
        const double spread = plane_masses(p).first / 21.0;
        CHECK(f[StateIndex{Plane::HeadDown, 0, 0}] == doctest::Approx(spread));
        CHECK(f[StateIndex{Plane::HeadDown, 2, 6}] == doctest::Approx(spread));
    }
}

TEST_CASE("warm start needs fewer sweeps than a uniform start") {
    // Benchmark set: moderately sized clusters with rare failures.
    const std::vector<SystemParams> bench{
        testing::cluster_baseline(20, 60, 3.0),
        testing::cluster_baseline(40, 100, 8.0),
        testing::cluster_baseline(50, 100, 10.0),
    };
    SolverConfig cfg;
    cfg.delta = 1e-8;
    for (const auto& p : bench) {
        const auto warm = solve_from(initial_field(p), p, cfg);
        const auto cold = solve_from(uniform_field(p), p, cfg);
        REQUIRE(warm.report.converged);
        REQUIRE(cold.report.converged);
        CHECK(warm.report.iterations < cold.report.iterations);
    }
}
