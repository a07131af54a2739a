#include <doctest.h>

#include "clusterperf/state_space.hpp"

using namespace clusterperf;

TEST_CASE("state count is 2*S*(L+1)") {
    CHECK(StateSpace(1, 0).size() == 2);
    CHECK(StateSpace(2, 2).size() == 12);
    CHECK(StateSpace(1000, 2000).size() == 4'002'000);
}

TEST_CASE("flat index and state are inverse bijections") {
    for (int s = 1; s <= 5; ++s) {
        for (int l = s; l <= s + 4; ++l) {
            const StateSpace space(s, l);
            for (std::size_t k = 0; k < space.size(); ++k) {
                const StateIndex st = space.state(k);
                REQUIRE(space.contains(st));
                REQUIRE(space.index(st) == k);
            }
        }
    }
}

TEST_CASE("plane-dependent operative ranges") {
    const StateSpace space(3, 5);
    CHECK(space.contains({Plane::HeadUp, 3, 5}));
    CHECK_FALSE(space.contains({Plane::HeadUp, 0, 0}));
    CHECK(space.contains({Plane::HeadDown, 0, 0}));
    CHECK_FALSE(space.contains({Plane::HeadDown, 3, 0}));
    CHECK_FALSE(space.contains({Plane::HeadUp, 1, 6}));
    CHECK_THROWS_AS(space.make(Plane::HeadDown, 3, 0), std::out_of_range);
    CHECK_THROWS_AS(space.make(Plane::HeadUp, 1, -1), std::out_of_range);
}

TEST_CASE("sweep order puts plane 1 first") {
    const StateSpace space(2, 1);
    CHECK(space.state(0) == StateIndex{Plane::HeadUp, 1, 0});
    CHECK(space.state(1) == StateIndex{Plane::HeadUp, 1, 1});
    CHECK(space.state(2) == StateIndex{Plane::HeadUp, 2, 0});
    CHECK(space.state(4) == StateIndex{Plane::HeadDown, 0, 0});
}

TEST_CASE("field totals and plane masses") {
    ProbabilityField f(StateSpace(2, 1), 0.125);
    CHECK(f.total() == doctest::Approx(1.0));
    CHECK(f.plane_mass(Plane::HeadUp) == doctest::Approx(0.5));
    f[StateIndex{Plane::HeadDown, 1, 1}] = 0.0;
    CHECK(f.plane_mass(Plane::HeadDown) == doctest::Approx(0.375));
    CHECK(f.at(Plane::HeadUp, 2, 1) == 0.125);
}
