#include <doctest.h>

#include <cmath>

#include "manet/geometry.hpp"
#include "manet/rng.hpp"

using namespace manet;

TEST_CASE("bearing basics") {
    CHECK(bearing_deg({0, 0, 0}, {10, 0, 0}) == doctest::Approx(0.0));
    CHECK(bearing_deg({0, 0, 0}, {10, 10, 0}) == doctest::Approx(45.0));
    CHECK(bearing_deg({0, 0, 0}, {-10, 0, 0}) == doctest::Approx(180.0));
    CHECK(bearing_deg({0, 0, 0}, {0, -5, 0}) == doctest::Approx(270.0));
    CHECK_THROWS_AS(bearing_deg({1, 2, 0}, {1, 2, 0}), std::invalid_argument);
}

TEST_CASE("sector_of covers the six sectors with half-open boundaries") {
    Position c{100, 100, 0};
    auto at_bearing = [&](double deg) {
        return Position{c.x + 10 * std::cos(deg_to_rad(deg)), c.y + 10 * std::sin(deg_to_rad(deg)),
                        0};
    };
    CHECK(sector_of(c, at_bearing(30)) == 1);
    CHECK(sector_of(c, at_bearing(359)) == 6);
    CHECK(sector_of(c, at_bearing(0)) == 1);
    // boundaries are half-open; these bearings are exact in atan2
    CHECK(sector_of(c, {c.x, c.y + 10, 0}) == 2);   // 90 deg
    CHECK(sector_of(c, {c.x - 10, c.y, 0}) == 4);   // 180 deg
    CHECK(sector_of(c, {c.x, c.y - 10, 0}) == 5);   // 270 deg
    CHECK_THROWS_AS(sector_of(c, c), std::invalid_argument);
}

TEST_CASE("sector_of partitions all bearings") {
    // every non-center point maps to exactly one sector and each sector's
    // preimage is the expected 60-degree arc
    Position c{0, 0, 0};
    Rng rng(1234);
    for (int i = 0; i < 5000; ++i) {
        double b = rng.uniform(0.0, 360.0);
        double r = rng.uniform(0.1, 500.0);
        Position p{c.x + r * std::cos(deg_to_rad(b)), c.y + r * std::sin(deg_to_rad(b)), 0};
        int k = sector_of(c, p);
        REQUIRE(k >= 1);
        REQUIRE(k <= 6);
        double recovered = bearing_deg(c, p);
        CHECK(recovered >= (k - 1) * 60.0 - 1e-9);
        CHECK(recovered < k * 60.0 + 1e-9);
    }
}

TEST_CASE("angle helpers wrap correctly") {
    CHECK(norm_deg(-90.0) == doctest::Approx(270.0));
    CHECK(norm_deg(720.0) == doctest::Approx(0.0));
    CHECK(ang_diff_deg(350.0, 10.0) == doctest::Approx(-20.0));
    CHECK(ang_diff_deg(10.0, 350.0) == doctest::Approx(20.0));
}

TEST_CASE("deterministic rng streams") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    // derived streams depend on every key
    Rng s1 = derived_rng({1, 2, 3});
    Rng s2 = derived_rng({1, 2, 4});
    CHECK(s1.next_u64() != s2.next_u64());
}

TEST_CASE("gauss has roughly correct moments") {
    Rng rng(7);
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double x = rng.gauss(2.0);
        sum += x;
        sq += x * x;
    }
    double mean = sum / n;
    double var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(var == doctest::Approx(4.0).epsilon(0.02));
}
