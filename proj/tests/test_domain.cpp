#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hamlab/domain.hpp"
#include "hamlab/grid_map.hpp"

using namespace hamlab;
static const double TAU = 2.0 * M_PI;

TEST_CASE("torus quadrature") {
    Domain d = Domain::torus(128, 128);

    auto one = ScalarField::sample(d, [](double, double) { return 1.0; });
    REQUIRE(integrate(one) == 1.0);

    auto cosx = ScalarField::sample(d, [](double x, double) { return std::cos(TAU * x); });
    REQUIRE(std::abs(integrate(cosx)) < 1e-12);
}

TEST_CASE("disc quadrature approximates pi") {
    Domain d = Domain::disc(512, 512);
    auto one = ScalarField::sample(d, [](double, double) { return 1.0; });
    REQUIRE(std::abs(integrate(one) - M_PI) < 1e-2);
}

TEST_CASE("integrate is linear") {
    Domain d = Domain::torus(64, 64);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        ScalarField f(d), g(d);
        double fmax = 0.0;
        for (std::size_t p = 0; p < d.size(); ++p) {
            f.values[p] = u(rng);
            g.values[p] = u(rng);
            fmax = std::max({fmax, std::abs(f.values[p]), std::abs(g.values[p])});
        }
        double a = u(rng) * 3, b = u(rng) * 3;
        ScalarField comb(d);
        for (std::size_t p = 0; p < d.size(); ++p)
            comb.values[p] = a * f.values[p] + b * g.values[p];
        double lhs = integrate(comb);
        double rhs = a * integrate(f) + b * integrate(g);
        REQUIRE(std::abs(lhs - rhs) <= 1e-12 * (std::abs(a) + std::abs(b)) * std::max(fmax, 1.0));
    }
}

TEST_CASE("integrate rejects non-finite data") {
    Domain d = Domain::torus(16, 16);
    ScalarField f(d);
    f.values[3] = std::numeric_limits<double>::quiet_NaN();
    REQUIRE_THROWS_AS(integrate(f), Error);
}

static GridMap translation(const Domain& d, double ax, double ay) {
    return GridMap::from_maps(
        d, [&](double x, double y) { return std::pair{x + ax, y + ay}; },
        [&](double x, double y) { return std::pair{x - ax, y - ay}; });
}

TEST_CASE("C0 distance of torus maps") {
    Domain d = Domain::torus(32, 32);
    GridMap id = GridMap::identity(d);

    REQUIRE(c0_distance_maps(id, id) == 0.0);
    REQUIRE(std::abs(c0_distance_maps(translation(d, 0.3, 0.0), id) - 0.3) < 1e-15);
    // quotient metric wraps: min(0.7, 0.3)
    REQUIRE(std::abs(c0_distance_maps(translation(d, 0.7, 0.0), id) - 0.3) < 1e-15);
}

TEST_CASE("torus distance is invariant under full-period shifts") {
    Domain d = Domain::torus(32, 32);
    GridMap id = GridMap::identity(d);
    double a = c0_distance_maps(translation(d, 0.3125, 0.0), id);   // dyadic shift
    double b = c0_distance_maps(translation(d, 1.3125, 0.0), id);
    REQUIRE(a == b);
}

TEST_CASE("C0 distance satisfies the triangle inequality") {
    Domain d = Domain::torus(24, 24);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (int trial = 0; trial < 20; ++trial) {
        GridMap a = translation(d, u(rng), u(rng));
        GridMap b = translation(d, u(rng), u(rng));
        GridMap c = translation(d, u(rng), u(rng));
        // perturb b into a generic (non-translation) map
        for (std::size_t p = 0; p < b.image_x.size(); ++p) {
            b.image_x[p] += 0.05 * std::sin(TAU * b.image_y[p]);
            b.image_y[p] += 0.05 * std::cos(TAU * b.image_x[p]);
        }
        double ab = c0_distance_maps(a, b), bc = c0_distance_maps(b, c),
               ac = c0_distance_maps(a, c);
        REQUIRE(ac <= ab + bc + 1e-15);
    }
}

TEST_CASE("dbar takes the worse of map and inverse distances") {
    Domain d = Domain::torus(32, 32);
    GridMap id = GridMap::identity(d);
    REQUIRE(dbar_maps(id, id) == 0.0);

    GridMap ta = translation(d, 0.25, 0.125);
    GridMap tb = translation(d, 0.125, 0.375);
    double fwd = c0_distance_maps(ta, tb);
    REQUIRE(std::abs(dbar_maps(ta, tb) - fwd) < 1e-15);  // inverse branch agrees
    REQUIRE(dbar_maps(ta, tb) == dbar_maps(tb, ta));

    GridMap no_inv(d);
    no_inv.image_x = id.image_x;
    no_inv.image_y = id.image_y;
    REQUIRE_THROWS_AS(dbar_maps(no_inv, id), Error);
}

TEST_CASE("domain mismatch is rejected") {
    GridMap a = GridMap::identity(Domain::torus(16, 16));
    GridMap b = GridMap::identity(Domain::torus(32, 32));
    REQUIRE_THROWS_AS(c0_distance_maps(a, b), Error);
}

TEST_CASE("grid resolution below 8 is rejected") {
    REQUIRE_THROWS_AS(Domain::torus(4, 16), Error);
}
