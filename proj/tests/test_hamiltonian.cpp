#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hamlab/hamiltonian.hpp"

using namespace hamlab;
static const double TAU = 2.0 * M_PI;

TEST_CASE("normalize subtracts slice means on the torus") {
    Domain d = Domain::torus(64, 64);

    auto cosx = SampledHamiltonian::autonomous(d, 5, [](double x, double) {
        return std::cos(TAU * x);
    });
    auto n1 = normalize(cosx);
    for (std::size_t p = 0; p < n1.slices[0].size(); ++p)
        REQUIRE(std::abs(n1.slices[0][p] - cosx.slices[0][p]) < 1e-12);

    auto shifted = SampledHamiltonian::autonomous(d, 5, [](double x, double) {
        return 1.0 + std::cos(TAU * x);
    });
    auto n2 = normalize(shifted);
    for (std::size_t p = 0; p < n2.slices[0].size(); ++p)
        REQUIRE(std::abs(n2.slices[0][p] - cosx.slices[0][p]) < 1e-12);

    auto constant = SampledHamiltonian::autonomous(d, 5, [](double, double) { return 3.7; });
    auto n3 = normalize(constant);
    REQUIRE(c0_norm(n3) < 1e-12);
    check_normalized(n3);
}

TEST_CASE("normalize rejects the disc") {
    Domain d = Domain::disc(32, 32);
    SampledHamiltonian h(d, 3);
    REQUIRE_THROWS_WITH(normalize(h), "open case uses compact support, not normalization");
}

TEST_CASE("disc Hamiltonians must vanish outside the support radius") {
    Domain d = Domain::disc(32, 32, 0.05);
    REQUIRE_THROWS_AS(SampledHamiltonian::autonomous(d, 3, [](double, double) { return 1.0; }),
                      Error);
}

TEST_CASE("oscillation of slices") {
    Domain d = Domain::torus(128, 128);
    auto zero = SampledHamiltonian::autonomous(d, 4, [](double, double) { return 0.0; });
    REQUIRE(osc(zero, 0) == 0.0);

    auto cosx = SampledHamiltonian::autonomous(d, 4, [](double x, double) {
        return std::cos(TAU * x);
    });
    REQUIRE(std::abs(osc(cosx, 0) - 2.0) < 1e-3);

    auto ramp = SampledHamiltonian::sample(d, 5, [](double t, double x, double) {
        return t * std::cos(TAU * x);
    });
    REQUIRE(std::abs(osc(ramp, 2) - 1.0) < 1e-3);  // t = 0.5
}

TEST_CASE("hofer norm: trapezoid of the oscillation") {
    Domain d = Domain::torus(128, 128);
    auto zero = SampledHamiltonian::autonomous(d, 8, [](double, double) { return 0.0; });
    REQUIRE(hofer_norm(zero) == 0.0);

    auto cosx = SampledHamiltonian::autonomous(d, 8, [](double x, double) {
        return std::cos(TAU * x);
    });
    REQUIRE(std::abs(hofer_norm(cosx) - 2.0) < 1e-3);

    auto ramp = SampledHamiltonian::sample(d, 101, [](double t, double x, double) {
        return t * std::cos(TAU * x);
    });
    REQUIRE(std::abs(hofer_norm(ramp) - 1.0) < 1e-3);
    REQUIRE(std::abs(linfty_norm(ramp) - 2.0) < 1e-3);
}

TEST_CASE("norm invariants on seeded data") {
    Domain d = Domain::torus(48, 48);
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        SampledHamiltonian H(d, 9), K(d, 9);
        for (int k = 0; k < 9; ++k)
            for (std::size_t p = 0; p < H.slices[k].size(); ++p) {
                H.slices[k][p] = u(rng);
                K.slices[k][p] = u(rng);
            }
        double c = u(rng) * 4;

        REQUIRE(hofer_norm(H) == hofer_norm(linear_combination(-1.0, H, 0.0, H)));
        REQUIRE(std::abs(hofer_norm(linear_combination(c, H, 0.0, H)) -
                         std::abs(c) * hofer_norm(H)) < 1e-12 * (1 + std::abs(c)));
        REQUIRE(hofer_norm(linear_combination(1.0, H, 1.0, K)) <=
                hofer_norm(H) + hofer_norm(K) + 1e-12);
        REQUIRE(hofer_norm(H) <= linfty_norm(H) + 1e-12);
    }
}

TEST_CASE("time-independent Hamiltonians: norm equals slice oscillation") {
    Domain d = Domain::torus(64, 64);
    auto H = SampledHamiltonian::autonomous(d, 33, [](double x, double y) {
        return std::sin(TAU * x) + 0.5 * std::cos(TAU * y);
    });
    REQUIRE(std::abs(hofer_norm(H) - osc(H, 0)) < 1e-12);
}

TEST_CASE("time Lipschitz surrogate") {
    Domain d = Domain::torus(32, 32);
    auto H = SampledHamiltonian::sample(d, 65, [](double t, double x, double) {
        return 3.0 * t * std::cos(TAU * x);
    });
    REQUIRE(std::abs(time_lipschitz(H) - 3.0) < 1e-9);
}
