#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hamlab/flow.hpp"
#include "hamlab/gallery.hpp"
#include "hamlab/grid_map.hpp"
#include "hamlab/group.hpp"

using namespace hamlab;
static const double TAU = 2.0 * M_PI;

// smooth compactly supported twist profile and its Hamiltonian, closed form
namespace {
struct SmoothTwist {
    double R = 0.85, amp = 0.8;
    double rho(double r) const {
        if (r >= R) return 0.0;
        double u = 1.0 - (r / R) * (r / R);
        return amp * u * u * u * u * u;
    }
    double hamiltonian(double r) const {
        // int_r^R s rho(s) ds via substitution u = 1 - (s/R)^2
        if (r >= R) return 0.0;
        double u = 1.0 - (r / R) * (r / R);
        return amp * R * R / 12.0 * std::pow(u, 6.0);
    }
};
}  // namespace

TEST_CASE("vector field convention X_H = (dH/dy, -dH/dx)") {
    Domain d = Domain::torus(64, 64);
    auto zero = SampledHamiltonian::autonomous(d, 3, [](double, double) { return 0.0; });
    ScalarField vx, vy;
    vector_field(zero, 0.5, vx, vy);
    for (std::size_t p = 0; p < d.size(); ++p) {
        REQUIRE(vx.values[p] == 0.0);
        REQUIRE(vy.values[p] == 0.0);
    }

    auto shear = shear_hamiltonian(d, 3);
    vector_field(shear, 0.0, vx, vy);
    for (int i = 0; i < d.nx; ++i)
        for (int j = 0; j < d.ny; ++j) {
            REQUIRE(std::abs(vx.at(i, j) - std::cos(TAU * d.y_of(j))) < 1e-8);
            REQUIRE(std::abs(vy.at(i, j)) < 1e-12);
        }
}

TEST_CASE("radial Hamiltonians generate fields tangent to circles") {
    Domain d = Domain::disc(64, 64);
    SmoothTwist tw;
    auto H = SampledHamiltonian::autonomous(d, 3, [&](double x, double y) {
        return tw.hamiltonian(std::hypot(x, y));
    });
    ScalarField vx, vy;
    vector_field(H, 0.0, vx, vy);
    for (int i = 0; i < d.nx; ++i)
        for (int j = 0; j < d.ny; ++j) {
            if (!d.active(i, j)) continue;
            double x = d.x_of(i), y = d.y_of(j);
            REQUIRE(std::abs(vx.at(i, j) * x + vy.at(i, j) * y) < 1e-6);
        }
}

TEST_CASE("zero Hamiltonian flows to the identity") {
    Domain d = Domain::torus(32, 32);
    auto zero = SampledHamiltonian::autonomous(d, 5, [](double, double) { return 0.0; });
    FlowOptions o;
    o.steps = 16;
    FlowPath p = integrate_flow(zero, o);
    REQUIRE(c0_distance_maps(p.time_one(), GridMap::identity(d)) == 0.0);
    auto [dx, dy] = p.displacement(p.nt - 1, 3, 7);
    REQUIRE(dx == 0.0);
    REQUIRE(dy == 0.0);
}

TEST_CASE("shear flow matches the closed form to 1e-8") {
    Domain d = Domain::torus(128, 128);
    auto H = shear_hamiltonian(d, 21);
    FlowOptions o;
    o.steps = 100;
    FlowPath p = integrate_flow(H, o);
    double err = 0.0;
    for (int k = 0; k < p.nt; ++k) {
        double t = p.t_of(k);
        const GridMap& s = p.slices[k];
        for (int i = 0; i < d.nx; ++i)
            for (int j = 0; j < d.ny; ++j) {
                auto q = d.index(i, j);
                double ex = d.x_of(i) + t * std::cos(TAU * d.y_of(j));
                err = std::max(err, std::hypot(s.image_x[q] - ex, s.image_y[q] - d.y_of(j)));
            }
    }
    REQUIRE(err <= 1e-8);
    REQUIRE(p.inverse_audit <= 1e-6);
    REQUIRE(area_audit(p) <= 1e-4);
}

TEST_CASE("disc rotation matches the twist map to 1e-6") {
    Domain d = Domain::disc(128, 128);
    SmoothTwist tw;
    auto H = SampledHamiltonian::autonomous(d, 21, [&](double x, double y) {
        return tw.hamiltonian(std::hypot(x, y));
    });
    FlowOptions o;
    o.steps = 200;
    FlowPath p = integrate_flow(H, o);
    double err = 0.0;
    const GridMap& s = p.time_one();
    for (int i = 0; i < d.nx; ++i)
        for (int j = 0; j < d.ny; ++j) {
            if (!d.active(i, j)) continue;
            auto q = d.index(i, j);
            double x = d.x_of(i), y = d.y_of(j);
            double a = tw.rho(std::hypot(x, y));
            double ex = x * std::cos(a) - y * std::sin(a);
            double ey = x * std::sin(a) + y * std::cos(a);
            err = std::max(err, std::hypot(s.image_x[q] - ex, s.image_y[q] - ey));
        }
    REQUIRE(err <= 1e-6);
    REQUIRE(p.inverse_audit <= 1e-6);
    REQUIRE(area_audit(p) <= 1e-4);
}

TEST_CASE("flow property of autonomous Hamiltonians") {
    Domain d = Domain::torus(64, 64);
    auto H = seeded_hamiltonian(d, 9, /*seed=*/41, /*autonomous=*/true);
    FlowOptions o;
    o.steps = 256;
    FlowPath p = integrate_flow(H, o);
    // slice(3/4) should be slice(1/4) applied after slice(1/2)
    const GridMap& half = p.slices[4];
    const GridMap& quarter = p.slices[2];
    const GridMap& threequarter = p.slices[6];
    MapEvaluator eval(quarter);
    double err = 0.0;
    for (std::size_t q = 0; q < d.size(); ++q) {
        auto [cx, cy] = eval(half.image_x[q], half.image_y[q]);
        err = std::max(err, d.distance(cx, cy, threequarter.image_x[q], threequarter.image_y[q]));
    }
    REQUIRE(err < 2e-6);
}

TEST_CASE("energy conservation along autonomous flows") {
    Domain d = Domain::torus(64, 64);
    auto H = seeded_hamiltonian(d, 9, /*seed=*/17, /*autonomous=*/true);
    FlowOptions o;
    o.steps = 256;
    FlowPath p = integrate_flow(H, o);
    auto rolled = tan_map(H, p);
    double worst = 0.0;
    for (int k = 0; k < p.nt; ++k)
        for (std::size_t q = 0; q < d.size(); ++q)
            worst = std::max(worst, std::abs(rolled.slices[k][q] - H.slices[0][q]));
    REQUIRE(worst <= 1e-6);
}

TEST_CASE("min displacement finds fixed circles of the shear") {
    Domain d = Domain::torus(128, 128);
    auto H = shear_hamiltonian(d, 9);
    FlowOptions o;
    o.steps = 64;
    FlowPath p = integrate_flow(H, o);
    auto md = min_displacement(p.time_one());
    REQUIRE(md.value <= 1e-3);
    REQUIRE((std::abs(md.y - 0.25) < 2e-2 || std::abs(md.y - 0.75) < 2e-2));
}

TEST_CASE("min displacement of a translation is the translation distance") {
    Domain d = Domain::torus(64, 64);
    FlowPath p = translation_path(d, 5, 0.3, 0.0);
    auto md = min_displacement(p.time_one());
    REQUIRE(std::abs(md.value - 0.3) < 1e-12);

    auto idm = min_displacement(GridMap::identity(d));
    REQUIRE(idm.value == 0.0);
}

TEST_CASE("time step too coarse for unwrapping is detected") {
    Domain d = Domain::torus(32, 32);
    // speed ~ 3 with a single unit step moves points most of a period
    auto H = SampledHamiltonian::autonomous(d, 2, [](double, double y) {
        return 3.0 * std::sin(TAU * y) / TAU;
    });
    FlowOptions o;
    o.steps = 1;
    o.inverses = false;
    o.jacobians = false;
    REQUIRE_THROWS_WITH(integrate_flow(H, o), "time step too coarse for unwrapping");
}

TEST_CASE("integrator order is four on the twist family") {
    Domain d = Domain::disc(96, 96);
    SmoothTwist tw;
    tw.amp = 6.0;
    auto H = SampledHamiltonian::autonomous(d, 9, [&](double x, double y) {
        return tw.hamiltonian(std::hypot(x, y));
    });
    auto max_err = [&](int steps) {
        FlowOptions o;
        o.steps = steps;
        o.inverses = false;
        o.jacobians = false;
        FlowPath p = integrate_flow(H, o);
        const GridMap& s = p.time_one();
        double err = 0.0;
        for (int i = 0; i < d.nx; ++i)
            for (int j = 0; j < d.ny; ++j) {
                if (!d.active(i, j)) continue;
                auto q = d.index(i, j);
                double x = d.x_of(i), y = d.y_of(j);
                double a = tw.rho(std::hypot(x, y));
                err = std::max(err,
                               std::hypot(s.image_x[q] - (x * std::cos(a) - y * std::sin(a)),
                                          s.image_y[q] - (x * std::sin(a) + y * std::cos(a))));
            }
        return err;
    };
    REQUIRE(max_err(16) / max_err(32) >= 8.0);
}
