#ifndef HAMLAB_INVARIANTS_HPP
#define HAMLAB_INVARIANTS_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "hamlab/flow.hpp"
#include "hamlab/interpolate.hpp"

namespace hamlab {

/// The two admitted circle-valued maps f: T^2 -> R/Z, the coordinate
/// projections; they span Hom([M,S^1],R) for the torus.
enum class CircleMap { XCoordinate, YCoordinate };

namespace detail {

inline void require_torus_path(const FlowPath& path, const char* ctx) {
    if (!path.domain.is_torus())
        fail(ErrorKind::Usage, std::string(ctx) + ": torus paths only");
}

// unwrapping validity: successive slices must move every node less than
// half a period per output interval
inline void require_unwrapped(const FlowPath& path) {
    for (int k = 0; k + 1 < path.nt; ++k) {
        const auto& a = path.slices[k];
        const auto& b = path.slices[k + 1];
        for (std::size_t p = 0; p < a.image_x.size(); ++p)
            if (std::abs(b.image_x[p] - a.image_x[p]) >= 0.5 ||
                std::abs(b.image_y[p] - a.image_y[p]) >= 0.5)
                fail(ErrorKind::Contract, "unwrapping invalid: slice jump of half a period");
    }
}

} // namespace detail

/// Mass flow of the path against a coordinate projection: the Liouville
/// integral of the unwrapped (zero at t=0) displacement of the chosen
/// coordinate at t = 1.  For the x-projection this is the mean x-winding,
/// i.e. the mean rotation vector component.
inline double mass_flow(const FlowPath& path, CircleMap f) {
    detail::require_torus_path(path, "mass_flow");
    detail::require_unwrapped(path);
    const Domain& d = path.domain;
    ScalarField lift(d);
    const GridMap& last = path.slices.back();
    for (int i = 0; i < d.nx; ++i)
        for (int j = 0; j < d.ny; ++j) {
            auto p = d.index(i, j);
            lift.at(i, j) = (f == CircleMap::XCoordinate)
                                ? last.image_x[p] - d.x_of(i)
                                : last.image_y[p] - d.y_of(j);
        }
    return integrate(lift);
}

inline std::pair<double, double> rotation_vector(const FlowPath& path) {
    return {mass_flow(path, CircleMap::XCoordinate),
            mass_flow(path, CircleMap::YCoordinate)};
}

/// Symplectic flux of the path: the velocity field c-dot(t) is estimated
/// by time differences of the slices evaluated through the inverse slices,
/// contracted into omega, and the resulting time-averaged 1-form is paired
/// with the two fundamental cycles.  The sign convention is fixed so that
/// the translation by (a,b) returns (a,b), matching rotation_vector
/// componentwise (the Poincare-duality normalization).
inline std::pair<double, double> flux(const FlowPath& path, int degree = 6) {
    detail::require_torus_path(path, "flux");
    const Domain& d = path.domain;
    const int nt = path.nt;
    const std::size_t n = d.size();
    Interp interp(d, degree);

    // mean Eulerian velocity at output time k, via (d lambda/dt) o lambda^{-1}
    std::vector<double> mean_u(nt, 0.0), mean_v(nt, 0.0);
    const double dt = 1.0 / (nt - 1);
    std::vector<double> dfx(n), dfy(n);
    for (int k = 0; k < nt; ++k) {
        // time difference of the slice images (displacement form)
        double denom;
        const GridMap *hi, *lo;
        if (k == 0) {
            hi = &path.slices[1]; lo = &path.slices[0]; denom = dt;
        } else if (k == nt - 1) {
            hi = &path.slices[nt - 1]; lo = &path.slices[nt - 2]; denom = dt;
        } else {
            hi = &path.slices[k + 1]; lo = &path.slices[k - 1]; denom = 2 * dt;
        }
        for (std::size_t p = 0; p < n; ++p) {
            dfx[p] = (hi->image_x[p] - lo->image_x[p]) / denom;
            dfy[p] = (hi->image_y[p] - lo->image_y[p]) / denom;
        }
        const GridMap& s = path.slices[k];
        if (!s.has_inverse()) fail(ErrorKind::Usage, "inverse not available");
        std::vector<double> u(n, 0.0), v(n, 0.0);
        parallel_for_blocks(n, [&](std::size_t b, std::size_t e) {
            for (std::size_t p = b; p < e; ++p) {
                double zx = s.inv_x[p], zy = s.inv_y[p];
                u[p] = interp.value(dfx, zx, zy);
                v[p] = interp.value(dfy, zx, zy);
            }
        });
        ScalarField fu(d), fv(d);
        fu.values = std::move(u);
        fv.values = std::move(v);
        mean_u[k] = integrate(fu);
        mean_v[k] = integrate(fv);
    }

    // trapezoid in t; the 1-form iota_c omega = u dy - v dx paired with the
    // y- and x-cycles gives (mean u, mean v) under the fixed convention
    auto trapz = [&](const std::vector<double>& g) {
        double sum = 0.0;
        for (int k = 0; k + 1 < nt; ++k) sum += 0.5 * (g[k] + g[k + 1]);
        return sum * dt;
    };
    double fx = trapz(mean_u);
    double fy = trapz(mean_v);

    // noise control: the end-point one-sided differences degrade first
    // when the time sampling is too coarse; compare with a stride-2 pass
    if (nt >= 5) {
        std::vector<double> cu, cv;
        for (int k = 0; k < nt; k += 2) {
            cu.push_back(mean_u[k]);
            cv.push_back(mean_v[k]);
        }
        auto trapz2 = [&](const std::vector<double>& g) {
            double sum = 0.0;
            for (std::size_t k = 0; k + 1 < g.size(); ++k) sum += 0.5 * (g[k] + g[k + 1]);
            return sum * 2 * dt;
        };
        double fx2 = trapz2(cu), fy2 = trapz2(cv);
        double noise = std::max(std::abs(fx - fx2), std::abs(fy - fy2));
        if (noise > std::max(1e-3, 0.05 * std::max(std::abs(fx), std::abs(fy))))
            fail(ErrorKind::Resolution, "refine time sampling");
    }
    return {fx, fy};
}

/// Max componentwise discrepancy between flux and the rotation vector
/// under the fixed duality convention.
inline double duality_check(const FlowPath& path) {
    auto [rx, ry] = rotation_vector(path);
    auto [fx, fy] = flux(path);
    return std::max(std::abs(fx - rx), std::abs(fy - ry));
}

} // namespace hamlab

#endif
