#ifndef HAMLAB_GRID_MAP_HPP
#define HAMLAB_GRID_MAP_HPP

#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "hamlab/domain.hpp"
#include "hamlab/interpolate.hpp"

namespace hamlab {

/// A sampled map of the surface: per grid node the image point, stored
/// unwrapped on the torus (the fractional part is the surface point, the
/// integer part keeps winding bookkeeping).  Inverse images are optional;
/// flow slices carry them, file-loaded maps may not.
struct GridMap {
    Domain domain;
    std::vector<double> image_x, image_y;
    std::vector<double> inv_x, inv_y;          // empty when no inverse is attached
    std::vector<double> jacobian_det;          // empty until filled

    GridMap() = default;
    explicit GridMap(const Domain& d) : domain(d) {}

    static GridMap identity(const Domain& d) {
        GridMap m(d);
        m.image_x.resize(d.size());
        m.image_y.resize(d.size());
        for (int i = 0; i < d.nx; ++i)
            for (int j = 0; j < d.ny; ++j) {
                m.image_x[d.index(i, j)] = d.x_of(i);
                m.image_y[d.index(i, j)] = d.y_of(j);
            }
        m.inv_x = m.image_x;
        m.inv_y = m.image_y;
        return m;
    }

    template <typename Fwd, typename Inv>  // closed-form map and inverse, unwrapped images
    static GridMap from_maps(const Domain& d, Fwd&& fwd, Inv&& inv) {
        GridMap m = identity(d);
        for (int i = 0; i < d.nx; ++i)
            for (int j = 0; j < d.ny; ++j) {
                auto p = d.index(i, j);
                double x = d.x_of(i), y = d.y_of(j);
                auto [fx, fy] = fwd(x, y);
                auto [gx, gy] = inv(x, y);
                m.image_x[p] = fx; m.image_y[p] = fy;
                m.inv_x[p] = gx;   m.inv_y[p] = gy;
            }
        return m;
    }

    bool has_inverse() const { return !inv_x.empty(); }

    // displacement arrays (periodic in the argument on the torus, zero
    // outside the support on the disc) -- the interpolation-safe form
    std::vector<double> displacement_x() const {
        std::vector<double> d(image_x.size());
        for (int i = 0; i < domain.nx; ++i)
            for (int j = 0; j < domain.ny; ++j) {
                auto p = domain.index(i, j);
                d[p] = image_x[p] - domain.x_of(i);
            }
        return d;
    }
    std::vector<double> displacement_y() const {
        std::vector<double> d(image_y.size());
        for (int i = 0; i < domain.nx; ++i)
            for (int j = 0; j < domain.ny; ++j) {
                auto p = domain.index(i, j);
                d[p] = image_y[p] - domain.y_of(j);
            }
        return d;
    }
};

/// Evaluates a sampled map at an arbitrary point via interpolation of its
/// displacement field, preserving the torus covariance phi(x+m) = phi(x)+m.
class MapEvaluator {
public:
    MapEvaluator(const GridMap& m, int degree = 6, bool inverse = false)
        : dom_(m.domain), interp_(dom_, degree) {
        const auto& ix = inverse ? m.inv_x : m.image_x;
        const auto& iy = inverse ? m.inv_y : m.image_y;
        if (ix.empty()) fail(ErrorKind::Usage, "inverse not available");
        dx_.resize(ix.size());
        dy_.resize(iy.size());
        for (int i = 0; i < dom_.nx; ++i)
            for (int j = 0; j < dom_.ny; ++j) {
                auto p = dom_.index(i, j);
                dx_[p] = ix[p] - dom_.x_of(i);
                dy_[p] = iy[p] - dom_.y_of(j);
            }
    }

    std::pair<double, double> operator()(double x, double y) const {
        return {x + interp_.value(dx_, x, y), y + interp_.value(dy_, x, y)};
    }

private:
    Domain dom_;
    Interp interp_;
    std::vector<double> dx_, dy_;
};

/// C^0 distance of two sampled maps: the grid maximum of the surface
/// distance of image points.  `min_radius` excludes the unresolved disc
/// core when comparing maps built from singular profiles.
inline double c0_distance_maps(const GridMap& a, const GridMap& b, double min_radius = 0.0) {
    a.domain.require_same_grid(b.domain, "c0_distance_maps");
    const Domain& d = a.domain;
    double m = 0.0;
    for (int i = 0; i < d.nx; ++i)
        for (int j = 0; j < d.ny; ++j) {
            if (!d.active(i, j)) continue;
            if (min_radius > 0.0 && !d.is_torus()) {
                double x = d.x_of(i), y = d.y_of(j);
                if (x * x + y * y < min_radius * min_radius) continue;
            }
            auto p = d.index(i, j);
            m = std::max(m, d.distance(a.image_x[p], a.image_y[p], b.image_x[p], b.image_y[p]));
        }
    return m;
}

/// dbar of Eq.-(2.1) type: max of the C^0 distances of the maps and of
/// their inverses.
inline double dbar_maps(const GridMap& a, const GridMap& b, double min_radius = 0.0) {
    if (!a.has_inverse() || !b.has_inverse())
        fail(ErrorKind::Usage, "inverse not available");
    GridMap ai(a.domain), bi(b.domain);
    ai.image_x = a.inv_x; ai.image_y = a.inv_y;
    bi.image_x = b.inv_x; bi.image_y = b.inv_y;
    return std::max(c0_distance_maps(a, b, min_radius), c0_distance_maps(ai, bi, min_radius));
}

/// Fills jacobian_det by 6th-order centered differences of the sampled map
/// (torus: periodic wrap; disc: identity extension beyond the grid).
inline void fill_jacobian(GridMap& m) {
    const Domain& d = m.domain;
    m.jacobian_det.assign(d.size(), 1.0);
    static const std::array<double, 3> c = {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
    auto dispx = m.displacement_x();
    auto dispy = m.displacement_y();
    auto sample = [&](const std::vector<double>& f, int i, int j) -> double {
        if (d.is_torus()) {
            i = (i % d.nx + d.nx) % d.nx;
            j = (j % d.ny + d.ny) % d.ny;
            return f[d.index(i, j)];
        }
        if (i < 0 || i >= d.nx || j < 0 || j >= d.ny) return 0.0;  // identity outside
        return f[d.index(i, j)];
    };
    for (int i = 0; i < d.nx; ++i)
        for (int j = 0; j < d.ny; ++j) {
            double ax = 0, ay = 0, bx = 0, by = 0;
            for (int s = 1; s <= 3; ++s) {
                ax += c[s - 1] * (sample(dispx, i + s, j) - sample(dispx, i - s, j));
                ay += c[s - 1] * (sample(dispx, i, j + s) - sample(dispx, i, j - s));
                bx += c[s - 1] * (sample(dispy, i + s, j) - sample(dispy, i - s, j));
                by += c[s - 1] * (sample(dispy, i, j + s) - sample(dispy, i, j - s));
            }
            ax /= d.hx(); ay /= d.hy(); bx /= d.hx(); by /= d.hy();
            // D(phi) = I + D(displacement)
            m.jacobian_det[d.index(i, j)] = (1.0 + ax) * (1.0 + by) - ay * bx;
        }
}

struct MinDisplacement {
    double value = 0.0;
    double x = 0.0, y = 0.0;
};

/// Minimum of d(x, phi(x)) over the grid, sharpened by a few Newton steps
/// on the interpolated displacement field so that a transverse fixed point
/// inside a cell is still reported at ~interpolation accuracy.
inline MinDisplacement min_displacement(const GridMap& m) {
    const Domain& d = m.domain;
    MinDisplacement best;
    best.value = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d.nx; ++i)
        for (int j = 0; j < d.ny; ++j) {
            if (!d.active(i, j)) continue;
            auto p = d.index(i, j);
            double x = d.x_of(i), y = d.y_of(j);
            double v = d.distance(m.image_x[p], m.image_y[p], x, y);
            if (v < best.value) best = {v, x, y};
        }

    // local refinement; falls back to the grid point when it does not help
    auto dispx = m.displacement_x();
    auto dispy = m.displacement_y();
    Interp interp(d, 6);
    auto disp_at = [&](double x, double y, double& gx, double& gy) {
        gx = interp.value(dispx, x, y);
        gy = interp.value(dispy, x, y);
        if (d.is_torus()) {
            gx -= std::round(gx);
            gy -= std::round(gy);
        }
        return std::sqrt(gx * gx + gy * gy);
    };
    double x = best.x, y = best.y;
    double gx, gy;
    double cur = disp_at(x, y, gx, gy);
    const double h = 1e-5;
    for (int it = 0; it < 30 && cur > 1e-13; ++it) {
        // Newton step on g(x) = phi(x) - x with a finite-difference Jacobian
        double g1x, g1y, g2x, g2y, tx, ty;
        disp_at(x + h, y, g1x, g1y);
        disp_at(x - h, y, tx, ty);
        double j11 = (g1x - tx) / (2 * h), j21 = (g1y - ty) / (2 * h);
        disp_at(x, y + h, g2x, g2y);
        disp_at(x, y - h, tx, ty);
        double j12 = (g2x - tx) / (2 * h), j22 = (g2y - ty) / (2 * h);
        double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-12) break;
        double sx = (-gx * j22 + gy * j12) / det;
        double sy = (-j11 * gy + j21 * gx) / det;
        double step = std::sqrt(sx * sx + sy * sy);
        if (step > 2.0 * std::max(d.hx(), d.hy())) break;  // leaving the cell: not a root
        double nx_ = x + sx, ny_ = y + sy;
        if (!d.is_torus() && nx_ * nx_ + ny_ * ny_ > 1.0) break;
        double ngx, ngy;
        double nv = disp_at(nx_, ny_, ngx, ngy);
        if (!(nv < cur)) break;
        x = nx_; y = ny_; cur = nv; gx = ngx; gy = ngy;
    }
    if (cur < best.value) {
        if (d.is_torus()) {
            x -= std::floor(x);
            y -= std::floor(y);
        }
        best = {cur, x, y};
    }
    return best;
}

} // namespace hamlab

#endif
