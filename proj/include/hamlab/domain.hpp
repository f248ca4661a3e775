#ifndef HAMLAB_DOMAIN_HPP
#define HAMLAB_DOMAIN_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hamlab/errors.hpp"

namespace hamlab {

enum class SurfaceKind { Torus2, Disc2 };

inline std::string to_string(SurfaceKind k) {
    return k == SurfaceKind::Torus2 ? "torus2" : "disc2";
}

/// One of the two model surfaces with its uniform sample grid.
///
/// Torus2 is the unit square [0,1)^2 with periodic wrapping and Liouville
/// measure 1; grid nodes sit at (i/nx, j/ny).  Disc2 is the closed unit
/// disc sampled at the cell centers of a Cartesian grid over [-1,1]^2;
/// nodes outside the disc are inactive and excluded from every reduction.
/// Fields and flows on the disc must vanish for radius > 1 - support_margin.
struct Domain {
    SurfaceKind kind = SurfaceKind::Torus2;
    int nx = 128;
    int ny = 128;
    double support_margin = 0.0;

    Domain() = default;
    Domain(SurfaceKind k, int nx_, int ny_, double margin = 0.0)
        : kind(k), nx(nx_), ny(ny_), support_margin(margin) {
        if (nx < 8 || ny < 8) fail(ErrorKind::Usage, "grid resolution must be at least 8x8");
        if (margin < 0.0) fail(ErrorKind::Usage, "support_margin must be nonnegative");
    }

    static Domain torus(int nx, int ny) { return Domain(SurfaceKind::Torus2, nx, ny); }
    static Domain disc(int nx, int ny, double margin = 0.05) {
        return Domain(SurfaceKind::Disc2, nx, ny, margin);
    }

    bool is_torus() const { return kind == SurfaceKind::Torus2; }

    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * ny + j; }

    double hx() const { return is_torus() ? 1.0 / nx : 2.0 / nx; }
    double hy() const { return is_torus() ? 1.0 / ny : 2.0 / ny; }
    double cell_area() const { return hx() * hy(); }

    double x_of(int i) const { return is_torus() ? double(i) / nx : -1.0 + (i + 0.5) * hx(); }
    double y_of(int j) const { return is_torus() ? double(j) / ny : -1.0 + (j + 0.5) * hy(); }

    bool active(int i, int j) const {
        if (is_torus()) return true;
        double x = x_of(i), y = y_of(j);
        return x * x + y * y <= 1.0;
    }
    bool active(std::size_t idx) const {
        return active(static_cast<int>(idx / ny), static_cast<int>(idx % ny));
    }

    double support_radius() const { return 1.0 - support_margin; }

    bool same_grid(const Domain& o) const {
        return kind == o.kind && nx == o.nx && ny == o.ny;
    }
    void require_same_grid(const Domain& o, const char* ctx) const {
        if (!same_grid(o))
            fail(ErrorKind::DomainMismatch, std::string(ctx) + ": domains differ");
    }

    /// Distance between two points of the surface.  On the torus this is
    /// the flat quotient metric (per-coordinate min(|d|, 1-|d|)); on the
    /// disc it is Euclidean.
    double distance(double ax, double ay, double bx, double by) const {
        double dx = ax - bx, dy = ay - by;
        if (is_torus()) {
            dx -= std::round(dx);
            dy -= std::round(dy);
        }
        return std::sqrt(dx * dx + dy * dy);
    }
};

/// Fixed-order pairwise (tree) summation; deterministic and more accurate
/// than a running sum.
inline double tree_sum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    std::size_t half = n / 2;
    return tree_sum(v.subspan(0, half)) + tree_sum(v.subspan(half));
}

/// Scalar samples on a Domain grid.  Inactive disc nodes carry value 0 and
/// never enter a reduction.
struct ScalarField {
    Domain domain;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Domain& d, double fill = 0.0)
        : domain(d), values(d.size(), fill) {}

    double& at(int i, int j) { return values[domain.index(i, j)]; }
    double at(int i, int j) const { return values[domain.index(i, j)]; }

    template <typename Fn>
    static ScalarField sample(const Domain& d, Fn&& fn) {
        ScalarField f(d);
        for (int i = 0; i < d.nx; ++i)
            for (int j = 0; j < d.ny; ++j)
                if (d.active(i, j)) f.at(i, j) = fn(d.x_of(i), d.y_of(j));
        return f;
    }
};

/// Quadrature of f against the Liouville measure: a uniform Riemann sum on
/// the torus (exact for band-limited trigonometric data) and a uniform
/// cell sum over active cells on the disc.
inline double integrate(const ScalarField& f) {
    const Domain& d = f.domain;
    std::vector<double> terms;
    terms.reserve(d.size());
    for (int i = 0; i < d.nx; ++i)
        for (int j = 0; j < d.ny; ++j) {
            if (!d.active(i, j)) continue;
            double v = f.at(i, j);
            if (!std::isfinite(v)) fail(ErrorKind::NonFinite, "non-finite field");
            terms.push_back(v);
        }
    return tree_sum(terms) * d.cell_area();
}

/// Total Liouville measure of the sampled domain (1 on the torus, ~pi on
/// the disc up to cell-counting error).
inline double measure(const Domain& d) {
    std::size_t count = 0;
    for (int i = 0; i < d.nx; ++i)
        for (int j = 0; j < d.ny; ++j)
            if (d.active(i, j)) ++count;
    return double(count) * d.cell_area();
}

inline double field_mean(const ScalarField& f) { return integrate(f) / measure(f.domain); }

} // namespace hamlab

#endif
