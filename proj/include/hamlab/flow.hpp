#ifndef HAMLAB_FLOW_HPP
#define HAMLAB_FLOW_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "hamlab/grid_map.hpp"
#include "hamlab/hamiltonian.hpp"
#include "hamlab/interpolate.hpp"
#include "hamlab/parallel.hpp"

namespace hamlab {

/// Hamiltonian vector field of a sampled H, convention X_H . omega = dH
/// with omega = dx ^ dy, i.e. X_H = (dH/dy, -dH/dx).  Slices are blended
/// linearly in t; spatial derivatives come from the Lagrange interpolant.
class VectorField {
public:
    VectorField(const SampledHamiltonian& h, int degree = 6)
        : ham_(&h), interp_(h.domain, degree),
          autonomous_(h.is_autonomous()), blended_(h.domain.size()) {}

    /// Prepares the spatial slice at time t (one O(grid) blend shared by
    /// every point query at this time).
    void set_time(double t) {
        if (autonomous_) return;
        double u = t * (ham_->nt - 1);
        int k = static_cast<int>(std::floor(u));
        if (k < 0) k = 0;
        if (k > ham_->nt - 2) k = ham_->nt - 2;
        double w = u - k;
        const auto& a = ham_->slices[k];
        const auto& b = ham_->slices[k + 1];
        for (std::size_t p = 0; p < blended_.size(); ++p)
            blended_[p] = (1.0 - w) * a[p] + w * b[p];
    }

    void eval(double x, double y, double& vx, double& vy) const {
        double hx_, hy_;
        const std::vector<double>& s = autonomous_ ? ham_->slices[0] : blended_;
        interp_.gradient(s, x, y, hx_, hy_);
        vx = hy_;
        vy = -hx_;
    }

    const Domain& domain() const { return ham_->domain; }

private:
    const SampledHamiltonian* ham_;
    Interp interp_;
    bool autonomous_;
    std::vector<double> blended_;
};

/// Samples X_H(t, .) on the grid (diagnostic surface of the field builder).
inline void vector_field(const SampledHamiltonian& h, double t,
                         ScalarField& vx, ScalarField& vy, int degree = 6) {
    VectorField field(h, degree);
    field.set_time(t);
    const Domain& d = h.domain;
    vx = ScalarField(d);
    vy = ScalarField(d);
    for (int i = 0; i < d.nx; ++i)
        for (int j = 0; j < d.ny; ++j) {
            if (!d.active(i, j)) continue;
            field.eval(d.x_of(i), d.y_of(j), vx.at(i, j), vy.at(i, j));
        }
}

struct FlowOptions {
    int steps = 1000;       // rounded up to a multiple of nt-1
    int degree = 6;         // interpolation degree for field and map evaluation
    bool inverses = true;
    bool jacobians = true;
};

/// A sampled isotopy t -> lambda(t): slice 0 is the identity, torus images
/// are unwrapped, inverse slices are integrated through the time-reversed
/// field and audited against the forward slices.
struct FlowPath {
    Domain domain;
    int nt = 0;
    std::vector<GridMap> slices;
    double inverse_audit = 0.0;   // max C0 distance of slice o inverse_slice from id

    double t_of(int k) const { return double(k) / (nt - 1); }

    const GridMap& time_one() const { return slices.back(); }

    /// Unwrapped displacement of node p at output time k.
    std::pair<double, double> displacement(int k, int i, int j) const {
        auto p = domain.index(i, j);
        return {slices[k].image_x[p] - domain.x_of(i),
                slices[k].image_y[p] - domain.y_of(j)};
    }

    /// The inverse path t -> lambda(t)^{-1} (slice/inverse arrays swapped).
    FlowPath inverse_path() const {
        FlowPath out;
        out.domain = domain;
        out.nt = nt;
        out.inverse_audit = inverse_audit;
        out.slices.reserve(slices.size());
        for (const auto& s : slices) {
            GridMap m(domain);
            m.image_x = s.inv_x;
            m.image_y = s.inv_y;
            m.inv_x = s.image_x;
            m.inv_y = s.image_y;
            out.slices.push_back(std::move(m));
        }
        return out;
    }

    /// Slice at arbitrary time by linear blend of neighbouring slices.
    GridMap slice_at(double t) const {
        double u = t * (nt - 1);
        int k = static_cast<int>(std::floor(u));
        if (k < 0) k = 0;
        if (k > nt - 2) k = nt - 2;
        double w = u - k;
        if (w == 0.0) return slices[k];
        GridMap m(domain);
        auto blend = [&](const std::vector<double>& a, const std::vector<double>& b) {
            std::vector<double> r(a.size());
            for (std::size_t p = 0; p < a.size(); ++p) r[p] = (1.0 - w) * a[p] + w * b[p];
            return r;
        };
        m.image_x = blend(slices[k].image_x, slices[k + 1].image_x);
        m.image_y = blend(slices[k].image_y, slices[k + 1].image_y);
        if (slices[k].has_inverse() && slices[k + 1].has_inverse()) {
            m.inv_x = blend(slices[k].inv_x, slices[k + 1].inv_x);
            m.inv_y = blend(slices[k].inv_y, slices[k + 1].inv_y);
        }
        return m;
    }

    template <typename Fwd, typename Inv>  // fn(t,x,y) -> unwrapped image
    static FlowPath from_isotopy(const Domain& d, int nt, Fwd&& fwd, Inv&& inv) {
        FlowPath path;
        path.domain = d;
        path.nt = nt;
        path.slices.reserve(nt);
        for (int k = 0; k < nt; ++k) {
            double t = double(k) / (nt - 1);
            path.slices.push_back(GridMap::from_maps(
                d, [&](double x, double y) { return fwd(t, x, y); },
                [&](double x, double y) { return inv(t, x, y); }));
            fill_jacobian(path.slices.back());
        }
        return path;
    }
};

namespace detail {

// Advances points [b,e) through m RK4 sub-steps of step h.  stages[2s],
// stages[2s+1], stages[2s+2] hold the blended H-slices at the three stage
// times of sub-step s.  Returns the max per-sub-step coordinate change.
template <int PT>
double advance_points(const Interp& interp, const std::vector<const double*>& stages,
                      std::size_t slice_len, int m, double h,
                      double* px, double* py, std::size_t b, std::size_t e) {
    double mx = 0.0;
    for (std::size_t p = b; p < e; ++p) {
        double x = px[p], y = py[p];
        for (int s = 0; s < m; ++s) {
            std::span<const double> fa(stages[2 * s], slice_len);
            std::span<const double> fb(stages[2 * s + 1], slice_len);
            std::span<const double> fc(stages[2 * s + 2], slice_len);
            double gx, gy;
            interp.gradient_t<PT>(fa, x, y, gx, gy);
            double k1x = gy, k1y = -gx;
            interp.gradient_t<PT>(fb, x + 0.5 * h * k1x, y + 0.5 * h * k1y, gx, gy);
            double k2x = gy, k2y = -gx;
            interp.gradient_t<PT>(fb, x + 0.5 * h * k2x, y + 0.5 * h * k2y, gx, gy);
            double k3x = gy, k3y = -gx;
            interp.gradient_t<PT>(fc, x + h * k3x, y + h * k3y, gx, gy);
            double k4x = gy, k4y = -gx;
            double dx = h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
            double dy = h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
            x += dx;
            y += dy;
            mx = std::max(mx, std::max(std::abs(dx), std::abs(dy)));
        }
        px[p] = x;
        py[p] = y;
    }
    return mx;
}

inline double advance_points_dispatch(int points, const Interp& interp,
                                      const std::vector<const double*>& stages,
                                      std::size_t slice_len, int m, double h,
                                      double* px, double* py, std::size_t b, std::size_t e) {
    switch (points) {
        case 7: return advance_points<7>(interp, stages, slice_len, m, h, px, py, b, e);
        case 5: return advance_points<5>(interp, stages, slice_len, m, h, px, py, b, e);
        case 2: return advance_points<2>(interp, stages, slice_len, m, h, px, py, b, e);
        default: return advance_points<0>(interp, stages, slice_len, m, h, px, py, b, e);
    }
}

} // namespace detail

/// Integrates the isotopy of H with a classical explicit 4th-order
/// one-step method at fixed step; slices are recorded at the nt sample
/// times of H.  Inverse slices come from backward integration of the
/// time-reversed field over each output interval, composed incrementally.
inline FlowPath integrate_flow(const SampledHamiltonian& h, const FlowOptions& opts = {}) {
    const Domain& dom = h.domain;
    const int nt = h.nt;
    const int intervals = nt - 1;
    if (opts.steps < intervals) fail(ErrorKind::Usage, "steps must be at least nt-1");
    // sub-steps per interval; total step count is steps rounded to the
    // nearest multiple of nt-1
    const int m = std::max(1, (opts.steps + intervals / 2) / intervals);
    const double dt = 1.0 / (double(intervals) * m);

    h.check_support();

    const bool autonomous = h.is_autonomous();
    Interp interp(dom, opts.degree);
    const int points = opts.degree + 1;

    const std::size_t n = dom.size();
    std::vector<double> base_x(n), base_y(n);
    for (int i = 0; i < dom.nx; ++i)
        for (int j = 0; j < dom.ny; ++j) {
            base_x[dom.index(i, j)] = dom.x_of(i);
            base_y[dom.index(i, j)] = dom.y_of(j);
        }

    // Per-interval stage slices at times t0 + s*dt/2, s = 0..2m; for
    // autonomous H every pointer aliases slice 0.
    std::vector<std::vector<double>> blend_store;
    std::vector<const double*> stages(2 * m + 1, h.slices[0].data());
    if (!autonomous) blend_store.assign(2 * m + 1, std::vector<double>(n));
    auto build_stages = [&](int k) {
        if (autonomous) return;
        const double t0 = double(k) / intervals;
        for (int s = 0; s <= 2 * m; ++s) {
            double t = t0 + 0.5 * s * dt;
            double u = t * intervals;
            int q = static_cast<int>(std::floor(u));
            if (q < 0) q = 0;
            if (q > nt - 2) q = nt - 2;
            double w = u - q;
            const auto& a = h.slices[q];
            const auto& b = h.slices[q + 1];
            auto& out = blend_store[s];
            for (std::size_t p = 0; p < n; ++p) out[p] = (1.0 - w) * a[p] + w * b[p];
            stages[s] = out.data();
        }
    };
    // backward sub-step s uses the same stage arrays in reverse order
    std::vector<const double*> rstages(2 * m + 1, h.slices[0].data());

    FlowPath path;
    path.domain = dom;
    path.nt = nt;
    path.slices.reserve(nt);
    path.slices.push_back(GridMap::identity(dom));
    if (opts.jacobians) path.slices[0].jacobian_det.assign(n, 1.0);

    std::vector<double> px = base_x, py = base_y;    // forward positions
    std::vector<double> wx(n), wy(n);                // interval backward map
    std::vector<double> pdx(n), pdy(n);              // previous inverse displacement

    const double support2 = dom.is_torus() ? 0.0
        : (dom.support_radius() + 10 * dt) * (dom.support_radius() + 10 * dt);

    const std::size_t nblocks = parallel_block_count(n);
    std::vector<double> block_max(nblocks, 0.0);

    for (int k = 0; k < intervals; ++k) {
        build_stages(k);
        if (!autonomous)
            for (int s = 0; s <= 2 * m; ++s) rstages[s] = stages[2 * m - s];

        if (opts.inverses) {
            wx = base_x;
            wy = base_y;
        }
        parallel_for_blocks_indexed(n, [&](std::size_t blk, std::size_t b, std::size_t e) {
            double mx = detail::advance_points_dispatch(points, interp, stages, n, m, dt,
                                                        px.data(), py.data(), b, e);
            if (opts.inverses)
                mx = std::max(mx, detail::advance_points_dispatch(points, interp, rstages, n,
                                                                  m, -dt, wx.data(), wy.data(),
                                                                  b, e));
            block_max[blk] = mx;
        });
        double max_step = 0.0;
        for (double v : block_max) max_step = std::max(max_step, v);
        if (dom.is_torus() && max_step >= 0.5)
            fail(ErrorKind::Contract, "time step too coarse for unwrapping");

        if (!dom.is_torus()) {
            // a point that moves must stay inside the support region
            for (std::size_t p = 0; p < n; ++p) {
                bool moved = std::abs(px[p] - base_x[p]) > 1e-9 ||
                             std::abs(py[p] - base_y[p]) > 1e-9;
                if (moved && px[p] * px[p] + py[p] * py[p] > support2)
                    fail(ErrorKind::Contract, "support violation");
            }
        }
        GridMap slice(dom);
        slice.image_x = px;
        slice.image_y = py;

        if (opts.inverses) {
            // compose: inv_{k+1} = inv_k o W_k
            if (k == 0) {
                slice.inv_x = wx;
                slice.inv_y = wy;
            } else {
                const GridMap& prev = path.slices[k];
                for (std::size_t p = 0; p < n; ++p) {
                    pdx[p] = prev.inv_x[p] - base_x[p];
                    pdy[p] = prev.inv_y[p] - base_y[p];
                }
                slice.inv_x.resize(n);
                slice.inv_y.resize(n);
                parallel_for_blocks(n, [&](std::size_t bgn, std::size_t end) {
                    for (std::size_t p = bgn; p < end; ++p) {
                        double zx = wx[p], zy = wy[p];
                        slice.inv_x[p] = zx + interp.value(pdx, zx, zy);
                        slice.inv_y[p] = zy + interp.value(pdy, zx, zy);
                    }
                });
            }
        }
        if (opts.jacobians) fill_jacobian(slice);
        path.slices.push_back(std::move(slice));
    }

    if (opts.inverses) {
        // audit: forward o inverse should be the identity
        double worst = 0.0;
        for (int k = 1; k < nt; ++k) {
            const GridMap& s = path.slices[k];
            std::vector<double> fdx(n), fdy(n);
            for (std::size_t p = 0; p < n; ++p) {
                fdx[p] = s.image_x[p] - base_x[p];
                fdy[p] = s.image_y[p] - base_y[p];
            }
            std::vector<double> err(n, 0.0);
            parallel_for_blocks(n, [&](std::size_t bgn, std::size_t end) {
                for (std::size_t p = bgn; p < end; ++p) {
                    if (!dom.active(p)) continue;
                    double zx = s.inv_x[p], zy = s.inv_y[p];
                    double cx = zx + interp.value(fdx, zx, zy);
                    double cy = zy + interp.value(fdy, zx, zy);
                    err[p] = dom.distance(cx, cy, base_x[p], base_y[p]);
                }
            });
            for (double e : err) worst = std::max(worst, e);
        }
        path.inverse_audit = worst;
    }
    return path;
}

/// Max over time slices and active nodes of |det D(phi^t) - 1|.
inline double area_audit(const FlowPath& path, double min_radius = 0.0) {
    const Domain& d = path.domain;
    double worst = 0.0;
    for (const auto& s : path.slices) {
        if (s.jacobian_det.empty()) fail(ErrorKind::Usage, "jacobian not filled");
        for (int i = 0; i < d.nx; ++i)
            for (int j = 0; j < d.ny; ++j) {
                if (!d.active(i, j)) continue;
                if (min_radius > 0.0 && !d.is_torus()) {
                    double x = d.x_of(i), y = d.y_of(j);
                    if (x * x + y * y < min_radius * min_radius) continue;
                }
                worst = std::max(worst, std::abs(s.jacobian_det[d.index(i, j)] - 1.0));
            }
    }
    return worst;
}

} // namespace hamlab

#endif
