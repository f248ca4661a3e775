#ifndef HAMLAB_HAMILTONIAN_HPP
#define HAMLAB_HAMILTONIAN_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hamlab/domain.hpp"

namespace hamlab {

/// A time-dependent Hamiltonian sampled on the (time x space) grid.
/// Time samples are uniform over [0,1] with inclusive endpoints.
///
/// Closed-surface convention: every torus slice integrates to zero once
/// `normalized` is set.  Open-surface convention: disc slices vanish for
/// radius > 1 - support_margin.
struct SampledHamiltonian {
    Domain domain;
    int nt = 0;
    std::vector<std::vector<double>> slices;  // nt arrays of grid values
    bool normalized = false;

    SampledHamiltonian() = default;
    SampledHamiltonian(const Domain& d, int nt_)
        : domain(d), nt(nt_), slices(nt_, std::vector<double>(d.size(), 0.0)) {
        if (nt_ < 2) fail(ErrorKind::Usage, "need at least two time samples");
    }

    double t_of(int k) const { return double(k) / (nt - 1); }
    double dt() const { return 1.0 / (nt - 1); }

    double& at(int k, int i, int j) { return slices[k][domain.index(i, j)]; }
    double at(int k, int i, int j) const { return slices[k][domain.index(i, j)]; }

    template <typename Fn>  // fn(t, x, y)
    static SampledHamiltonian sample(const Domain& d, int nt, Fn&& fn) {
        SampledHamiltonian h(d, nt);
        for (int k = 0; k < nt; ++k)
            for (int i = 0; i < d.nx; ++i)
                for (int j = 0; j < d.ny; ++j)
                    if (d.active(i, j)) h.at(k, i, j) = fn(h.t_of(k), d.x_of(i), d.y_of(j));
        h.check_support();
        return h;
    }

    template <typename Fn>  // fn(x, y), same slice at every t
    static SampledHamiltonian autonomous(const Domain& d, int nt, Fn&& fn) {
        SampledHamiltonian h(d, nt);
        for (int i = 0; i < d.nx; ++i)
            for (int j = 0; j < d.ny; ++j)
                if (d.active(i, j)) h.at(0, i, j) = fn(d.x_of(i), d.y_of(j));
        for (int k = 1; k < nt; ++k) h.slices[k] = h.slices[0];
        h.check_support();
        return h;
    }

    bool is_autonomous(double tol = 0.0) const {
        for (int k = 1; k < nt; ++k)
            for (std::size_t p = 0; p < slices[0].size(); ++p)
                if (std::abs(slices[k][p] - slices[0][p]) > tol) return false;
        return true;
    }

    /// Disc slices must be compactly supported inside the margin.
    void check_support(double tol = 1e-10) const {
        if (domain.is_torus()) return;
        const double r2 = domain.support_radius() * domain.support_radius();
        for (int k = 0; k < nt; ++k)
            for (int i = 0; i < domain.nx; ++i)
                for (int j = 0; j < domain.ny; ++j) {
                    double x = domain.x_of(i), y = domain.y_of(j);
                    if (x * x + y * y > r2 && std::abs(at(k, i, j)) > tol)
                        fail(ErrorKind::Contract,
                             "support violation: Hamiltonian nonzero outside support radius");
                }
    }

    void require_same_grid(const SampledHamiltonian& o, const char* ctx) const {
        domain.require_same_grid(o.domain, ctx);
        if (nt != o.nt) fail(ErrorKind::DomainMismatch, std::string(ctx) + ": time grids differ");
    }
};

/// Oscillation max_x H_t - min_x H_t of one time slice (grid surrogate of
/// the sup/inf over the surface).
inline double osc(const SampledHamiltonian& h, int k) {
    if (k < 0 || k >= h.nt) fail(ErrorKind::Usage, "time index out of range");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    const Domain& d = h.domain;
    for (int i = 0; i < d.nx; ++i)
        for (int j = 0; j < d.ny; ++j) {
            if (!d.active(i, j)) continue;
            double v = h.at(k, i, j);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    return hi - lo;
}

/// Hofer L^(1,inf) norm: the composite trapezoid rule in t of osc(H,t).
/// Equals the Finsler length of the generated path by definition.
inline double hofer_norm(const SampledHamiltonian& h) {
    double sum = 0.0;
    double prev = osc(h, 0);
    for (int k = 1; k < h.nt; ++k) {
        double cur = osc(h, k);
        sum += 0.5 * (prev + cur);
        prev = cur;
    }
    return sum * h.dt();
}

/// L^inf Hofer-type norm: global max - global min over all (t,x).  Kept
/// only to exhibit where flattening is L^(1,inf)-small but L^inf-large.
inline double linfty_norm(const SampledHamiltonian& h) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    const Domain& d = h.domain;
    for (int k = 0; k < h.nt; ++k)
        for (int i = 0; i < d.nx; ++i)
            for (int j = 0; j < d.ny; ++j) {
                if (!d.active(i, j)) continue;
                double v = h.at(k, i, j);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
    return hi - lo;
}

/// max_(t,x) |H| (the C^0 norm used by the reparameterization bound).
inline double c0_norm(const SampledHamiltonian& h) {
    double m = 0.0;
    const Domain& d = h.domain;
    for (int k = 0; k < h.nt; ++k)
        for (int i = 0; i < d.nx; ++i)
            for (int j = 0; j < d.ny; ++j)
                if (d.active(i, j)) m = std::max(m, std::abs(h.at(k, i, j)));
    return m;
}

/// Max finite-difference slope in t; the sampled surrogate for a time
/// Lipschitz constant.
inline double time_lipschitz(const SampledHamiltonian& h) {
    double m = 0.0;
    const double inv_dt = 1.0 / h.dt();
    for (int k = 0; k + 1 < h.nt; ++k)
        for (std::size_t p = 0; p < h.slices[k].size(); ++p)
            m = std::max(m, std::abs(h.slices[k + 1][p] - h.slices[k][p]) * inv_dt);
    return m;
}

/// Subtracts the Liouville mean from every slice (torus only) and marks
/// the result normalized.
inline SampledHamiltonian normalize(const SampledHamiltonian& h) {
    if (!h.domain.is_torus())
        fail(ErrorKind::Usage, "open case uses compact support, not normalization");
    SampledHamiltonian out = h;
    ScalarField tmp(h.domain);
    for (int k = 0; k < h.nt; ++k) {
        tmp.values = h.slices[k];
        double mean = field_mean(tmp);
        for (double& v : out.slices[k]) v -= mean;
    }
    out.normalized = true;
    return out;
}

inline void check_normalized(const SampledHamiltonian& h, double tol = 1e-10) {
    if (!h.domain.is_torus() || !h.normalized) return;
    ScalarField tmp(h.domain);
    for (int k = 0; k < h.nt; ++k) {
        tmp.values = h.slices[k];
        if (std::abs(integrate(tmp)) > tol)
            fail(ErrorKind::Contract, "normalized Hamiltonian has nonzero slice mean");
    }
}

// slice-wise linear combination (grids must match)
inline SampledHamiltonian linear_combination(double a, const SampledHamiltonian& H,
                                             double b, const SampledHamiltonian& K) {
    H.require_same_grid(K, "linear_combination");
    SampledHamiltonian out(H.domain, H.nt);
    for (int k = 0; k < H.nt; ++k)
        for (std::size_t p = 0; p < out.slices[k].size(); ++p)
            out.slices[k][p] = a * H.slices[k][p] + b * K.slices[k][p];
    out.normalized = H.normalized && K.normalized;
    return out;
}

} // namespace hamlab

#endif
