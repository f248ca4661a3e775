#ifndef HAMLAB_REPARAM_HPP
#define HAMLAB_REPARAM_HPP

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "hamlab/flow.hpp"
#include "hamlab/hamiltonian.hpp"

namespace hamlab {

/// A monotone reparameterization of [0,1], sampled with its derivative.
/// Truncations (zeta(1) = s < 1) are admitted; flattening maps carry exact
/// plateaus where dzeta vanishes identically.
struct ReparamMap {
    int nt = 0;
    std::vector<double> zeta, dzeta;

    ReparamMap() = default;
    template <typename Z, typename DZ>
    ReparamMap(int nt_, Z&& z, DZ&& dz) : nt(nt_), zeta(nt_), dzeta(nt_) {
        for (int k = 0; k < nt_; ++k) {
            double t = double(k) / (nt_ - 1);
            zeta[k] = z(t);
            dzeta[k] = dz(t);
        }
        validate();
    }

    double t_of(int k) const { return double(k) / (nt - 1); }
    double dt() const { return 1.0 / (nt - 1); }

    void validate() const {
        for (int k = 0; k < nt; ++k) {
            if (zeta[k] < -1e-12 || zeta[k] > 1.0 + 1e-12)
                fail(ErrorKind::Contract, "reparameterization leaves [0,1]");
            if (dzeta[k] < -1e-12)
                fail(ErrorKind::Contract, "reparameterization derivative negative");
            if (k > 0 && zeta[k] < zeta[k - 1] - 1e-12)
                fail(ErrorKind::Contract, "reparameterization not monotone");
        }
        // dzeta must be consistent with finite differences of zeta
        for (int k = 0; k + 1 < nt; ++k) {
            double fd = (zeta[k + 1] - zeta[k]) / dt();
            double mid = 0.5 * (dzeta[k] + dzeta[k + 1]);
            if (std::abs(fd - mid) > 1e-2 * std::max(1.0, std::abs(mid)) + 1e-6)
                fail(ErrorKind::Contract, "dzeta inconsistent with zeta samples");
        }
    }

    static ReparamMap identity(int nt) {
        return ReparamMap(nt, [](double t) { return t; }, [](double) { return 1.0; });
    }

    /// Truncation zeta(t) = s t (generates t -> phi_H^{st}).
    static ReparamMap truncation(int nt, double s) {
        return ReparamMap(nt, [s](double t) { return s * t; }, [s](double) { return s; });
    }

    static ReparamMap power(int nt, double p) {
        return ReparamMap(nt, [p](double t) { return std::pow(t, p); },
                          [p](double t) { return t > 0 ? p * std::pow(t, p - 1) : (p == 1 ? 1.0 : 0.0); });
    }

    /// Quintic smoothstep from 0 to 1 (no plateaus).
    static ReparamMap smoothstep(int nt) {
        auto q = [](double u) { return ((6 * u - 15) * u + 10) * u * u * u; };
        auto dq = [](double u) { return ((30 * u - 60) * u + 30) * u * u; };
        return ReparamMap(nt, q, dq);
    }

    /// The boundary-flattening map: zeta == 0 on [0,eps], == 1 on [1-eps,1],
    /// with quintic-smoothstep speed ramps of width eps and unit-rate middle.
    /// ham-distance to the identity shrinks linearly in eps.
    static ReparamMap plateau(int nt, double eps) {
        if (eps <= 0.0 || eps >= 0.25)
            fail(ErrorKind::Usage, "plateau width must lie in (0, 0.25)");
        const double A = 1.0 / (1.0 - 3.0 * eps);
        auto q = [](double u) { return ((6 * u - 15) * u + 10) * u * u * u; };
        auto Q = [](double u) { return ((u - 3) * u + 2.5) * u * u * u * u; };
        auto z = [=](double t) {
            if (t <= eps) return 0.0;
            if (t >= 1.0 - eps) return 1.0;
            if (t <= 2 * eps) return A * eps * Q((t - eps) / eps);
            if (t >= 1.0 - 2 * eps) return 1.0 - A * eps * Q((1.0 - eps - t) / eps);
            return A * (t - 1.5 * eps);
        };
        auto dz = [=](double t) {
            if (t <= eps || t >= 1.0 - eps) return 0.0;
            if (t <= 2 * eps) return A * q((t - eps) / eps);
            if (t >= 1.0 - 2 * eps) return A * q((1.0 - eps - t) / eps);
            return A;
        };
        return ReparamMap(nt, z, dz);
    }

    double eval(double t) const {
        double u = t * (nt - 1);
        int k = static_cast<int>(std::floor(u));
        if (k < 0) k = 0;
        if (k > nt - 2) k = nt - 2;
        double w = u - k;
        return (1.0 - w) * zeta[k] + w * zeta[k + 1];
    }
};

/// Hamiltonian norm of the difference: ||z1-z2||_C0 + ||z1'-z2'||_L1.
/// The L1 term integrates the piecewise-linear model of the derivative
/// difference exactly, including sign crossings inside an interval.
inline double ham_norm(const ReparamMap& z1, const ReparamMap& z2) {
    if (z1.nt != z2.nt) fail(ErrorKind::DomainMismatch, "ham_norm: time grids differ");
    double c0 = 0.0;
    for (int k = 0; k < z1.nt; ++k)
        c0 = std::max(c0, std::abs(z1.zeta[k] - z2.zeta[k]));
    double l1 = 0.0;
    const double dt = z1.dt();
    for (int k = 0; k + 1 < z1.nt; ++k) {
        double a = z1.dzeta[k] - z2.dzeta[k];
        double b = z1.dzeta[k + 1] - z2.dzeta[k + 1];
        if (a * b >= 0.0) {
            l1 += 0.5 * (std::abs(a) + std::abs(b)) * dt;
        } else {
            l1 += 0.5 * (a * a + b * b) / (std::abs(a) + std::abs(b)) * dt;
        }
    }
    return c0 + l1;
}

/// H^zeta(t,x) = zeta'(t) H(zeta(t), x); generates t -> phi_H^{zeta(t)}.
/// H is interpolated linearly in its time slot.
inline SampledHamiltonian reparameterize(const SampledHamiltonian& H, const ReparamMap& z) {
    SampledHamiltonian out(H.domain, z.nt);
    for (int k = 0; k < z.nt; ++k) {
        double rate = z.dzeta[k];
        if (rate == 0.0) continue;  // exact plateau
        double u = z.zeta[k] * (H.nt - 1);
        int q = static_cast<int>(std::floor(u));
        if (q < 0) q = 0;
        if (q > H.nt - 2) q = H.nt - 2;
        double w = u - q;
        const auto& A = H.slices[q];
        const auto& B = H.slices[q + 1];
        for (std::size_t p = 0; p < A.size(); ++p)
            out.slices[k][p] = rate * ((1.0 - w) * A[p] + w * B[p]);
    }
    out.normalized = H.normalized;
    return out;
}

/// The reparameterized path t -> lambda(zeta(t)), built by resampling the
/// slices (the flow of H^zeta coincides with it up to integrator and
/// slice-blend tolerance, which the tests verify directly).
inline FlowPath reparameterize_path(const FlowPath& path, const ReparamMap& z) {
    FlowPath out;
    out.domain = path.domain;
    out.nt = z.nt;
    out.inverse_audit = path.inverse_audit;
    out.slices.reserve(z.nt);
    for (int k = 0; k < z.nt; ++k) out.slices.push_back(path.slice_at(z.zeta[k]));
    return out;
}

struct ReparamBound {
    double lhs = 0.0;  // ||H^{z1} - H^{z2}||
    double rhs = 0.0;  // 2 max(||H||_C0, L) ||z1 - z2||_ham
};

/// The reparameterization bound with constant C = 2 max(||H||_C0, L).
/// Violation signals a defect in the norm or derivative estimation.
inline ReparamBound check_reparam_bound(const SampledHamiltonian& H,
                                        const ReparamMap& z1, const ReparamMap& z2) {
    ReparamBound r;
    r.lhs = hofer_norm(linear_combination(1.0, reparameterize(H, z1),
                                          -1.0, reparameterize(H, z2)));
    double C = 2.0 * std::max(c0_norm(H), time_lipschitz(H));
    r.rhs = C * ham_norm(z1, z2);
    if (r.lhs > r.rhs + 1e-9)
        fail(ErrorKind::Contract, "reparameterization bound violated");
    return r;
}

struct FlattenResult {
    SampledHamiltonian flattened;
    ReparamMap zeta;
    double eps = 0.0;
    double norm_change = 0.0;  // ||H - H^zeta||
};

/// Boundary flattening: picks the widest end plateaus (by bisection, 20
/// iterations) whose reparameterization stays within eps_target of H in
/// the L^(1,inf) norm.  The result vanishes identically near t = 0, 1 and
/// has the same time-one map.
inline FlattenResult flatten(const SampledHamiltonian& H, double eps_target) {
    if (eps_target <= 0.0) fail(ErrorKind::Usage, "eps_target must be positive");
    const double budget = 0.9 * eps_target;  // margin for the group-calculus route
    auto norm_change = [&](double eps) {
        return hofer_norm(linear_combination(
            1.0, H, -1.0, reparameterize(H, ReparamMap::plateau(H.nt, eps))));
    };
    double lo = 2.0 * H.dt();           // plateau must cover a few samples
    double hi = 0.24;
    if (lo >= hi || norm_change(lo) > budget)
        fail(ErrorKind::Resolution, "refine time grid");
    if (norm_change(hi) > budget) {
        for (int it = 0; it < 20; ++it) {
            double mid = 0.5 * (lo + hi);
            (norm_change(mid) <= budget ? lo : hi) = mid;
        }
    } else {
        lo = hi;
    }
    FlattenResult res;
    res.eps = lo;
    res.zeta = ReparamMap::plateau(H.nt, lo);
    res.flattened = reparameterize(H, res.zeta);
    res.norm_change = hofer_norm(linear_combination(1.0, H, -1.0, res.flattened));
    return res;
}

namespace detail {

inline bool slice_is_zero(const SampledHamiltonian& H, int k, double tol) {
    for (double v : H.slices[k])
        if (std::abs(v) > tol) return false;
    return true;
}

} // namespace detail

/// Concatenation Hamiltonian: the time-compressed H0 on [0, 1-s) followed
/// by the shifted K on [1-s, 1].  H0 must be flat near both ends and K
/// flat near t = 0; the time-one map is phi_K^s o phi_{H0}^1 (for s < 1).
inline SampledHamiltonian connect_concatenation(const SampledHamiltonian& H0,
                                                const SampledHamiltonian& K, double s) {
    H0.require_same_grid(K, "connect_concatenation");
    if (s < 0.0 || s > 1.0) fail(ErrorKind::Usage, "s must lie in [0,1]");
    const double tol = 1e-9 * std::max(1.0, std::max(c0_norm(H0), c0_norm(K)));
    if (!detail::slice_is_zero(H0, 0, tol) || !detail::slice_is_zero(H0, 1, tol) ||
        !detail::slice_is_zero(H0, H0.nt - 1, tol) || !detail::slice_is_zero(H0, H0.nt - 2, tol) ||
        !detail::slice_is_zero(K, 0, tol) || !detail::slice_is_zero(K, 1, tol))
        fail(ErrorKind::Contract, "flatten inputs first");

    const int nt = H0.nt;
    SampledHamiltonian out(H0.domain, nt);
    auto sample_linear = [](const SampledHamiltonian& G, double t, double scale,
                            std::vector<double>& dst) {
        double u = t * (G.nt - 1);
        int q = static_cast<int>(std::floor(u));
        if (q < 0) q = 0;
        if (q > G.nt - 2) q = G.nt - 2;
        double w = u - q;
        const auto& A = G.slices[q];
        const auto& B = G.slices[q + 1];
        for (std::size_t p = 0; p < A.size(); ++p)
            dst[p] = scale * ((1.0 - w) * A[p] + w * B[p]);
    };
    for (int k = 0; k < nt; ++k) {
        double t = out.t_of(k);
        if (s < 1.0 && t < 1.0 - s) {
            sample_linear(H0, t / (1.0 - s), 1.0 / (1.0 - s), out.slices[k]);
        } else if (s > 0.0) {
            sample_linear(K, t - (1.0 - s), 1.0, out.slices[k]);
        }
    }
    out.normalized = H0.normalized && K.normalized;
    return out;
}

} // namespace hamlab

#endif
