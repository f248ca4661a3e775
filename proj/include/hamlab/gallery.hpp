#ifndef HAMLAB_GALLERY_HPP
#define HAMLAB_GALLERY_HPP

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "hamlab/flow.hpp"
#include "hamlab/hamiltonian.hpp"
#include "hamlab/metrics.hpp"

namespace hamlab {

/// Disc core radius below which grid maps cannot resolve the twist
/// singularity; excluded from C0 comparisons of the rotation families.
inline constexpr double kDiscCoreExclusion = 0.05;

namespace detail {

inline double qstep(double u) { return ((6 * u - 15) * u + 10) * u * u * u; }

// 20-point Gauss-Legendre nodes/weights on [0,1]
inline const std::array<double, 20>& gl_nodes() {
    static const std::array<double, 20> x = {
        0.0034357004074525, 0.0180140363610431, 0.0438827858743371, 0.0804415140888906,
        0.1268340467699246, 0.1819731596367425, 0.2445664990245864, 0.3131469556422902,
        0.3861070744291775, 0.4617367394332513, 0.5382632605667487, 0.6138929255708225,
        0.6868530443577098, 0.7554335009754136, 0.8180268403632575, 0.8731659532300754,
        0.9195584859111094, 0.9561172141256629, 0.9819859636389569, 0.9965642995925475};
    return x;
}
inline const std::array<double, 20>& gl_weights() {
    static const std::array<double, 20> w = {
        0.0088070035695761, 0.0203007149001935, 0.0313360241670545, 0.0416383707883524,
        0.0509650599086202, 0.0590972659807592, 0.0658443192245883, 0.0710480546591910,
        0.0745864932363019, 0.0763766935653629, 0.0763766935653629, 0.0745864932363019,
        0.0710480546591910, 0.0658443192245883, 0.0590972659807592, 0.0509650599086202,
        0.0416383707883524, 0.0313360241670545, 0.0203007149001935, 0.0088070035695761};
    return w;
}

} // namespace detail

/// Angular-speed profile rho of the Example-4.2 twist maps: a singular
/// base (s^{-1/2} or s^{-2}) cut off smoothly to vanish on [1-eps, 1],
/// optionally mollified at the origin by a C^1 quadratic blend on
/// [1/n, 2/n] (constant below 1/n).
struct RotationProfile {
    enum class Kind { SqrtInverse, SquareInverse, Custom };

    Kind kind = Kind::SqrtInverse;
    double cutoff_eps = 0.1;               // rho == 0 on [1-eps, 1]
    int mollify_n = 0;                     // 0 = singular (maps only)
    std::function<double(double)> custom_rho;   // used when kind == Custom
    std::function<double(double)> custom_drho;

    RotationProfile() = default;
    RotationProfile(Kind k, double eps, int n = 0) : kind(k), cutoff_eps(eps), mollify_n(n) {
        if (eps <= 0.0 || eps >= 0.5) fail(ErrorKind::Usage, "cutoff_eps must lie in (0, 0.5)");
    }

    RotationProfile with_mollify(int n) const {
        RotationProfile p = *this;
        p.mollify_n = n;
        return p;
    }

    double base(double s) const {
        switch (kind) {
            case Kind::SqrtInverse: return 1.0 / std::sqrt(s);
            case Kind::SquareInverse: return 1.0 / (s * s);
            case Kind::Custom: return custom_rho(s);
        }
        return 0.0;
    }
    double dbase(double s) const {
        switch (kind) {
            case Kind::SqrtInverse: return -0.5 / (s * std::sqrt(s));
            case Kind::SquareInverse: return -2.0 / (s * s * s);
            case Kind::Custom: return custom_drho(s);
        }
        return 0.0;
    }

    // smooth cutoff: 1 below 1-2eps, quintic descent, 0 beyond 1-eps
    double chi(double s) const {
        double e = cutoff_eps;
        if (s <= 1.0 - 2 * e) return 1.0;
        if (s >= 1.0 - e) return 0.0;
        return detail::qstep((1.0 - e - s) / e);
    }
    double dchi(double s) const {
        double e = cutoff_eps;
        if (s <= 1.0 - 2 * e || s >= 1.0 - e) return 0.0;
        double u = (1.0 - e - s) / e;
        return -((30 * u - 60) * u + 30) * u * u / e;
    }

    /// The (possibly singular) cutoffed profile.
    double rho_raw(double s) const { return s > 0.0 ? base(s) * chi(s) : 0.0; }

    /// The mollified profile rho_n(s) = rho(max(s, 1/n)) with a C^1 blend
    /// on [1/n, 2/n].
    double rho(double s) const {
        if (mollify_n <= 0) return rho_raw(s);
        double a = 1.0 / mollify_n;
        if (s >= 2 * a) return rho_raw(s);
        double v2 = rho_raw(2 * a);
        double d2 = dbase(2 * a) * chi(2 * a) + base(2 * a) * dchi(2 * a);
        double c = d2 / (2 * a);
        double sb = std::max(s, a);
        double u = sb - 2 * a;
        return v2 + d2 * u + c * u * u;
    }

    /// integral of s * rho_n(s) over [lo, hi] by Gauss-Legendre on the
    /// smooth pieces (analytic-grade accuracy)
    double moment(double lo, double hi) const {
        if (hi <= lo) return 0.0;
        std::vector<double> cuts = {lo, hi};
        double e = cutoff_eps;
        for (double c : {1.0 - 2 * e, 1.0 - e}) {
            if (c > lo && c < hi) cuts.push_back(c);
        }
        if (mollify_n > 0) {
            double a = 1.0 / mollify_n;
            for (double c : {a, 2 * a})
                if (c > lo && c < hi) cuts.push_back(c);
        }
        std::sort(cuts.begin(), cuts.end());
        double total = 0.0;
        const auto& xs = detail::gl_nodes();
        const auto& ws = detail::gl_weights();
        for (std::size_t q = 0; q + 1 < cuts.size(); ++q) {
            double a0 = cuts[q], b0 = cuts[q + 1], len = b0 - a0;
            if (len <= 0) continue;
            double acc = 0.0;
            for (int g = 0; g < 20; ++g) {
                double s = a0 + len * xs[g];
                acc += ws[g] * s * rho(s);
            }
            total += acc * len;
        }
        return total;
    }

    /// H_rho(r) = -int_1^r s rho(s) ds = int_r^1 s rho(s) ds.
    double hamiltonian_value(double r) const { return moment(r, 1.0); }

    /// The ideal L^(1,inf) norm of the autonomous twist Hamiltonian,
    /// int_0^1 s rho(s) ds, with the chosen cutoff and mollification.
    double norm_target() const { return moment(0.0, 1.0); }
};

/// Autonomous disc Hamiltonian of the twist isotopy t -> phi_{t rho}.
inline SampledHamiltonian rotation_hamiltonian(const RotationProfile& p, const Domain& d,
                                               int nt) {
    if (!d.is_torus() && p.cutoff_eps < d.support_margin - 1e-12)
        fail(ErrorKind::Usage, "cutoff_eps smaller than the domain support margin");
    if (p.mollify_n <= 0)
        fail(ErrorKind::Usage, "profile singular at 0; set mollify_n");
    if (d.is_torus()) fail(ErrorKind::Usage, "rotation_hamiltonian: disc domains only");
    return SampledHamiltonian::autonomous(d, nt, [&](double x, double y) {
        return p.hamiltonian_value(std::sqrt(x * x + y * y));
    });
}

/// Closed-form twist map phi_rho: (r, theta) -> (r, theta + rho(r)), with
/// inverse phi_{-rho}; singular profiles are evaluated only at grid nodes
/// (all of which have r > 0 on the cell-centered grid).
inline GridMap rotation_map(const RotationProfile& p, const Domain& d, double time = 1.0) {
    if (d.is_torus()) fail(ErrorKind::Usage, "rotation_map: disc domains only");
    auto twist = [&](double sign) {
        return [&, sign](double x, double y) -> std::pair<double, double> {
            double r = std::sqrt(x * x + y * y);
            if (r <= 0.0 || r > 1.0) return {x, y};
            double a = sign * time * p.rho(r);
            double c = std::cos(a), s = std::sin(a);
            return {x * c - y * s, x * s + y * c};
        };
    };
    GridMap m = GridMap::from_maps(d, twist(1.0), twist(-1.0));
    fill_jacobian(m);
    return m;
}

/// The mollified Example-4.2 sequence: for each n, the Hamiltonian
/// H_{rho_n} and its integrated isotopy.
inline std::vector<PathPair> example42_sequence(const RotationProfile& p,
                                                const std::vector<int>& n_list,
                                                const Domain& d, int nt,
                                                const FlowOptions& opts = {}) {
    std::vector<PathPair> seq;
    seq.reserve(n_list.size());
    for (int n : n_list) {
        auto H = rotation_hamiltonian(p.with_mollify(n), d, nt);
        seq.push_back(PathPair::integrated(H, opts, kDiscCoreExclusion));
    }
    return seq;
}

/// Transport Hamiltonians H_n(x,y) = g_n(y): unit slope on a band of
/// width 1/n around the ordinate of x0, compensated outside so that g_n
/// is periodic; the time-one map translates the band by `shift` while
/// ||H_n|| = O(1/n).
inline SampledHamiltonian transport_hamiltonian(const Domain& d, int nt, double y_center,
                                                double shift, int n) {
    if (!d.is_torus()) fail(ErrorKind::Usage, "transport_hamiltonian: torus only");
    double w = 1.0 / (4.0 * n);  // plateau half-width; total band width 1/n
    if (1.0 / n < 4.0 * d.hy())
        fail(ErrorKind::Resolution, "band width below grid resolution");
    double ib = 3.0 * w;  // integral of the bump (plateau 2w + two ramps w/2)
    auto bump = [w](double u) {
        u = std::abs(u);
        if (u <= w) return 1.0;
        if (u >= 2 * w) return 0.0;
        return detail::qstep((2 * w - u) / w);
    };
    // antiderivative of the bump from -1/2
    auto bump_int = [&](double u) {
        auto Q = [](double v) { return ((v - 3) * v + 2.5) * v * v * v * v; };
        auto one_sided = [&](double a) {  // int_0^a bump over positive axis
            if (a <= 0) return 0.0;
            if (a <= w) return a;
            if (a >= 2 * w) return w + 0.5 * w;
            return w + w * Q(1.0) - w * Q((2 * w - a) / w);
        };
        return ib / 2 + (u >= 0 ? one_sided(u) : -one_sided(-u));
    };
    double denom = 1.0 - ib;
    auto g = [&](double y) {
        double u = y - y_center;
        u -= std::round(u);  // wrap to [-1/2, 1/2)
        return shift / denom * (bump_int(u) - ib * (u + 0.5));
    };
    auto H = SampledHamiltonian::autonomous(d, nt, [&](double, double y) { return g(y); });
    return normalize(H);
}

/// The zero-transport-energy sequence: Hofer norms fall like 1/n while
/// every time-one map still moves x0 to y0 (x0 and y0 must share the
/// ordinate; `loops` adds whole windings to the displacement).
inline std::vector<PathPair> transport_sequence(double x0x, double x0y, double y0x,
                                                double y0y, const std::vector<int>& n_list,
                                                const Domain& d, int nt, int loops = 0,
                                                const FlowOptions& opts = {}) {
    if (std::abs(x0y - y0y) > 1e-12)
        fail(ErrorKind::Usage, "transport endpoints must differ only in the x-coordinate");
    double dx = y0x - x0x;
    dx -= std::round(dx);
    double shift = dx + loops;
    std::vector<PathPair> seq;
    for (int n : n_list) {
        auto H = transport_hamiltonian(d, nt, x0y, shift, n);
        seq.push_back(PathPair::integrated(H, opts));
    }
    return seq;
}

/// Shear Hamiltonian sin(2 pi y)/(2 pi), generating
/// (x, y) -> (x + t cos(2 pi y), y).
inline SampledHamiltonian shear_hamiltonian(const Domain& d, int nt, double amplitude = 1.0) {
    const double tau = 2.0 * M_PI;
    auto H = SampledHamiltonian::autonomous(d, nt, [&](double, double y) {
        return amplitude * std::sin(tau * y) / tau;
    });
    H.normalized = d.is_torus();
    return H;
}

/// Translation isotopy t -> (x + a t, y + b t); symplectic but not
/// Hamiltonian (nonzero mass flow), the Corollary-4.8 obstruction.
inline FlowPath translation_path(const Domain& d, int nt, double ax, double ay) {
    if (!d.is_torus()) fail(ErrorKind::Usage, "translation_path: torus only");
    return FlowPath::from_isotopy(
        d, nt,
        [&](double t, double x, double y) { return std::pair{x + ax * t, y + ay * t}; },
        [&](double t, double x, double y) { return std::pair{x - ax * t, y - ay * t}; });
}

/// Seeded smooth test family on the torus: low-mode trigonometric
/// Hamiltonians with mild time dependence, normalized.  Amplitudes are
/// kept small enough that time-one maps stay well resolved on the default
/// grids (displacements ~ 0.1, Jacobians near the identity).
inline SampledHamiltonian seeded_hamiltonian(const Domain& d, int nt, unsigned seed,
                                             bool autonomous = false, double amplitude = 0.05) {
    if (!d.is_torus()) fail(ErrorKind::Usage, "seeded_hamiltonian: torus only");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double tau = 2.0 * M_PI;
    struct Mode {
        int kx, ky;
        double ac, as, drift;
    };
    std::vector<Mode> modes;
    for (int kx = -2; kx <= 2; ++kx)
        for (int ky = -2; ky <= 2; ++ky) {
            if (kx == 0 && ky == 0) continue;
            if (kx < 0 || (kx == 0 && ky < 0)) continue;  // one representative per pair
            double k2 = double(kx * kx + ky * ky);
            double damp = amplitude / ((1.0 + k2) * std::sqrt(1.0 + k2));
            modes.push_back({kx, ky, damp * gauss(rng), damp * gauss(rng),
                             autonomous ? 0.0 : 0.5 * gauss(rng)});
        }
    auto H = SampledHamiltonian::sample(d, nt, [&](double t, double x, double y) {
        double v = 0.0;
        for (const auto& m : modes) {
            double phase = tau * (m.kx * x + m.ky * y);
            double env = 1.0 + m.drift * (t - 0.5);
            v += env * (m.ac * std::cos(phase) + m.as * std::sin(phase));
        }
        return v;
    });
    return normalize(H);
}

} // namespace hamlab

#endif
