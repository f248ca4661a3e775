#ifndef HAMLAB_INTERPOLATE_HPP
#define HAMLAB_INTERPOLATE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <span>

#include "hamlab/domain.hpp"

namespace hamlab {

/// Tensor-product Lagrange interpolation of grid samples, with analytic
/// derivatives of the interpolant.  Periodic wrap on the torus; zero
/// extension outside the disc bounding box (valid because every sampled
/// quantity there is compactly supported or stored in displacement form).
///
/// The default degree 6 keeps field-evaluation error near the integrator's
/// truncation floor; degree 1 recovers bilinear interpolation.
class Interp {
public:
    static constexpr int kMaxPoints = 9;

    Interp(const Domain& d, int degree = 6) : dom_(&d), points_(degree + 1) {
        if (degree < 1 || degree + 1 > kMaxPoints)
            fail(ErrorKind::Usage, "interpolation degree out of range");
    }

    int degree() const { return points_ - 1; }

    double value(std::span<const double> f, double x, double y) const {
        switch (points_) {
            case 7: return value_impl<7>(f, x, y);
            case 5: return value_impl<5>(f, x, y);
            case 2: return value_impl<2>(f, x, y);
            default: return value_impl<0>(f, x, y);
        }
    }

    /// Gradient of the interpolant in physical units (single fused pass).
    void gradient(std::span<const double> f, double x, double y,
                  double& fx, double& fy) const {
        switch (points_) {
            case 7: gradient_impl<7>(f, x, y, fx, fy); return;
            case 5: gradient_impl<5>(f, x, y, fx, fy); return;
            case 2: gradient_impl<2>(f, x, y, fx, fy); return;
            default: gradient_impl<0>(f, x, y, fx, fy); return;
        }
    }

    /// Statically-sized entry points for hot loops that dispatch once.
    template <int PT>
    double value_t(std::span<const double> f, double x, double y) const {
        return value_impl<PT>(f, x, y);
    }
    template <int PT>
    void gradient_t(std::span<const double> f, double x, double y,
                    double& fx, double& fy) const {
        gradient_impl<PT>(f, x, y, fx, fy);
    }

private:
    struct Axis {
        std::array<int, kMaxPoints> idx;   // grid index per tap, -1 = outside (reads 0)
        std::array<double, kMaxPoints> w;
        std::array<double, kMaxPoints> dw;
        bool contiguous = false;
    };

    // PT = 0 selects the runtime-sized fallback
    template <int PT>
    double value_impl(std::span<const double> f, double x, double y) const {
        const int P = PT == 0 ? points_ : PT;
        Axis ax, ay;
        axis_weights_t<PT>(to_ux(x), dom_->nx, false, ax);
        axis_weights_t<PT>(to_uy(y), dom_->ny, false, ay);
        const int ny = dom_->ny;
        double acc = 0.0;
        for (int a = 0; a < P; ++a) {
            int ia = ax.idx[a];
            if (ia < 0) continue;
            const double* row = f.data() + static_cast<std::size_t>(ia) * ny;
            double r = 0.0;
            if (ay.contiguous) {
                const double* src = row + ay.idx[0];
                for (int b = 0; b < P; ++b) r += ay.w[b] * src[b];
            } else {
                for (int b = 0; b < P; ++b)
                    if (ay.idx[b] >= 0) r += ay.w[b] * row[ay.idx[b]];
            }
            acc += ax.w[a] * r;
        }
        return acc;
    }

    template <int PT>
    void gradient_impl(std::span<const double> f, double x, double y,
                       double& fx, double& fy) const {
        const int P = PT == 0 ? points_ : PT;
        Axis ax, ay;
        axis_weights_t<PT>(to_ux(x), dom_->nx, true, ax);
        axis_weights_t<PT>(to_uy(y), dom_->ny, true, ay);
        const int ny = dom_->ny;
        double sx = 0.0, sy = 0.0;
        for (int a = 0; a < P; ++a) {
            int ia = ax.idx[a];
            if (ia < 0) continue;
            const double* row = f.data() + static_cast<std::size_t>(ia) * ny;
            double r = 0.0, rd = 0.0;
            if (ay.contiguous) {
                const double* src = row + ay.idx[0];
                for (int b = 0; b < P; ++b) {
                    double v = src[b];
                    r += ay.w[b] * v;
                    rd += ay.dw[b] * v;
                }
            } else {
                for (int b = 0; b < P; ++b) {
                    if (ay.idx[b] < 0) continue;
                    double v = row[ay.idx[b]];
                    r += ay.w[b] * v;
                    rd += ay.dw[b] * v;
                }
            }
            sx += ax.dw[a] * r;
            sy += ax.w[a] * rd;
        }
        fx = sx / dom_->hx();
        fy = sy / dom_->hy();
    }

    // physical coordinate -> grid units
    double to_ux(double x) const {
        return dom_->is_torus() ? x * dom_->nx : (x + 1.0) / dom_->hx() - 0.5;
    }
    double to_uy(double y) const {
        return dom_->is_torus() ? y * dom_->ny : (y + 1.0) / dom_->hy() - 0.5;
    }

    template <int PT>
    void axis_weights_t(double u, int n, bool deriv, Axis& a) const {
        const int P = PT == 0 ? points_ : PT;
        int base = static_cast<int>(std::floor(u)) - (P - 1) / 2;
        double s = u - base;  // position relative to stencil node 0

        if (dom_->is_torus()) {
            int g = base % n;
            if (g < 0) g += n;
            if (g + P <= n) {
                a.contiguous = true;
                for (int k = 0; k < P; ++k) a.idx[k] = g + k;
            } else {
                a.contiguous = false;
                for (int k = 0; k < P; ++k) a.idx[k] = (g + k) % n;
            }
        } else {
            a.contiguous = base >= 0 && base + P <= n;
            for (int k = 0; k < P; ++k) {
                int g = base + k;
                a.idx[k] = (g >= 0 && g < n) ? g : -1;
            }
        }

        std::array<double, kMaxPoints> d;
        double dmin = 1.0;
        for (int m = 0; m < P; ++m) {
            d[m] = s - m;
            dmin = std::min(dmin, std::abs(d[m]));
        }

        if (dmin < 1e-9) {
            // query (numerically) on a node: delta weights, nodal FD row
            int node = static_cast<int>(std::lround(s));
            for (int k = 0; k < P; ++k) {
                a.w[k] = (k == node) ? 1.0 : 0.0;
                if (deriv) a.dw[k] = nodal_deriv(P, node, k);
            }
            return;
        }

        // Lagrange weights by prefix/suffix products over (s - m).
        std::array<double, kMaxPoints> pre, suf;
        pre[0] = 1.0;
        for (int m = 1; m < P; ++m) pre[m] = pre[m - 1] * d[m - 1];
        suf[P - 1] = 1.0;
        for (int m = P - 2; m >= 0; --m) suf[m] = suf[m + 1] * d[m + 1];
        std::array<double, kMaxPoints> invd;
        double T = 0.0;
        for (int m = 0; m < P; ++m) {
            invd[m] = 1.0 / d[m];
            T += invd[m];
        }
        for (int k = 0; k < P; ++k) {
            a.w[k] = pre[k] * suf[k] * inv_den(P, k);
            if (deriv) a.dw[k] = a.w[k] * (T - invd[k]);
        }
    }

    // 1 / prod_{m != k} (k - m) for P-point stencils
    static double inv_den(int P, int k) {
        static const auto table = [] {
            std::array<std::array<double, kMaxPoints>, kMaxPoints + 1> t{};
            for (int p = 2; p <= kMaxPoints; ++p)
                for (int kk = 0; kk < p; ++kk) {
                    double prod = 1.0;
                    for (int m = 0; m < p; ++m)
                        if (m != kk) prod *= double(kk - m);
                    t[p][kk] = 1.0 / prod;
                }
            return t;
        }();
        return table[P][k];
    }

    // l_k'(j) at node j: the classical finite-difference row
    static double nodal_deriv(int P, int j, int k) {
        static const auto table = [] {
            std::array<std::array<std::array<double, kMaxPoints>, kMaxPoints>,
                       kMaxPoints + 1> t{};
            for (int p = 2; p <= kMaxPoints; ++p)
                for (int jj = 0; jj < p; ++jj)
                    for (int kk = 0; kk < p; ++kk) {
                        if (kk == jj) {
                            double sum = 0.0;
                            for (int m = 0; m < p; ++m)
                                if (m != jj) sum += 1.0 / double(jj - m);
                            t[p][jj][kk] = sum;
                        } else {
                            double num = 1.0, den = 1.0;
                            for (int m = 0; m < p; ++m) {
                                if (m != kk) den *= double(kk - m);
                                if (m != kk && m != jj) num *= double(jj - m);
                            }
                            t[p][jj][kk] = num / den;
                        }
                    }
            return t;
        }();
        return table[P][j][k];
    }

    const Domain* dom_;
    int points_;
};

} // namespace hamlab

#endif
