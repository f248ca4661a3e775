#ifndef HAMLAB_GROUP_HPP
#define HAMLAB_GROUP_HPP

#include <cmath>
#include <string>
#include <vector>

#include "hamlab/flow.hpp"
#include "hamlab/hamiltonian.hpp"
#include "hamlab/interpolate.hpp"
#include "hamlab/parallel.hpp"

namespace hamlab {

namespace detail {

// H-slice composed with a sampled map: out[p] = hslice(img(p))
inline std::vector<double> compose_slice(const Domain& d, const Interp& interp,
                                         const std::vector<double>& hslice,
                                         const std::vector<double>& img_x,
                                         const std::vector<double>& img_y) {
    std::vector<double> out(hslice.size(), 0.0);
    parallel_for_blocks(out.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t p = b; p < e; ++p) {
            if (!d.active(p)) continue;
            out[p] = interp.value(hslice, img_x[p], img_y[p]);
        }
    });
    return out;
}

inline SampledHamiltonian renorm(SampledHamiltonian h) {
    return h.domain.is_torus() ? normalize(h) : h;
}

} // namespace detail

/// Product Hamiltonian (H#K)_t = H_t + K_t o (phi_H^t)^{-1}; generates the
/// composed path phi_H phi_K.  Re-normalized on the torus since resampling
/// breaks exact mean-zero-ness.
inline SampledHamiltonian compose(const SampledHamiltonian& H, const SampledHamiltonian& K,
                                  const FlowPath& phi_H, int degree = 6) {
    H.require_same_grid(K, "compose");
    H.domain.require_same_grid(phi_H.domain, "compose");
    if (H.nt != phi_H.nt) fail(ErrorKind::DomainMismatch, "compose: time grids differ");
    Interp interp(H.domain, degree);
    SampledHamiltonian out(H.domain, H.nt);
    for (int k = 0; k < H.nt; ++k) {
        const GridMap& s = phi_H.slices[k];
        if (!s.has_inverse()) fail(ErrorKind::Usage, "inverse not available");
        auto kk = detail::compose_slice(H.domain, interp, K.slices[k], s.inv_x, s.inv_y);
        for (std::size_t p = 0; p < kk.size(); ++p)
            out.slices[k][p] = H.slices[k][p] + kk[p];
    }
    return detail::renorm(std::move(out));
}

/// Inverse Hamiltonian (Hbar)_t = -H_t o phi_H^t; generates the inverse
/// path t -> (phi_H^t)^{-1}.
inline SampledHamiltonian inverse(const SampledHamiltonian& H, const FlowPath& phi_H,
                                  int degree = 6) {
    H.domain.require_same_grid(phi_H.domain, "inverse");
    if (H.nt != phi_H.nt) fail(ErrorKind::DomainMismatch, "inverse: time grids differ");
    Interp interp(H.domain, degree);
    SampledHamiltonian out(H.domain, H.nt);
    for (int k = 0; k < H.nt; ++k) {
        const GridMap& s = phi_H.slices[k];
        auto hk = detail::compose_slice(H.domain, interp, H.slices[k], s.image_x, s.image_y);
        for (std::size_t p = 0; p < hk.size(); ++p) out.slices[k][p] = -hk[p];
    }
    return detail::renorm(std::move(out));
}

/// Pullback (psi^* H)_t = H_t o psi; generates psi^{-1} phi_H psi.  A map
/// failing the area audit is reported, not fatal.
inline SampledHamiltonian pullback(const SampledHamiltonian& H, const GridMap& psi,
                                   std::vector<std::string>* warnings = nullptr,
                                   int degree = 6) {
    H.domain.require_same_grid(psi.domain, "pullback");
    if (!psi.jacobian_det.empty()) {
        double worst = 0.0;
        for (std::size_t p = 0; p < psi.jacobian_det.size(); ++p)
            if (psi.domain.active(p))
                worst = std::max(worst, std::abs(psi.jacobian_det[p] - 1.0));
        if (worst > 1e-4 && warnings)
            warnings->push_back("pullback: map fails area audit (|det-1| = " +
                                std::to_string(worst) + "), proceeding");
    }
    Interp interp(H.domain, degree);
    SampledHamiltonian out(H.domain, H.nt);
    for (int k = 0; k < H.nt; ++k)
        out.slices[k] = detail::compose_slice(H.domain, interp, H.slices[k],
                                              psi.image_x, psi.image_y);
    return detail::renorm(std::move(out));
}

/// Tangent map Tan(lambda)(t,x) = H(t, phi_H^t(x)); the rolled Hamiltonian.
inline SampledHamiltonian tan_map(const SampledHamiltonian& H, const FlowPath& phi_H,
                                  int degree = 6) {
    H.domain.require_same_grid(phi_H.domain, "tan_map");
    if (H.nt != phi_H.nt) fail(ErrorKind::DomainMismatch, "tan_map: time grids differ");
    Interp interp(H.domain, degree);
    SampledHamiltonian out(H.domain, H.nt);
    for (int k = 0; k < H.nt; ++k) {
        const GridMap& s = phi_H.slices[k];
        out.slices[k] = detail::compose_slice(H.domain, interp, H.slices[k],
                                              s.image_x, s.image_y);
    }
    out.normalized = H.normalized;
    return out;
}

/// Developing map Dev(lambda)(t,x) = H(t,x); the identity on the sampled
/// representation.
inline SampledHamiltonian dev_map(const SampledHamiltonian& H) { return H; }

struct LengBetween {
    double via_group = 0.0;  // ||Hbar # K|| sampled through the flow
    double via_diff = 0.0;   // ||K - H||, equal by the product identity
};

/// Both evaluations of leng(phi_H^{-1} phi_K): through the group calculus
/// as ||Hbar # K||, and directly as ||K - H|| (the identity
/// (K_t - H_t) o phi_H^t for the product Hamiltonian).
inline LengBetween leng_between_both(const SampledHamiltonian& H, const SampledHamiltonian& K,
                                     const FlowPath& phi_H, int degree = 6) {
    H.require_same_grid(K, "leng_between");
    H.domain.require_same_grid(phi_H.domain, "leng_between");
    // Hbar # K is sampled through phi_Hbar, whose inverse slices are the
    // forward slices of phi_H; no second integration is needed.
    SampledHamiltonian hbar = inverse(H, phi_H, degree);
    Interp interp(H.domain, degree);
    SampledHamiltonian prod(H.domain, H.nt);
    for (int k = 0; k < H.nt; ++k) {
        const GridMap& s = phi_H.slices[k];
        auto kk = detail::compose_slice(H.domain, interp, K.slices[k], s.image_x, s.image_y);
        for (std::size_t p = 0; p < kk.size(); ++p)
            prod.slices[k][p] = hbar.slices[k][p] + kk[p];
    }
    prod = detail::renorm(std::move(prod));
    return {hofer_norm(prod), hofer_norm(linear_combination(1.0, K, -1.0, H))};
}

/// leng(phi_H^{-1} phi_K).  The two routes must agree within rel_tol; the
/// symmetric ||K - H|| value is returned so that the induced metrics keep
/// exact symmetry and triangle inequality on sampled data.
inline double leng_between(const SampledHamiltonian& H, const SampledHamiltonian& K,
                           const FlowPath& phi_H, int degree = 6,
                           double rel_tol = 1e-3) {
    LengBetween r = leng_between_both(H, K, phi_H, degree);
    double scale = std::max({r.via_group, r.via_diff, 1e-9});
    if (std::abs(r.via_group - r.via_diff) > rel_tol * scale + 1e-9)
        fail(ErrorKind::Contract, "calculus identity violated");
    return r.via_diff;
}

} // namespace hamlab

#endif
