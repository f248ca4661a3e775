#ifndef HAMLAB_METRICS_HPP
#define HAMLAB_METRICS_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "hamlab/flow.hpp"
#include "hamlab/group.hpp"

namespace hamlab {

/// A Hamiltonian path together with its generating (developing-map image)
/// Hamiltonian -- the unfolding-map coordinates of a point of path space.
struct PathPair {
    FlowPath path;
    SampledHamiltonian ham;
    double c0_exclusion = 0.0;  // disc core radius excluded from C0 metrics

    static PathPair integrated(const SampledHamiltonian& H, const FlowOptions& opts = {},
                               double c0_exclusion = 0.0) {
        PathPair pp;
        pp.ham = H;
        pp.path = integrate_flow(H, opts);
        pp.c0_exclusion = c0_exclusion;
        return pp;
    }
};

/// C0 distance of paths: max over time slices of dbar of the maps.
inline double dbar_paths(const FlowPath& a, const FlowPath& b, double min_radius = 0.0) {
    a.domain.require_same_grid(b.domain, "dbar_paths");
    if (a.nt != b.nt) fail(ErrorKind::DomainMismatch, "dbar_paths: time grids differ");
    double m = 0.0;
    for (int k = 0; k < a.nt; ++k)
        m = std::max(m, dbar_maps(a.slices[k], b.slices[k], min_radius));
    return m;
}

/// Hofer distance of paths: leng(lambda^{-1} mu) through the group
/// calculus (with its built-in ||K - H|| cross-check).
inline double hofer_dist(const PathPair& a, const PathPair& b) {
    return leng_between(a.ham, b.ham, a.path);
}

/// Hamiltonian metric: Hofer part plus C0 part, exactly.
inline double dham(const PathPair& a, const PathPair& b) {
    double excl = std::max(a.c0_exclusion, b.c0_exclusion);
    return hofer_dist(a, b) + dbar_paths(a.path, b.path, excl);
}

/// Pairwise distance tables of a sequence of paths, with the Cauchy
/// modulus k -> sup_{i,j >= k} dist(i,j) and a tail verdict per metric.
struct ConvergenceReport {
    int n = 0;
    double tau = 0.0;
    std::vector<std::vector<double>> dbar_matrix, hofer_matrix, dham_matrix;
    std::vector<double> dbar_modulus, hofer_modulus, dham_modulus;  // size n-1
    bool dbar_cauchy = false, hofer_cauchy = false, dham_cauchy = false;
    std::vector<double> ev1_trace;  // dbar of successive time-1 maps

    /// dham must dominate both summands entrywise (it is literally the sum).
    double sum_identity_residual() const {
        double r = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                r = std::max(r, std::abs(dham_matrix[i][j] - hofer_matrix[i][j] -
                                         dbar_matrix[i][j]));
        return r;
    }
};

namespace detail {

inline std::vector<double> cauchy_modulus(const std::vector<std::vector<double>>& m) {
    int n = static_cast<int>(m.size());
    std::vector<double> mod(n - 1, 0.0);
    for (int k = 0; k < n - 1; ++k) {
        double sup = 0.0;
        for (int i = k; i < n; ++i)
            for (int j = k; j < n; ++j) sup = std::max(sup, m[i][j]);
        mod[k] = sup;
    }
    return mod;
}

} // namespace detail

/// Fills the pairwise tables and Cauchy verdicts at tolerance tau.  The
/// verdict asks for tail control: the modulus at the last index must fall
/// below tau.
inline ConvergenceReport cauchy_report(const std::vector<PathPair>& seq, double tau) {
    int n = static_cast<int>(seq.size());
    if (n < 3) fail(ErrorKind::Usage, "cauchy_report needs at least 3 elements");
    ConvergenceReport rep;
    rep.n = n;
    rep.tau = tau;
    auto zeros = std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0));
    rep.dbar_matrix = zeros;
    rep.hofer_matrix = zeros;
    rep.dham_matrix = zeros;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double excl = std::max(seq[i].c0_exclusion, seq[j].c0_exclusion);
            double db = dbar_paths(seq[i].path, seq[j].path, excl);
            double hf = hofer_dist(seq[i], seq[j]);
            rep.dbar_matrix[i][j] = rep.dbar_matrix[j][i] = db;
            rep.hofer_matrix[i][j] = rep.hofer_matrix[j][i] = hf;
            rep.dham_matrix[i][j] = rep.dham_matrix[j][i] = hf + db;
        }
    rep.dbar_modulus = detail::cauchy_modulus(rep.dbar_matrix);
    rep.hofer_modulus = detail::cauchy_modulus(rep.hofer_matrix);
    rep.dham_modulus = detail::cauchy_modulus(rep.dham_matrix);
    rep.dbar_cauchy = rep.dbar_modulus.back() <= tau;
    rep.hofer_cauchy = rep.hofer_modulus.back() <= tau;
    rep.dham_cauchy = rep.dham_modulus.back() <= tau;
    for (int i = 0; i + 1 < n; ++i) {
        double excl = std::max(seq[i].c0_exclusion, seq[i + 1].c0_exclusion);
        rep.ev1_trace.push_back(
            dbar_maps(seq[i].path.time_one(), seq[i + 1].path.time_one(), excl));
    }
    return rep;
}

struct C0Limit {
    FlowPath path;          // the final element, standing in for the limit
    double modulus = 0.0;   // its C0 error bar from the Cauchy modulus
};

/// The numerical representative of the C0-limit path: the last element
/// annotated with the Cauchy modulus as its error bar.
inline C0Limit extract_c0_limit(const std::vector<PathPair>& seq, double tau) {
    ConvergenceReport rep = cauchy_report(seq, tau);
    if (!rep.dbar_cauchy)
        fail(ErrorKind::Contract, "sequence is not C0-Cauchy at tolerance");
    return {seq.back().path, rep.dbar_modulus.back()};
}

} // namespace hamlab

#endif
