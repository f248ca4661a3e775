#ifndef HAMLAB_IO_HPP
#define HAMLAB_IO_HPP

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hamlab/flow.hpp"
#include "hamlab/hamiltonian.hpp"
#include "hamlab/reparam.hpp"

namespace hamlab {

namespace io_detail {

inline std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Header {
    SurfaceKind kind;
    int nt, nx, ny;
};

inline void write_header(std::ostream& os, SurfaceKind kind, int nt, int nx, int ny) {
    os << "# domain: " << to_string(kind) << "\n";
    os << "# nt: " << nt << "\n";
    os << "# nx: " << nx << "\n";
    os << "# ny: " << ny << "\n";
}

inline Header read_header(std::istream& is, const std::string& path) {
    Header h{};
    std::string line;
    int got = 0;
    while (got < 4 && std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] != '#') fail(ErrorKind::Parse, path + ": missing header line");
        std::istringstream ls(line.substr(1));
        std::string key;
        ls >> key;
        std::string val;
        ls >> val;
        if (key == "domain:") {
            if (val == "torus2") h.kind = SurfaceKind::Torus2;
            else if (val == "disc2") h.kind = SurfaceKind::Disc2;
            else fail(ErrorKind::Parse, path + ": unknown domain '" + val + "'");
        } else if (key == "nt:") h.nt = std::stoi(val);
        else if (key == "nx:") h.nx = std::stoi(val);
        else if (key == "ny:") h.ny = std::stoi(val);
        else fail(ErrorKind::Parse, path + ": unknown header key '" + key + "'");
        ++got;
    }
    if (got < 4) fail(ErrorKind::Parse, path + ": truncated header");
    if (h.nt < 1 || h.nx < 8 || h.ny < 8) fail(ErrorKind::Parse, path + ": bad header values");
    return h;
}

inline std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) fail(ErrorKind::Io, "cannot open " + path);
    return is;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) fail(ErrorKind::Io, "cannot write " + path);
    return os;
}

} // namespace io_detail

/// Field file: '#' headers (domain, nt, nx, ny) then records
/// `t_index,i,j,value` in row-major order, reals with 17 significant
/// digits.
inline void write_field(const std::string& path, const SampledHamiltonian& h) {
    auto os = io_detail::open_out(path);
    io_detail::write_header(os, h.domain.kind, h.nt, h.domain.nx, h.domain.ny);
    for (int k = 0; k < h.nt; ++k)
        for (int i = 0; i < h.domain.nx; ++i)
            for (int j = 0; j < h.domain.ny; ++j)
                os << k << ',' << i << ',' << j << ','
                   << io_detail::fmt17(h.at(k, i, j)) << "\n";
}

inline SampledHamiltonian read_field(const std::string& path, double disc_margin = 0.05) {
    auto is = io_detail::open_in(path);
    auto hd = io_detail::read_header(is, path);
    Domain d(hd.kind, hd.nx, hd.ny, hd.kind == SurfaceKind::Disc2 ? disc_margin : 0.0);
    SampledHamiltonian h(d, hd.nt < 2 ? 2 : hd.nt);
    bool pad = hd.nt < 2;  // single-slice fields load as constant-in-t
    std::string line;
    long records = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        int k, i, j;
        double v;
        if (std::sscanf(line.c_str(), "%d,%d,%d,%lf", &k, &i, &j, &v) != 4)
            fail(ErrorKind::Parse, path + ": bad record '" + line + "'");
        if (k < 0 || k >= hd.nt || i < 0 || i >= hd.nx || j < 0 || j >= hd.ny)
            fail(ErrorKind::Parse, path + ": record index out of range");
        if (!std::isfinite(v)) fail(ErrorKind::NonFinite, "non-finite field");
        h.at(k, i, j) = v;
        ++records;
    }
    if (records != static_cast<long>(hd.nt) * hd.nx * hd.ny)
        fail(ErrorKind::Parse, path + ": wrong record count");
    if (pad) h.slices[1] = h.slices[0];
    return h;
}

/// Flow file: field-file header plus records `t_index,i,j,image_x,image_y`
/// (unwrapped on the torus).  Inverse slices are not serialized; use
/// reconstruct_inverses after loading when an operation needs them.
inline void write_flow(const std::string& path, const FlowPath& p) {
    auto os = io_detail::open_out(path);
    io_detail::write_header(os, p.domain.kind, p.nt, p.domain.nx, p.domain.ny);
    for (int k = 0; k < p.nt; ++k)
        for (int i = 0; i < p.domain.nx; ++i)
            for (int j = 0; j < p.domain.ny; ++j) {
                auto q = p.domain.index(i, j);
                os << k << ',' << i << ',' << j << ','
                   << io_detail::fmt17(p.slices[k].image_x[q]) << ','
                   << io_detail::fmt17(p.slices[k].image_y[q]) << "\n";
            }
}

inline FlowPath read_flow(const std::string& path, double disc_margin = 0.05) {
    auto is = io_detail::open_in(path);
    auto hd = io_detail::read_header(is, path);
    if (hd.nt < 2) fail(ErrorKind::Parse, path + ": flow needs at least 2 time samples");
    Domain d(hd.kind, hd.nx, hd.ny, hd.kind == SurfaceKind::Disc2 ? disc_margin : 0.0);
    FlowPath p;
    p.domain = d;
    p.nt = hd.nt;
    p.slices.assign(hd.nt, GridMap(d));
    for (auto& s : p.slices) {
        s.image_x.assign(d.size(), 0.0);
        s.image_y.assign(d.size(), 0.0);
    }
    std::string line;
    long records = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        int k, i, j;
        double x, y;
        if (std::sscanf(line.c_str(), "%d,%d,%d,%lf,%lf", &k, &i, &j, &x, &y) != 5)
            fail(ErrorKind::Parse, path + ": bad record '" + line + "'");
        if (k < 0 || k >= hd.nt || i < 0 || i >= hd.nx || j < 0 || j >= hd.ny)
            fail(ErrorKind::Parse, path + ": record index out of range");
        if (!std::isfinite(x) || !std::isfinite(y))
            fail(ErrorKind::NonFinite, "non-finite field");
        auto q = d.index(i, j);
        p.slices[k].image_x[q] = x;
        p.slices[k].image_y[q] = y;
        ++records;
    }
    if (records != static_cast<long>(hd.nt) * hd.nx * hd.ny)
        fail(ErrorKind::Parse, path + ": wrong record count");
    return p;
}

/// Rebuilds inverse slices of a loaded path by Newton iteration on the
/// interpolated displacement, seeding each slice from the previous one
/// (valid because per-interval motion is under half a period).
inline void reconstruct_inverses(FlowPath& p, int degree = 6) {
    const Domain& d = p.domain;
    const std::size_t n = d.size();
    Interp interp(d, degree);
    std::vector<double> base_x(n), base_y(n);
    for (int i = 0; i < d.nx; ++i)
        for (int j = 0; j < d.ny; ++j) {
            base_x[d.index(i, j)] = d.x_of(i);
            base_y[d.index(i, j)] = d.y_of(j);
        }
    p.slices[0].inv_x = base_x;
    p.slices[0].inv_y = base_y;
    std::vector<double> dx(n), dy(n);
    const double h = 1e-6;
    for (int k = 1; k < p.nt; ++k) {
        GridMap& s = p.slices[k];
        for (std::size_t q = 0; q < n; ++q) {
            dx[q] = s.image_x[q] - base_x[q];
            dy[q] = s.image_y[q] - base_y[q];
        }
        const auto& seed_x = p.slices[k - 1].inv_x;
        const auto& seed_y = p.slices[k - 1].inv_y;
        s.inv_x.assign(n, 0.0);
        s.inv_y.assign(n, 0.0);
        std::vector<int> bad(parallel_block_count(n), 0);
        parallel_for_blocks_indexed(n, [&](std::size_t blk, std::size_t b, std::size_t e) {
            for (std::size_t q = b; q < e; ++q) {
                double zx = seed_x[q], zy = seed_y[q];
                double rx = 0, ry = 0;
                for (int it = 0; it < 12; ++it) {
                    rx = zx + interp.value(dx, zx, zy) - base_x[q];
                    ry = zy + interp.value(dy, zx, zy) - base_y[q];
                    if (std::abs(rx) < 1e-12 && std::abs(ry) < 1e-12) break;
                    double j11 = 1 + (interp.value(dx, zx + h, zy) - interp.value(dx, zx - h, zy)) / (2 * h);
                    double j12 = (interp.value(dx, zx, zy + h) - interp.value(dx, zx, zy - h)) / (2 * h);
                    double j21 = (interp.value(dy, zx + h, zy) - interp.value(dy, zx - h, zy)) / (2 * h);
                    double j22 = 1 + (interp.value(dy, zx, zy + h) - interp.value(dy, zx, zy - h)) / (2 * h);
                    double det = j11 * j22 - j12 * j21;
                    if (std::abs(det) < 1e-12) break;
                    zx -= (rx * j22 - ry * j12) / det;
                    zy -= (j11 * ry - j21 * rx) / det;
                }
                if (std::abs(rx) > 1e-8 || std::abs(ry) > 1e-8) bad[blk] = 1;
                s.inv_x[q] = zx;
                s.inv_y[q] = zy;
            }
        });
        for (int b : bad)
            if (b) fail(ErrorKind::Resolution, "refine time sampling");
    }
}

/// Reparameterization file: bare `t,zeta,dzeta` lines.
inline void write_reparam(const std::string& path, const ReparamMap& z) {
    auto os = io_detail::open_out(path);
    for (int k = 0; k < z.nt; ++k)
        os << io_detail::fmt17(z.t_of(k)) << ',' << io_detail::fmt17(z.zeta[k]) << ','
           << io_detail::fmt17(z.dzeta[k]) << "\n";
}

inline ReparamMap read_reparam(const std::string& path) {
    auto is = io_detail::open_in(path);
    ReparamMap z;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        double t, zv, dzv;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &zv, &dzv) != 3)
            fail(ErrorKind::Parse, path + ": bad record '" + line + "'");
        z.zeta.push_back(zv);
        z.dzeta.push_back(dzv);
    }
    z.nt = static_cast<int>(z.zeta.size());
    if (z.nt < 2) fail(ErrorKind::Parse, path + ": too few samples");
    z.validate();
    return z;
}

} // namespace hamlab

#endif
