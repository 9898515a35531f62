#include "edgelab/dynamics.hpp"
#include "edgelab/errors.hpp"
#include "edgelab/spectrum.hpp"
#include "edgelab/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

namespace edgelab {

SparseOperator SparseOperator::diagonal(const std::vector<double>& d) {
    SparseOperator op;
    op.dim = static_cast<int>(d.size());
    op.row_start.resize(op.dim + 1);
    for (int i = 0; i < op.dim; ++i) {
        op.row_start[i] = i;
        op.col.push_back(i);
        op.val.push_back(d[i]);
    }
    op.row_start[op.dim] = op.dim;
    return op;
}

void SparseOperator::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
    y.resize(dim);
    for (int i = 0; i < dim; ++i) {
        cd acc = 0;
        for (int p = row_start[i]; p < row_start[i + 1]; ++p) acc += val[p] * x[col[p]];
        y[i] = acc;
    }
}

double SparseOperator::row_sum_bound() const {
    double r = 0;
    for (int i = 0; i < dim; ++i) {
        double s = 0;
        for (int p = row_start[i]; p < row_start[i + 1]; ++p) s += std::abs(val[p]);
        r = std::max(r, s);
    }
    return r;
}

namespace {

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

Eigen::Vector2d rotate(const Eigen::Vector2d& v, double th) {
    return {std::cos(th) * v.x() - std::sin(th) * v.y(), std::sin(th) * v.x() + std::cos(th) * v.y()};
}

double ray_distance(const Eigen::Vector2d& x, const Eigen::Vector2d& from, const Eigen::Vector2d& dir) {
    const Eigen::Vector2d d = x - from;
    if (d.dot(dir) <= 0) return d.norm();
    return std::abs(cross(dir, d));
}

}

double InterfacePath::distance(const Eigen::Vector2d& x) const {
    if (!bent) return std::abs(cross(heading_in, x - corner));
    return std::min(ray_distance(x, corner, -heading_in), ray_distance(x, corner, heading_out));
}

bool InterfacePath::on_outgoing(const Eigen::Vector2d& x) const {
    if (!bent) return false;
    return ray_distance(x, corner, heading_out) < ray_distance(x, corner, -heading_in);
}

int material_map(const DomainSpec& spec, int m, int n) {
    if (!spec.bend) return material_sign(spec.kind, m, n);
    const Bend& bd = *spec.bend;
    const Cell d = frame_to_cell(spec.kind, m, n) - frame_to_cell(spec.kind, bd.vertex_m, 0);
    const bool in_first = cell_to_frame(spec.kind, d).second >= 0;
    const bool in_second = cell_to_frame(spec.kind, rotate60(d, -bd.turn)).second >= 0;
    const bool plus = bd.turn > 0 ? (in_first && in_second) : (in_first || in_second);
    return plus ? 1 : -1;
}

InterfacePath interface_path(const DomainSpec& spec) {
    const InterfaceFrame f = interface_frame(spec.kind);
    const Eigen::Vector2d va = cell_position(f.along), vb = cell_position(f.across);
    InterfacePath p;
    p.row_spacing = std::abs(cross(va, vb)) / va.norm();
    p.heading_in = va.normalized();
    const int vm = spec.bend ? spec.bend->vertex_m : 0;
    const Eigen::Vector2d v = cell_position(frame_to_cell(spec.kind, vm, 0));
    const Eigen::Vector2d q = v - 0.5 * vb;
    if (!spec.bend) {
        p.corner = q;
        p.heading_out = p.heading_in;
        return p;
    }
    const double th = spec.bend->turn * M_PI / 3;
    p.bent = true;
    p.heading_out = rotate(p.heading_in, th);
    const Eigen::Vector2d q2 = v + rotate(q - v, th);
    Eigen::Matrix2d a;
    a.col(0) = p.heading_in;
    a.col(1) = -p.heading_out;
    const Eigen::Vector2d st = a.inverse() * (q2 - q);
    p.corner = q + st[0] * p.heading_in;
    return p;
}

int Domain::index(int j, int m, int n) const {
    const int a = spec.extent_a, b = spec.extent_b;
    if (m < 0 || m >= a || n < n_lo || n >= n_lo + b || j < 1 || j > 6) return -1;
    return lookup[(static_cast<size_t>(m) * b + (n - n_lo)) * 6 + (j - 1)];
}

Eigen::Vector2d Domain::site_pos(int s) const { return cells[site_cell[s]].center + site_offset(site_j[s]); }

int Domain::material(int m, int n) const { return material_map(spec, m, n); }

Domain build_domain(const DomainSpec& spec) {
    spec.profile.validate();
    if (spec.extent_a < 20 || spec.extent_b < 20)
        throw ConfigError("domain extents must be at least 20 x 20 cells");
    if (spec.bend && (spec.bend->turn != 1 && spec.bend->turn != -1)) throw ConfigError("bend turn must be +1 or -1");
    if (spec.bend && (spec.bend->vertex_m <= 0 || spec.bend->vertex_m >= spec.extent_a - 1))
        throw ConfigError("bend vertex must lie inside the domain");
    Domain d;
    d.spec = spec;
    d.path = interface_path(spec);
    d.n_lo = -spec.extent_b / 2;
    d.lookup.assign(static_cast<size_t>(spec.extent_a) * spec.extent_b * 6, -1);
    for (int m = 0; m < spec.extent_a; ++m)
        for (int n = d.n_lo; n < d.n_lo + spec.extent_b; ++n) {
            DomainCell c;
            c.m = m, c.n = n;
            c.cell = frame_to_cell(spec.kind, m, n);
            c.center = cell_position(c.cell);
            if (spec.ribbon_rows && d.path.distance(c.center) > *spec.ribbon_rows * d.path.row_spacing) continue;
            c.side = material_map(spec, m, n);
            const int ci = static_cast<int>(d.cells.size());
            d.cells.push_back(c);
            for (int j = 1; j <= 6; ++j) {
                d.lookup[(static_cast<size_t>(m) * spec.extent_b + (n - d.n_lo)) * 6 + (j - 1)] = d.sites();
                d.site_j.push_back(j);
                d.site_cell.push_back(ci);
            }
        }
    if (d.sites() == 0) throw ConfigError("domain has no sites");

    const HoppingProfile& p = spec.profile;
    auto intra = [&](int side) { return side > 0 ? p.b_plus : p.b_minus; };
    auto inter = [&](int side) { return side > 0 ? p.b_plus + p.delta_plus : p.b_minus + p.delta_minus; };
    std::vector<std::vector<std::pair<int, double>>> rows(d.sites());
    for (int s = 0; s < d.sites(); ++s) {
        if (d.site_j[s] > 3) continue;
        const DomainCell& c = d.cells[d.site_cell[s]];
        for (const SiteIndex& nb : neighbors(SiteIndex(d.site_j[s], c.cell))) {
            const auto [m2, n2] = cell_to_frame(spec.kind, nb.cell);
            const int t = d.index(nb.j, m2, n2);
            if (t < 0) continue;
            const int side2 = d.cells[d.site_cell[t]].side;
            double w;
            if (nb.cell == c.cell)
                w = intra(c.side);
            else if (side2 == c.side)
                w = inter(c.side);
            else
                w = p.c;
            rows[s].push_back({t, -w});
            rows[t].push_back({s, -w});
        }
    }
    SparseOperator& h = d.h;
    h.dim = d.sites();
    h.row_start.assign(h.dim + 1, 0);
    for (int s = 0; s < h.dim; ++s) {
        std::sort(rows[s].begin(), rows[s].end());
        h.row_start[s] = static_cast<int>(h.col.size());
        for (auto [c, v] : rows[s]) {
            h.col.push_back(c);
            h.val.push_back(v);
        }
    }
    h.row_start[h.dim] = static_cast<int>(h.col.size());
    return d;
}

Eigen::Vector2cd mode_combination(const Eigen::Matrix2cd& m0, int direction) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m0);
    Eigen::Vector2cd v = es.eigenvectors().col(direction > 0 ? 1 : 0);
    const cd ph = std::abs(v[0]) > 0 ? std::conj(v[0]) / std::abs(v[0]) : cd(1);
    return v * ph;
}

WavepacketState initial_wavepacket(const Domain& d, double center, double width, int direction) {
    if (!(width > 0)) throw ConfigError("wavepacket width must be > 0");
    if (direction != 1 && direction != -1) throw ConfigError("direction must be +1 or -1");
    const HoppingProfile& p = d.spec.profile;
    const auto [a, b] = build_zero_modes(d.spec.kind, p);
    const Eigen::Vector2cd w = mode_combination(perturbation_m0(a, b, p), direction);
    WavepacketState st;
    st.amplitudes.resize(d.sites());
    for (int s = 0; s < d.sites(); ++s) {
        const DomainCell& c = d.cells[d.site_cell[s]];
        const double env = std::exp(-(c.m - center) * (c.m - center) / (2 * width * width));
        const int j = d.site_j[s] - 1;
        st.amplitudes[s] = env * (w[0] * a.amplitude(c.n)[j] + w[1] * b.amplitude(c.n)[j]);
    }
    const double nrm = st.amplitudes.norm();
    if (!(nrm > 0)) throw NotAZeroMode("wavepacket has no overlap with the domain");
    st.amplitudes /= nrm;
    st.initial_norm = 1;
    return st;
}

double default_dt(const SparseOperator& h) {
    const double rho = h.row_sum_bound();
    return rho > 0 ? 0.1 / rho : 0.1;
}

WavepacketState evolve(const WavepacketState& s, const SparseOperator& h, double dt, int steps) {
    if (s.amplitudes.size() != h.dim) throw ConfigError("state and operator dimensions differ");
    if (steps < 0) throw ConfigError("negative step count");
    const double rho = h.row_sum_bound();
    if (std::abs(dt) * rho > 0.5) throw StepTooLarge("dt * rho(H) exceeds 0.5");
    WavepacketState out = s;
    Eigen::VectorXcd& y = out.amplitudes;
    Eigen::VectorXcd k1, k2, k3, k4, tmp;
    const cd mi(0, -1);
    for (int i = 0; i < steps; ++i) {
        h.apply(y, k1);
        k1 *= mi;
        tmp = y + (dt / 2) * k1;
        h.apply(tmp, k2);
        k2 *= mi;
        tmp = y + (dt / 2) * k2;
        h.apply(tmp, k3);
        k3 *= mi;
        tmp = y + dt * k3;
        h.apply(tmp, k4);
        k4 *= mi;
        y += (dt / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    out.time = s.time + dt * steps;
    return out;
}

double norm_of(const WavepacketState& s) { return s.amplitudes.norm(); }

double energy_of(const WavepacketState& s, const SparseOperator& h) {
    Eigen::VectorXcd y;
    h.apply(s.amplitudes, y);
    return s.amplitudes.dot(y).real();
}

double center_m(const WavepacketState& s, const Domain& d) {
    double num = 0, den = 0;
    for (int i = 0; i < d.sites(); ++i) {
        const double w = std::norm(s.amplitudes[i]);
        num += w * d.cells[d.site_cell[i]].m;
        den += w;
    }
    return num / den;
}

namespace {

bool in_tube(const Domain& d, const DomainCell& c, double r) {
    return d.path.distance(c.center) <= (r + 0.5) * d.path.row_spacing + 1e-9;
}

}

double interface_mass(const WavepacketState& s, const Domain& d, double r) {
    double in = 0, all = 0;
    for (int i = 0; i < d.sites(); ++i) {
        const double w = std::norm(s.amplitudes[i]);
        all += w;
        if (in_tube(d, d.cells[d.site_cell[i]], r)) in += w;
    }
    return all > 0 ? in / all : 0;
}

Transmission transmission(const WavepacketState& s, const Domain& d, double r) {
    if (!d.path.bent) throw ConfigError("transmission needs a bent interface");
    double t = 0, rf = 0, rest = 0;
    std::vector<signed char> cls(d.cells.size());
    for (size_t c = 0; c < d.cells.size(); ++c) {
        const DomainCell& cell = d.cells[c];
        cls[c] = !in_tube(d, cell, r) ? 0 : (d.path.on_outgoing(cell.center) ? 1 : -1);
    }
    for (int i = 0; i < d.sites(); ++i) {
        const double w = std::norm(s.amplitudes[i]);
        switch (cls[d.site_cell[i]]) {
        case 1: t += w; break;
        case -1: rf += w; break;
        default: rest += w;
        }
    }
    const double all = t + rf + rest;
    return {t / all, rf / all, rest / all};
}

RunRecord run_dynamics(const Domain& d, const RunOptions& opt) {
    RunRecord rec;
    rec.dt = opt.dt ? *opt.dt : default_dt(d.h);
    if (!(rec.dt > 0)) throw ConfigError("dt must be > 0");
    if (rec.dt * d.h.row_sum_bound() > 0.5) throw StepTooLarge("dt * rho(H) exceeds 0.5");
    if (opt.stride < 1) throw ConfigError("stride must be >= 1");
    rec.steps = static_cast<int>(std::ceil(opt.t_end / rec.dt - 1e-9));
    WavepacketState st = initial_wavepacket(d, opt.center_m, opt.width, opt.direction);
    {
        Eigen::VectorXcd hy;
        d.h.apply(st.amplitudes, hy);
        rec.energy_scale = hy.norm();
    }
    int records = 0;
    auto record = [&] {
        rec.time.push_back(st.time);
        rec.norm.push_back(norm_of(st));
        rec.energy.push_back(energy_of(st, d.h));
        rec.mass.push_back(interface_mass(st, d, opt.tube_radius));
        rec.center.push_back(center_m(st, d));
        if (d.path.bent) {
            const Transmission tr = transmission(st, d, opt.tube_radius);
            rec.transmitted.push_back(tr.transmitted);
            rec.reflected.push_back(tr.reflected);
            rec.residual.push_back(tr.residual);
        }
        if (opt.snapshot_every > 0 && records % opt.snapshot_every == 0)
            rec.snapshots.push_back({st.time, st.amplitudes.cwiseAbs2()});
        ++records;
    };
    record();
    int done = 0;
    while (done < rec.steps) {
        const int chunk = std::min(opt.stride, rec.steps - done);
        st = evolve(st, d.h, rec.dt, chunk);
        done += chunk;
        record();
    }
    rec.final_state = st;
    return rec;
}

}
