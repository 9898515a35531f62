#include "edgelab/transfer.hpp"
#include "edgelab/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <string>

namespace edgelab {

namespace {

void check_material(double b, double eps) {
    if (!(b > 0) || !(b + eps > 0))
        throw ConfigError("material needs b > 0 and b + eps > 0");
}

// amplitudes below this fraction of the peak are not stored
constexpr double kTail = 1e-16;

int tail_cells(double rate) {
    if (!(rate > 0) || rate >= 1) throw NotAZeroMode("tail does not decay");
    return static_cast<int>(std::ceil(std::log(kTail) / std::log(rate))) + 1;
}

}

AMatrices a_matrices(double b, double eps, double k) {
    check_material(b, eps);
    const cd e = std::polar(1.0, k);
    const double B = b + eps;
    AMatrices m;
    m.a[0] << -b, 0, -b, -B / e;
    m.a[1] << -b, -B * e, 0, -b;
    m.a[2] << -B / e, 0, -b, -b;
    m.a[3] << -b, -b, 0, -B;
    m.a[4] << -b, 0, -B * e, -b;
    m.a[5] << -B, -b, 0, -b;
    return m;
}

InterfaceAMatrices interface_a_matrices(const HoppingProfile& p, double k) {
    p.validate();
    const cd e = std::polar(1.0, k);
    InterfaceAMatrices m;
    m.a1_tilde << -p.b_plus, 0, -p.b_plus, -p.c / e;
    m.a6_tilde << -p.c, -p.b_minus, 0, -p.b_minus;
    return m;
}

Mat2 propagation_matrix(double b, double eps, double k) {
    const auto A = a_matrices(b, eps, k).a;
    return -(A[5].inverse() * A[4] * A[3].inverse() * A[2] * A[1].inverse() * A[0]);
}

PElements p_elements(double b, double eps, double k) {
    check_material(b, eps);
    const cd e = std::polar(1.0, k);
    const double r = (b + eps) / b;
    PElements el;
    el.alpha = -e * r * r + 2.0 * r - 1.0 / e + e * e - 4.0 * e / r + 4.0 / (r * r);
    el.beta = -r * r * r + r * r / e + e * r - 3.0 + 2.0 / (e * r);
    el.gamma = r * r * r * r - e * r * r + 2.0 * r - 1.0 / e;
    return el;
}

Mat2 assemble_p(const PElements& el, double k) {
    Mat2 m;
    m << el.alpha, el.beta, -std::polar(1.0, k) * el.beta, el.gamma;
    return m;
}

PMatrixReport p_eigen(double b, double eps, double k) {
    check_material(b, eps);
    if (eps == 0 && std::remainder(k, 2 * M_PI) == 0)
        throw DegenerateGapless("P is the identity at eps = 0, k = 0");
    const PElements el = p_elements(b, eps, k);
    PMatrixReport r;
    r.alpha = el.alpha, r.beta = el.beta, r.gamma = el.gamma;
    const cd e = std::polar(1.0, k);
    const cd tr = el.alpha + el.gamma;
    const cd det = el.alpha * el.gamma + e * el.beta * el.beta;
    const cd disc = std::sqrt(tr * tr - 4.0 * det);
    cd l1 = (tr - disc) / 2.0, l2 = (tr + disc) / 2.0;
    if (std::abs(l1) > std::abs(l2)) std::swap(l1, l2);
    // the smaller root is better computed from the product
    l1 = det / l2;
    r.lambda1 = l1, r.lambda2 = l2;
    auto vec = [&](cd lam) {
        Vec2 v;
        v << 1.0, (lam - el.alpha) / el.beta;
        return v;
    };
    r.v1 = vec(l1);
    r.v2 = vec(l2);
    if (k == 0) {
        const double a = el.alpha.real(), bb = el.beta.real(), g = el.gamma.real();
        const double f1 = (-a + g - std::sqrt((a - g) * (a - g) - 4 * bb * bb)) / (2 * bb);
        r.f1 = f1;
        r.v1 << 1.0, f1;
        r.v2 << 1.0, 1.0 / f1;
    }
    return r;
}

double matching_c_star(const HoppingProfile& p) {
    p.validate();
    if (p.delta_plus == 0 || p.delta_minus == 0)
        throw DegenerateGapless("matching coupling needs nonzero delta on both sides");
    const double fp = *p_eigen(p.b_plus, p.delta_plus, 0).f1;
    const double fm = *p_eigen(p.b_minus, p.delta_minus, 0).f1;
    return std::sqrt((p.b_plus + p.delta_plus) * (p.b_minus + p.delta_minus) * fp * fm);
}

double type1_alignment(const HoppingProfile& p, double c_test, double k) {
    p.validate();
    if (!(c_test > 0)) throw ConfigError("c_test must be > 0");
    const auto rp = p_eigen(p.b_plus, p.delta_plus, k);
    const auto rm = p_eigen(p.b_minus, p.delta_minus, k);
    Vec2 x = rp.v1;
    x[1] *= (p.b_plus + p.delta_plus) * (p.b_minus + p.delta_minus) / (c_test * c_test);
    const Vec2& y = rm.v2;
    return std::abs(x[0] * y[1] - x[1] * y[0]) / (x.norm() * y.norm());
}

bool type1_zero_exists(const HoppingProfile& p, double c_test, double k) {
    return type1_alignment(p, c_test, k) < 1e-10;
}

Cell6 ZeroMode::amplitude(int n) const {
    if (n < n_min || n > n_max()) return Cell6::Zero();
    return cells[n - n_min];
}

double ZeroMode::norm() const {
    double s = 0;
    for (const auto& c : cells) s += c.squaredNorm();
    return std::sqrt(s);
}

int ZeroMode::support_half_width() const { return std::max(std::abs(n_min), std::abs(n_max())); }

Eigen::VectorXcd ZeroMode::on_chain(int N) const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(chain_dim(N));
    for (int n = std::max(-N, n_min); n <= std::min(N, n_max()); ++n)
        v.segment<6>(chain_index(1, n, N)) = cells[n - n_min];
    return v;
}

double mode_residual(const ZeroMode& mode, const HoppingProfile& prof) {
    const int N = mode.support_half_width() + 3;
    const Eigen::VectorXcd x = mode.on_chain(N);
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(x.size());
    for (const auto& t : chain_terms(mode.kind, prof, N))
        y[chain_index(t.row_j, t.row_n, N)] -= t.weight * x[chain_index(t.col_j, t.col_n, N)];
    return y.norm() / x.norm();
}

namespace {

void finish_mode(ZeroMode& m, const HoppingProfile& prof) {
    const double nrm = m.norm();
    for (auto& c : m.cells) c /= nrm;
    m.residual = mode_residual(m, prof);
    if (!(m.residual < 1e-10))
        throw NotAZeroMode("type " + std::string(kind_name(m.kind)) + " mode " + m.label +
                           " residual " + [&] { char buf[32]; std::snprintf(buf, sizeof buf, "%.3e", m.residual); return std::string(buf); }());
}

}

std::pair<ZeroMode, ZeroMode> build_type1_zero_modes(const HoppingProfile& p) {
    p.validate();
    if (p.delta_plus == 0 || p.delta_minus == 0)
        throw DegenerateGapless("type I zero modes need nonzero delta on both sides");
    const auto rp = p_eigen(p.b_plus, p.delta_plus, 0);
    const auto rm = p_eigen(p.b_minus, p.delta_minus, 0);
    const double l1 = rp.lambda1.real();
    const double l2 = rm.lambda2.real();
    const auto Ap = a_matrices(p.b_plus, p.delta_plus, 0).a;
    const auto Am = a_matrices(p.b_minus, p.delta_minus, 0).a;
    const Mat2 s12 = -Ap[1].inverse() * Ap[0];
    const Mat2 s34 = -Ap[3].inverse() * Ap[2];
    const Mat2 r56 = -Am[4].inverse() * Am[5];
    const Mat2 r34 = -Am[2].inverse() * Am[3];

    // even-pair counts on each side
    const int mp = tail_cells(l1) + 1;
    const int mm = tail_cells(1.0 / l2) + 1;

    ZeroMode a;
    a.kind = InterfaceKind::TypeI;
    a.label = 'A';
    a.n_min = -2 * mm;
    a.cells.assign(2 * mm + 2 * mp + 2, Cell6::Zero());
    auto u = [&](int j, int n) -> cd& { return a.cells[n - a.n_min][j - 1]; };

    // + side: effective pair (u4_{2m}, u6_{2m-1}) = l1^m v1
    const Vec2 v1 = rp.v1;
    for (int m = 0; m <= mp; ++m) {
        const Vec2 x = std::pow(l1, m) * v1;
        const Vec2 y = s12 * x;  // (u6, u5) at 2m
        const Vec2 z = s34 * y;  // (u5, u4) at 2m+1
        u(4, 2 * m) = x[0];
        u(6, 2 * m) = y[0];
        u(5, 2 * m) = y[1];
        u(5, 2 * m + 1) = z[0];
        u(4, 2 * m + 1) = z[1];
        u(6, 2 * m + 1) = std::pow(l1, m + 1) * v1[1];
    }
    // the true u6_{-1} differs from the effective one by the interface coupling
    const cd u6m1 = v1[1] * (p.b_plus + p.delta_plus) / p.c;
    u(6, -1) = u6m1;

    // - side: effective pair (A6^-1 At6) (u4_0, u6_{-1}) projected on v2(-)
    Vec2 eff;
    eff << u(4, 0) * p.c / (p.b_minus + p.delta_minus), u6m1;
    const Vec2 v2 = rm.v2;
    const cd g2 = v2.dot(eff) / v2.squaredNorm();
    for (int m = 0; m >= -mm + 1; --m) {
        const Vec2 x = g2 * std::pow(l2, m) * v2;  // (u4_{2m}, u6_{2m-1}) effective
        const Vec2 z = r56 * x;                    // (u5, u4) at 2m-1
        const Vec2 y = r34 * z;                    // (u6, u5) at 2m-2
        u(5, 2 * m - 1) = z[0];
        u(4, 2 * m - 1) = z[1];
        if (m < 0) u(6, 2 * m - 1) = x[1];
        u(6, 2 * m - 2) = y[0];
        u(5, 2 * m - 2) = y[1];
        u(4, 2 * m - 2) = g2 * std::pow(l2, m - 1) * v2[0];
    }
    a.decay_rate = std::max(l1, 1.0 / l2);

    // drop imaginary round-off and fix the sign of the first nonzero entry
    for (auto& c : a.cells)
        for (int j = 0; j < 6; ++j) c[j] = c[j].real();
    double first = 0;
    for (const auto& c : a.cells) {
        for (int j = 0; j < 6 && first == 0; ++j) first = c[j].real();
        if (first != 0) break;
    }
    if (first < 0)
        for (auto& c : a.cells) c = -c;
    finish_mode(a, p);

    ZeroMode bm = a;
    bm.label = 'B';
    for (auto& c : bm.cells) {
        Cell6 s;
        s << std::conj(c[3]), std::conj(c[4]), std::conj(c[5]), std::conj(c[0]), std::conj(c[1]), std::conj(c[2]);
        c = s;
    }
    finish_mode(bm, p);
    return {a, bm};
}

namespace {

Mat3 q_form(double ratio, double s, double k) {
    const cd h = std::polar(1.0, k / 2);
    const cd hc = std::conj(h);
    Mat3 q;
    q << 0.0, -ratio * hc, ratio * hc,
         -ratio * h, 0.0, ratio * h,
         s * h, s * hc, 0.0;
    return q;
}

}

Mat3 q_matrix(double b, double eps, double k) {
    check_material(b, eps);
    const double B = b + eps;
    return q_form(B / b, b * b / (B * B), k);
}

Mat3 q_chain_a(const HoppingProfile& p, int n, double k) {
    auto r = [&](int m) { return coeffs_type2(p, m); };
    return q_form(r(n).c / r(n).b, r(n + 2).b * r(n + 1).b / (r(n + 1).c * r(n).d), k);
}

Mat3 q_chain_b(const HoppingProfile& p, int n, double k) {
    auto r = [&](int m) { return coeffs_type2(p, m); };
    return q_form(r(n).c / r(n + 1).b, r(n - 1).b * r(n).b / (r(n - 1).c * r(n - 1).d), k);
}

QBoundary q_boundary_matrices(const HoppingProfile& p, double k) {
    p.validate();
    const double bp = p.b_plus, bm = p.b_minus, Bp = p.b_plus + p.delta_plus, Bm = p.b_minus + p.delta_minus;
    const double c = p.c;
    QBoundary q;
    q.a_m1 = q_form(c / bm, bp * bp / (Bp * c), k);
    q.a_m2 = q_form(Bm / bm, bp * bm / (c * c), k);
    q.b_0 = q_form(Bp / bp, bp * bm / (c * c), k);
    q.b_m1 = q_form(c / bp, bm * bm / (Bm * c), k);
    return q;
}

QMatrixReport q_eigen(double b, double eps) {
    check_material(b, eps);
    const double r = (b + eps) / b;
    QMatrixReport q;
    const double root = std::sqrt(r * r + 8.0 / r);
    q.mu1 = -r / 2 - root / 2;
    q.mu2 = -r / 2 + root / 2;
    q.mu3 = r;
    q.t1 = -r / q.mu2;
    q.t2 = -r / q.mu1;
    q.v1 << q.t1, q.t1, 1.0;
    q.v2 << q.t2, q.t2, 1.0;
    q.v3 << cd(0, 1), cd(0, -1), 0.0;
    return q;
}

bool type2_zero_exists(const HoppingProfile& p) {
    p.validate();
    if (p.delta_plus == 0 || p.delta_minus == 0)
        throw DegenerateGapless("type II existence needs nonzero delta on both sides");
    return p.delta_plus * p.delta_minus < 0;
}

namespace {

// reduced vector -> (w_first, w_mid, w_last) of one sublattice block at k = 0
Eigen::Vector3cd unreduce(const Vec3& s) {
    const cd first = s[0] - s[2];
    return {first, s[2], std::conj(first)};
}

// amplitude of the sym vector s on (t1,t1,1), (t2,t2,1)
std::pair<cd, cd> split_symmetric(const Vec3& s, const QMatrixReport& q) {
    const cd h1 = (s[0] - q.t2 * s[2]) / (q.t1 - q.t2);
    return {h1, s[2] - h1};
}

}

std::pair<ZeroMode, ZeroMode> build_type2_zero_modes(const HoppingProfile& p) {
    if (!type2_zero_exists(p))
        throw NotAZeroMode("type II zero modes need delta_plus * delta_minus < 0");
    const auto qp = q_eigen(p.b_plus, p.delta_plus);
    const auto qm = q_eigen(p.b_minus, p.delta_minus);
    const auto qb = q_boundary_matrices(p, 0);
    const bool plus_dilated = p.delta_plus > 0;

    // reduced vectors per cell; block 0 is sites 1-3 (xi), block 1 is sites 4-6 (chi)
    struct Reduced {
        int n_min;
        std::vector<Vec3> v;
        int block;
        double rate;
    };
    auto fill = [](Reduced& r, int n_lo, int n_hi, auto&& at) {
        r.n_min = n_lo;
        r.v.resize(n_hi - n_lo + 1);
        for (int n = n_lo; n <= n_hi; ++n) r.v[n - n_lo] = at(n);
    };

    Reduced anti, sym;
    if (plus_dilated) {
        // antisymmetric chi on sites 4-6
        const Vec3 chi0 = qp.v3;
        const Vec3 chim2 = qb.a_m2 * (qb.a_m1 * chi0);
        const cd h3 = chim2[0] / qm.v3[0];
        const double rp = 1.0 / qp.mu3, rm = qm.mu3;
        anti.block = 1;
        anti.rate = std::max(rp, rm);
        const Vec3 chim1 = qb.a_m1 * chi0;
        fill(anti, -2 - tail_cells(rm), tail_cells(rp), [&](int n) -> Vec3 {
            if (n >= 0) return std::pow(qp.mu3, -n) * chi0;
            if (n == -1) return chim1;
            return h3 * std::pow(qm.mu3, -2 - n) * qm.v3;
        });
        // symmetric xi on sites 1-3
        const Vec3 xi1 = qp.v2;
        const Vec3 xi0 = qb.b_0.inverse() * xi1;
        const Vec3 xim1 = qb.b_m1.inverse() * xi0;
        const auto [h5, h6] = split_symmetric(xim1, qm);
        const double sp = qp.mu2, sm = 1.0 / std::min(std::abs(qm.mu1), std::abs(qm.mu2));
        sym.block = 0;
        sym.rate = std::max(sp, sm);
        fill(sym, -1 - tail_cells(sm), 1 + tail_cells(sp), [&](int n) -> Vec3 {
            if (n >= 1) return std::pow(qp.mu2, n - 1) * xi1;
            if (n == 0) return xi0;
            return h5 * std::pow(qm.mu1, n + 1) * qm.v1 + h6 * std::pow(qm.mu2, n + 1) * qm.v2;
        });
    } else {
        // antisymmetric xi on sites 1-3
        const Vec3 xi1 = qp.v3;
        const Vec3 xi0 = qb.b_0.inverse() * xi1;
        const Vec3 xim1 = qb.b_m1.inverse() * xi0;
        const cd h = xim1[0] / qm.v3[0];
        const double rp = qp.mu3, rm = 1.0 / qm.mu3;
        anti.block = 0;
        anti.rate = std::max(rp, rm);
        fill(anti, -1 - tail_cells(rm), 1 + tail_cells(rp), [&](int n) -> Vec3 {
            if (n >= 1) return std::pow(qp.mu3, n - 1) * xi1;
            if (n == 0) return xi0;
            return h * std::pow(qm.mu3, n + 1) * qm.v3;
        });
        // symmetric chi on sites 4-6, seeded on the - side
        const Vec3 chim2 = qm.v2;
        const Vec3 chim1 = qb.a_m2.inverse() * chim2;
        const Vec3 chi0 = qb.a_m1.inverse() * chim1;
        const auto [h1, h2] = split_symmetric(chi0, qp);
        const double sp = 1.0 / std::min(std::abs(qp.mu1), std::abs(qp.mu2)), sm = qm.mu2;
        sym.block = 1;
        sym.rate = std::max(sp, sm);
        fill(sym, -2 - tail_cells(sm), tail_cells(sp), [&](int n) -> Vec3 {
            if (n >= 0) return h1 * std::pow(qp.mu1, -n) * qp.v1 + h2 * std::pow(qp.mu2, -n) * qp.v2;
            if (n == -1) return chim1;
            return std::pow(qm.mu2, -2 - n) * chim2;
        });
    }

    auto to_mode = [&](const Reduced& r, char label) {
        ZeroMode m;
        m.kind = InterfaceKind::TypeII;
        m.label = label;
        m.n_min = r.n_min;
        m.decay_rate = r.rate * r.rate;
        for (const auto& s : r.v) {
            Cell6 c = Cell6::Zero();
            c.segment<3>(3 * r.block) = unreduce(s);
            m.cells.push_back(c);
        }
        return m;
    };
    ZeroMode a = to_mode(anti, 'A');
    ZeroMode b = to_mode(sym, 'B');

    // make entries real: the antisymmetric mode is purely imaginary before this
    auto realify = [](ZeroMode& m, int probe_j) {
        cd peak = 0;
        for (const auto& c : m.cells)
            if (std::abs(c[probe_j]) > std::abs(peak)) peak = c[probe_j];
        const cd ph = std::abs(peak) > 0 ? std::conj(peak) / std::abs(peak) : cd(1);
        for (auto& c : m.cells)
            for (int j = 0; j < 6; ++j) c[j] = (c[j] * ph).real();
    };
    const int a_first = 3 * anti.block;  // x sits on the first site of the block
    const int b_first = 3 * sym.block;   // y likewise
    realify(a, a_first);
    realify(b, b_first);
    // x > 0, y < 0 (the realify step made the peak of x positive already)
    double ypeak = 0;
    for (const auto& c : b.cells)
        if (std::abs(c[b_first].real()) > std::abs(ypeak)) ypeak = c[b_first].real();
    if (ypeak > 0)
        for (auto& c : b.cells) c = -c;
    finish_mode(a, p);
    finish_mode(b, p);
    return {a, b};
}

std::pair<ZeroMode, ZeroMode> build_zero_modes(InterfaceKind kind, const HoppingProfile& prof) {
    return kind == InterfaceKind::TypeI ? build_type1_zero_modes(prof) : build_type2_zero_modes(prof);
}

}
