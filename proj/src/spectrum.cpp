#include "edgelab/spectrum.hpp"
#include "edgelab/errors.hpp"
#include "edgelab/io.hpp"
#include "edgelab/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

namespace edgelab {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

Eigenpairs chiral_eigensolve(const Eigen::MatrixXcd& h) {
    const int dim = static_cast<int>(h.rows());
    std::vector<int> ia, ib;
    for (int i = 0; i < dim; ++i) (i % 6 < 3 ? ia : ib).push_back(i);
    const double scale = h.cwiseAbs().maxCoeff();
    const bool chiral = dim % 6 == 0 && ia.size() == ib.size() &&
                        h(ia, ia).cwiseAbs().maxCoeff() <= 1e-14 * scale &&
                        h(ib, ib).cwiseAbs().maxCoeff() <= 1e-14 * scale;
    Eigenpairs out;
    if (!chiral) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
        out.values = es.eigenvalues();
        out.vectors = es.eigenvectors();
        return out;
    }
    const int m = static_cast<int>(ia.size());
    const Eigen::MatrixXcd blk = h(ia, ib);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(blk, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    const Eigen::MatrixXcd& U = svd.matrixU();
    const Eigen::MatrixXcd& V = svd.matrixV();
    out.values.resize(dim);
    out.vectors = Eigen::MatrixXcd::Zero(dim, dim);
    const double r = 1.0 / std::sqrt(2.0);
    for (int p = 0; p < dim; ++p) {
        const bool neg = p < m;
        const int i = neg ? p : dim - 1 - p;
        out.values[p] = neg ? -s[i] : s[i];
        for (int a = 0; a < m; ++a) {
            out.vectors(ia[a], p) = r * U(a, i);
            out.vectors(ib[a], p) = (neg ? -r : r) * V(a, i);
        }
    }
    return out;
}

Eigen::VectorXd boundary_localization(Eigenpairs& pairs, int N, int margin) {
    const int dim = static_cast<int>(pairs.values.size());
    Eigen::VectorXd mask = Eigen::VectorXd::Zero(dim);
    for (int n = -N; n <= N; ++n)
        if (n < -N + margin || n > N - margin) mask.segment<6>(chain_index(1, n, N)).setOnes();
    const double tol = 1e-12 * std::max(1.0, pairs.values.cwiseAbs().maxCoeff());
    for (int i = 0; i < dim;) {
        int j = i + 1;
        while (j < dim && pairs.values[j] - pairs.values[j - 1] <= tol) ++j;
        if (j - i > 1) {
            const int w = j - i;
            Eigen::MatrixXcd S = pairs.vectors.middleCols(i, w);
            Eigen::MatrixXcd proj = S.adjoint() * mask.asDiagonal() * S;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(proj);
            const Eigen::MatrixXcd& W = es.eigenvectors();
            Eigen::MatrixXcd rotated = S * W;
            Eigen::VectorXd rq = W.cwiseAbs2().transpose() * pairs.values.segment(i, w);
            std::vector<int> order(w);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return rq[x] < rq[y]; });
            for (int t = 0; t < w; ++t) {
                pairs.vectors.col(i + t) = rotated.col(order[t]);
                pairs.values[i + t] = rq[order[t]];
            }
        }
        i = j;
    }
    Eigen::VectorXd loc(dim);
    for (int p = 0; p < dim; ++p)
        loc[p] = std::clamp((mask.array() * pairs.vectors.col(p).cwiseAbs2().array()).sum() /
                                pairs.vectors.col(p).squaredNorm(),
                            0.0, 1.0);
    return loc;
}

std::vector<double> default_k_grid(int points) {
    if (points < 1) throw ConfigError("k grid needs at least one point");
    std::vector<double> k(points);
    // symmetric about 0, contains 0, inside [-pi, pi)
    const int lo = points % 2 ? -(points - 1) / 2 : -points / 2;
    for (int i = 0; i < points; ++i) k[i] = 2 * M_PI * (lo + i) / points;
    return k;
}

namespace {

void check_options(const SupercellOptions& o) {
    if (o.half_width < 20) throw ConfigError("supercell half width must be >= 20");
    if (o.margin < 1 || 4 * o.margin >= o.half_width) throw ConfigError("margin must satisfy 1 <= margin < N/4");
    if (!(o.threshold > 0 && o.threshold < 1)) throw ConfigError("threshold must be in (0, 1)");
}

struct KSolve {
    Eigen::VectorXd values, loc;
    std::vector<char> kept;
};

KSolve solve_at(InterfaceKind kind, const HoppingProfile& prof, double k, const SupercellOptions& opt) {
    auto op = bloch_operator(kind, prof, k, opt.half_width);
    Eigenpairs ep = chiral_eigensolve(op.matrix);
    KSolve r;
    r.loc = boundary_localization(ep, opt.half_width, opt.margin);
    r.values = ep.values;
    r.kept.resize(r.values.size());
    for (int i = 0; i < r.values.size(); ++i) r.kept[i] = r.loc[i] < opt.threshold;
    return r;
}

}

SpectrumTable supercell_spectrum(InterfaceKind kind, const HoppingProfile& prof, double c,
                                 const std::vector<double>& k_grid, const SupercellOptions& opt) {
    check_options(opt);
    const HoppingProfile p = prof.with_c(c);
    p.validate();
    SpectrumTable t{kind, p, c, opt, k_grid, {}, {}, {}};
    const int nk = static_cast<int>(k_grid.size());
    t.eigenvalues.resize(nk);
    t.localization.resize(nk);
    t.kept.resize(nk);
    parallel_for(nk, [&](int i) {
        KSolve s = solve_at(kind, p, k_grid[i], opt);
        t.eigenvalues[i] = std::move(s.values);
        t.localization[i] = std::move(s.loc);
        t.kept[i] = std::move(s.kept);
    });
    return t;
}

void write_spectrum_csv(const SpectrumTable& t, std::ostream& out) {
    out << "k,eig_index,energy,localization,kept\n";
    for (size_t i = 0; i < t.k_grid.size(); ++i)
        for (int e = 0; e < t.eigenvalues[i].size(); ++e)
            out << format_double(t.k_grid[i]) << ',' << e << ',' << format_double(t.eigenvalues[i][e]) << ','
                << format_double(t.localization[i][e]) << ',' << (t.kept[i][e] ? 1 : 0) << '\n';
}

double min_kept_abs(const SpectrumTable& t) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < t.k_grid.size(); ++i)
        for (int e = 0; e < t.eigenvalues[i].size(); ++e)
            if (t.kept[i][e]) best = std::min(best, std::abs(t.eigenvalues[i][e]));
    return best;
}

EdgeCurves edge_curves(const SpectrumTable& t) {
    const int nk = static_cast<int>(t.k_grid.size());
    int zero = -1;
    for (int i = 0; i < nk; ++i)
        if (std::abs(t.k_grid[i]) < 1e-14) zero = i;
    if (zero < 0) throw ConfigError("edge curves need a k grid containing 0");
    EdgeCurves c;
    c.k = t.k_grid;
    c.gap_edge = std::min(std::abs(t.profile.delta_plus), std::abs(t.profile.delta_minus));
    const double inf = std::numeric_limits<double>::infinity();
    c.min_abs_overall = inf;
    bool midgap = false;
    for (int i = 0; i < nk; ++i) {
        double up = inf, lo = -inf, mabs = inf;
        for (int e = 0; e < t.eigenvalues[i].size(); ++e) {
            if (!t.kept[i][e]) continue;
            const double E = t.eigenvalues[i][e];
            if (E >= 0) up = std::min(up, E);
            if (E <= 0) lo = std::max(lo, E);
            mabs = std::min(mabs, std::abs(E));
        }
        if (i == zero) up = mabs, lo = -mabs, c.min_abs_at_zero = mabs;
        if (mabs < c.gap_edge) midgap = true;
        c.min_abs_overall = std::min(c.min_abs_overall, mabs);
        c.upper.push_back(up);
        c.lower.push_back(lo);
    }
    if (!midgap) throw NoMidGapState("no kept eigenvalue inside the bulk gap");
    return c;
}

Eigen::Matrix2cd perturbation_m0(const ZeroMode& a, const ZeroMode& b, const HoppingProfile& prof) {
    const int N = std::max(a.support_half_width(), b.support_half_width()) + 3;
    const Eigen::VectorXcd xa = a.on_chain(N), xb = b.on_chain(N);
    auto apply = [&](const Eigen::VectorXcd& x) {
        Eigen::VectorXcd y = Eigen::VectorXcd::Zero(x.size());
        for (const auto& t : chain_terms(a.kind, prof, N))
            if (t.phase != 0)
                y[chain_index(t.row_j, t.row_n, N)] += cd(0, -t.weight * t.phase) * x[chain_index(t.col_j, t.col_n, N)];
        return y;
    };
    const Eigen::VectorXcd ya = apply(xa), yb = apply(xb);
    Eigen::Matrix2cd m;
    m << xa.dot(ya), xa.dot(yb), xb.dot(ya), xb.dot(yb);
    return m;
}

double kept_upper_branch(InterfaceKind kind, const HoppingProfile& prof, double k, const SupercellOptions& opt) {
    check_options(opt);
    KSolve s = solve_at(kind, prof, k, opt);
    double best = std::numeric_limits<double>::infinity();
    for (int e = 0; e < s.values.size(); ++e) {
        if (!s.kept[e]) continue;
        const double E = s.values[e];
        if (k == 0)
            best = std::min(best, std::abs(E));
        else if (E >= 0)
            best = std::min(best, E);
    }
    return best;
}

Eigen::Vector2cd SlopeReport::combination(int direction) const {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m0);
    const int col = direction > 0 ? 1 : 0;
    Eigen::Vector2cd v = es.eigenvectors().col(col);
    const cd ph = std::abs(v[0]) > 0 ? std::conj(v[0]) / std::abs(v[0]) : cd(1);
    return v * ph;
}

SlopeReport perturbation_matrix(InterfaceKind kind, const HoppingProfile& prof, const SupercellOptions& opt,
                                double h) {
    check_options(opt);
    const auto [a, b] = build_zero_modes(kind, prof);
    SlopeReport r;
    r.m0 = perturbation_m0(a, b, prof);
    r.slope = std::abs(r.m0(0, 1).imag());
    r.h = h;
    r.half_width = opt.half_width;
    const double e0 = kept_upper_branch(kind, prof, 0, opt);
    r.fd_slope = (kept_upper_branch(kind, prof, h, opt) - e0) / h;
    r.fd_slope_half = (kept_upper_branch(kind, prof, h / 2, opt) - e0) / (h / 2);
    r.richardson = 2 * r.fd_slope_half - r.fd_slope;
    r.rel_gap = std::abs(r.slope - r.fd_slope) / r.slope;
    return r;
}

}
