#include "edgelab/bulk.hpp"
#include "edgelab/errors.hpp"
#include "edgelab/io.hpp"
#include "edgelab/lattice.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <ostream>

namespace edgelab {

using cd = std::complex<double>;

void BulkParams::validate() const {
    if (!(b > 0) || !(b + eps > 0) || !std::isfinite(eps)) throw ConfigError("bulk needs b > 0 and b + eps > 0");
}

Mat6 bulk_h(const BulkParams& p) {
    p.validate();
    const Eigen::Vector2d va = basis_alpha(), vb = basis_beta();
    auto ph = [&](const Eigen::Vector2d& v) { return std::polar(1.0, p.k.dot(v)); };
    const double b = p.b, B = p.b + p.eps;
    Mat6 h = Mat6::Zero();
    h(0, 3) = -b, h(0, 4) = -b, h(0, 5) = -B * std::conj(ph(va));
    h(1, 3) = -b, h(1, 4) = -B * ph(va - vb), h(1, 5) = -b;
    h(2, 3) = -B * ph(vb), h(2, 4) = -b, h(2, 5) = -b;
    h(3, 0) = -b, h(3, 1) = -b, h(3, 2) = -B * std::conj(ph(vb));
    h(4, 0) = -b, h(4, 1) = -B * std::conj(ph(va - vb)), h(4, 2) = -b;
    h(5, 0) = -B * ph(va), h(5, 1) = -b, h(5, 2) = -b;
    return h;
}

std::pair<Eigen::Vector2d, Eigen::Vector2d> dual_basis() {
    Eigen::Matrix2d v;
    v.row(0) = basis_alpha().transpose();
    v.row(1) = basis_beta().transpose();
    // rows of v times columns of K = 2 pi I
    const Eigen::Matrix2d K = 2 * M_PI * v.inverse();
    return {K.col(0), K.col(1)};
}

namespace {

std::array<double, 6> eigs(const Mat6& h) {
    Eigen::SelfAdjointEigenSolver<Mat6> es(h, Eigen::EigenvaluesOnly);
    std::array<double, 6> out;
    for (int i = 0; i < 6; ++i) out[i] = es.eigenvalues()[i];
    return out;
}

}

std::array<double, 6> gamma_eigs(double b, double eps) { return eigs(bulk_h({b, eps, Eigen::Vector2d::Zero()})); }

std::array<double, 6> gamma_eigs_closed_form(double b, double eps) {
    BulkParams{b, eps, Eigen::Vector2d::Zero()}.validate();
    const double e = std::abs(eps), outer = 3 * b + eps;
    std::array<double, 6> v = {-outer, 0.0 - e, 0.0 - e, e, e, outer};
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<Eigen::Vector2d> default_band_path() {
    const auto [ka, kb] = dual_basis();
    const Eigen::Vector2d gamma = Eigen::Vector2d::Zero();
    return {gamma, ka / 2, (2 * ka + kb) / 3, gamma};
}

BandPath bulk_bands(double b, double eps, const std::vector<Eigen::Vector2d>& corners, int per_leg) {
    if (corners.size() < 2 || per_leg < 1) throw ConfigError("band path needs two corners and one point per leg");
    BandPath path;
    path.gap_law_holds = true;
    double s = 0;
    const double gap = std::abs(eps);
    for (size_t leg = 0; leg + 1 < corners.size(); ++leg) {
        const Eigen::Vector2d a = corners[leg], d = corners[leg + 1] - corners[leg];
        const int first = leg == 0 ? 0 : 1;
        for (int i = first; i <= per_leg; ++i) {
            const double t = static_cast<double>(i) / per_leg;
            BandSample smp;
            smp.k = a + t * d;
            smp.s = s + t * d.norm();
            smp.energy = eigs(bulk_h({b, eps, smp.k}));
            for (int j = 0; j < 6; ++j)
                if (std::abs(smp.energy[j]) < gap - 1e-9) path.gap_law_holds = false;
            path.samples.push_back(smp);
        }
        s += d.norm();
    }
    return path;
}

void write_band_csv(const BandPath& path, std::ostream& out) {
    out << "path_parameter,band_index,energy\n";
    for (const auto& smp : path.samples)
        for (int j = 0; j < 6; ++j) out << format_double(smp.s) << ',' << j + 1 << ',' << format_double(smp.energy[j]) << '\n';
}

double gap_law_violation(double b, double eps, int grid) {
    const auto [ka, kb] = dual_basis();
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const Eigen::Vector2d k = (double(i) / grid) * ka + (double(j) / grid) * kb;
            for (double e : eigs(bulk_h({b, eps, k}))) worst = std::max(worst, std::abs(eps) - std::abs(e));
        }
    return worst;
}

DiracFit dirac_fit(double b) {
    DiracFit fit;
    const double radii[3] = {1e-3, 5e-4, 2.5e-4};
    const double angles[3] = {0.0, M_PI / 5, 2 * M_PI / 5};
    std::vector<double> extrapolated;
    for (double th : angles) {
        const Eigen::Vector2d dir(std::cos(th), std::sin(th));
        double prev = 0;
        for (int r = 0; r < 3; ++r) {
            const double ratio = eigs(bulk_h({b, 0.0, radii[r] * dir}))[3] / radii[r];
            fit.ratios.push_back(ratio);
            if (r > 0) extrapolated.push_back(2 * ratio - prev);
            prev = ratio;
        }
    }
    double sum = 0;
    for (double x : extrapolated) sum += x;
    fit.slope = sum / extrapolated.size();
    const auto [lo, hi] = std::minmax_element(fit.ratios.begin(), fit.ratios.end());
    double mean = 0;
    for (double x : fit.ratios) mean += x;
    mean /= fit.ratios.size();
    fit.spread = (*hi - *lo) / mean;
    return fit;
}

double dirac_slope(double b) {
    const DiracFit f = dirac_fit(b);
    if (!(f.spread < 0.01)) throw NotConical("lambda4/|k| varies by more than 1%");
    return f.slope;
}

BandInversion band_inversion(double b, double eps) {
    if (eps == 0) throw ConfigError("band inversion needs eps != 0");
    Eigen::SelfAdjointEigenSolver<Mat6> es(bulk_h({b, eps, Eigen::Vector2d::Zero()}));
    BandInversion out;
    out.lower = es.eigenvectors().middleCols<2>(1);
    out.upper = es.eigenvectors().middleCols<2>(3);
    return out;
}

std::pair<Basis6x2, Basis6x2> listed_inversion_spans(double eps) {
    Basis6x2 first, second;
    first.col(0) << 1, 1, 0, -1, -1, 0;
    first.col(1) << 1, 2, 1, -1, -2, -1;
    second.col(0) << 1, -1, 0, 1, -1, 0;
    second.col(1) << 1, -2, 1, 1, -2, 1;
    if (eps < 0) return {first, second};
    return {second, first};
}

double subspace_distance(const Basis6x2& a, const Basis6x2& b) {
    const Eigen::Matrix<cd, 6, 2> qa = Eigen::HouseholderQR<Basis6x2>(a).householderQ() * Eigen::Matrix<cd, 6, 2>::Identity();
    const Eigen::Matrix<cd, 6, 2> qb = Eigen::HouseholderQR<Basis6x2>(b).householderQ() * Eigen::Matrix<cd, 6, 2>::Identity();
    const Eigen::Matrix<cd, 6, 2> resid = qb - qa * (qa.adjoint() * qb);
    Eigen::JacobiSVD<Eigen::Matrix<cd, 6, 2>> svd(resid);
    return svd.singularValues()[0];
}

Mat6 inversion_matrix() {
    Mat6 p = Mat6::Zero();
    for (int j = 0; j < 6; ++j) p(j, 5 - j) = 1;
    return p;
}

}
