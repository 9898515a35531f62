#pragma once
#include <array>
#include <complex>
#include <iosfwd>
#include <utility>
#include <vector>
#include <Eigen/Dense>

namespace edgelab {

using Mat6 = Eigen::Matrix<std::complex<double>, 6, 6>;
using Basis6x2 = Eigen::Matrix<std::complex<double>, 6, 2>;

struct BulkParams {
    double b = 5;
    double eps = 0;
    Eigen::Vector2d k = Eigen::Vector2d::Zero();
    void validate() const;
};

Mat6 bulk_h(const BulkParams& p);

// reciprocal vectors with ka.va = kb.vb = 2 pi, ka.vb = kb.va = 0
std::pair<Eigen::Vector2d, Eigen::Vector2d> dual_basis();

std::array<double, 6> gamma_eigs(double b, double eps);
// -(3b+eps), -|eps|, -|eps|, |eps|, |eps|, 3b+eps in ascending order
std::array<double, 6> gamma_eigs_closed_form(double b, double eps);

struct BandSample {
    double s;  // cumulative path length
    Eigen::Vector2d k;
    std::array<double, 6> energy;
};
struct BandPath {
    std::vector<BandSample> samples;
    bool gap_law_holds;
};

// Gamma, M, K, Gamma of the hexagonal zone
std::vector<Eigen::Vector2d> default_band_path();
BandPath bulk_bands(double b, double eps, const std::vector<Eigen::Vector2d>& corners, int points_per_leg = 60);
void write_band_csv(const BandPath& path, std::ostream& out);

// max over the grid of (|eps| - |lambda|), i.e. the worst violation of the gap law
double gap_law_violation(double b, double eps, int grid = 50);

struct DiracFit {
    double slope;
    double spread;              // (max - min) / mean of the raw ratios
    std::vector<double> ratios;  // lambda4 / |k| per (direction, radius)
};
DiracFit dirac_fit(double b);
// throws NotConical if the spread reaches 1%
double dirac_slope(double b);

struct BandInversion {
    Basis6x2 lower;  // eigenvectors at -|eps|
    Basis6x2 upper;  // eigenvectors at +|eps|
};
BandInversion band_inversion(double b, double eps);

// the four vectors listed for the eps < 0 case: first pair below the gap, second above
std::pair<Basis6x2, Basis6x2> listed_inversion_spans(double eps);

// sine of the largest principal angle between two column spans
double subspace_distance(const Basis6x2& a, const Basis6x2& b);

// site map j -> 7 - j (point inversion of the hexagon)
Mat6 inversion_matrix();

}
