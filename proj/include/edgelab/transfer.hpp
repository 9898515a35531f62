#pragma once
#include <array>
#include <complex>
#include <optional>
#include <utility>
#include <vector>
#include <Eigen/Dense>

#include "edgelab/hamiltonian.hpp"

namespace edgelab {

using Mat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3cd;
using Vec2 = Eigen::Vector2cd;
using Vec3 = Eigen::Vector3cd;
using Cell6 = Eigen::Matrix<cd, 6, 1>;

// a[0] .. a[5] hold A1 .. A6 for a homogeneous material (b, b + eps)
struct AMatrices {
    std::array<Mat2, 6> a;
};
AMatrices a_matrices(double b, double eps, double k);

// interface replacements of A1 (+ side, uses b+ and c) and A6 (- side, uses b- and c)
struct InterfaceAMatrices {
    Mat2 a1_tilde;
    Mat2 a6_tilde;
};
InterfaceAMatrices interface_a_matrices(const HoppingProfile& prof, double k);

// -A6^-1 A5 A4^-1 A3 A2^-1 A1: maps (u4_n, u6_{n-1}) to (u4_{n+2}, u6_{n+1})
Mat2 propagation_matrix(double b, double eps, double k);

struct PElements {
    cd alpha, beta, gamma;
};
PElements p_elements(double b, double eps, double k);
Mat2 assemble_p(const PElements& e, double k);

struct PMatrixReport {
    cd alpha, beta, gamma;
    cd lambda1, lambda2;    // |lambda1| < |lambda2|
    std::optional<double> f1;  // only at k = 0
    Vec2 v1, v2;            // first component 1
};
PMatrixReport p_eigen(double b, double eps, double k);

double matching_c_star(const HoppingProfile& prof);

// normalized cross product of diag(1, (b+ + d+)(b- + d-)/c^2) v1(+) with v2(-)
double type1_alignment(const HoppingProfile& prof, double c_test, double k);
bool type1_zero_exists(const HoppingProfile& prof, double c_test, double k);

struct ZeroMode {
    InterfaceKind kind = InterfaceKind::TypeI;
    char label = 'A';
    int n_min = 0;
    std::vector<Cell6> cells;  // cells[i] is the amplitude of chain cell n_min + i
    double decay_rate = 0;     // amplitude factor per two cells
    double residual = 0;

    int n_max() const { return n_min + static_cast<int>(cells.size()) - 1; }
    Cell6 amplitude(int n) const;
    double norm() const;
    // restricted to the chain [-N, N]
    Eigen::VectorXcd on_chain(int N) const;
    int support_half_width() const;
};

// ||H(0) mode|| / ||mode||, evaluated on a chain wide enough to hold the support
double mode_residual(const ZeroMode& mode, const HoppingProfile& prof);

std::pair<ZeroMode, ZeroMode> build_type1_zero_modes(const HoppingProfile& prof);

Mat3 q_matrix(double b, double eps, double k);
// chain matrices relating consecutive reduced vectors at cell n (any n)
Mat3 q_chain_a(const HoppingProfile& prof, int n, double k);
Mat3 q_chain_b(const HoppingProfile& prof, int n, double k);

struct QBoundary {
    Mat3 a_m1, a_m2, b_0, b_m1;
};
QBoundary q_boundary_matrices(const HoppingProfile& prof, double k);

struct QMatrixReport {
    double mu1, mu2, mu3;
    double t1, t2;
    Vec3 v1, v2, v3;
};
QMatrixReport q_eigen(double b, double eps);

bool type2_zero_exists(const HoppingProfile& prof);
std::pair<ZeroMode, ZeroMode> build_type2_zero_modes(const HoppingProfile& prof);

std::pair<ZeroMode, ZeroMode> build_zero_modes(InterfaceKind kind, const HoppingProfile& prof);

}
