#pragma once
#include <complex>
#include <vector>
#include <Eigen/Dense>

#include "edgelab/lattice.hpp"

namespace edgelab {

using cd = std::complex<double>;

struct HoppingProfile {
    double b_plus = 60;
    double b_minus = 60;
    double delta_plus = 30;
    double delta_minus = 30;
    double c = 50;

    // throws ConfigError when a hopping is not strictly positive
    void validate() const;
    // same materials, different interface coupling
    HoppingProfile with_c(double c_new) const;
};

struct CoefficientRow {
    double a, b, c, d;
};

CoefficientRow coeffs_type1(const HoppingProfile& prof, int n);
CoefficientRow coeffs_type2(const HoppingProfile& prof, int n);
CoefficientRow coefficients(InterfaceKind kind, const HoppingProfile& prof, int n);

// one coupling of the chain: entry (row site, col site) = -weight * exp(i*phase*k)
struct ChainTerm {
    int row_j, row_n;
    int col_j, col_n;
    double weight;
    int phase;
};

// all couplings whose row cell lies in [-N, N], in the row order of the component equations
std::vector<ChainTerm> chain_terms(InterfaceKind kind, const HoppingProfile& prof, int N);

inline int chain_index(int j, int n, int N) { return 6 * (n + N) + (j - 1); }
inline int chain_dim(int N) { return 6 * (2 * N + 1); }

struct BlochOperator {
    InterfaceKind kind;
    HoppingProfile profile;
    double k;
    int half_width;
    Eigen::MatrixXcd matrix;
    int dim() const { return static_cast<int>(matrix.rows()); }
};

BlochOperator bloch_h1(const HoppingProfile& prof, double k, int N);
BlochOperator bloch_h2(const HoppingProfile& prof, double k, int N);
BlochOperator bloch_operator(InterfaceKind kind, const HoppingProfile& prof, double k, int N);

// d/dk of the Bloch operator at k = 0 (Hermitian)
Eigen::MatrixXcd h1_first_order(const HoppingProfile& prof, int N);
Eigen::MatrixXcd h2_first_order(const HoppingProfile& prof, int N);
Eigen::MatrixXcd first_order(InterfaceKind kind, const HoppingProfile& prof, int N);

// antiunitary symmetries act as U * conj(x); these return U
Eigen::MatrixXcd t_unitary(double k, int N);
Eigen::MatrixXcd r_unitary(double k, int N);
Eigen::MatrixXcd v_matrix(int N);

Eigen::VectorXcd apply_T(double k, int N, const Eigen::VectorXcd& x);
Eigen::VectorXcd apply_V(int N, const Eigen::VectorXcd& x);
Eigen::VectorXcd apply_R(double k, int N, const Eigen::VectorXcd& x);

}
