#pragma once
#include <iosfwd>
#include <vector>
#include <Eigen/Dense>

#include "edgelab/hamiltonian.hpp"
#include "edgelab/transfer.hpp"

namespace edgelab {

struct SupercellOptions {
    int half_width = 80;
    int margin = 5;
    double threshold = 0.01;
};

// Eigenpairs of a Hermitian matrix whose only nonzero block couples sites 1-3 to sites 4-6.
// Values ascending; built from the SVD of that block.
struct Eigenpairs {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
};
Eigenpairs chiral_eigensolve(const Eigen::MatrixXcd& h);

// Boundary-mass fraction of each eigenvector. Inside clusters of numerically equal
// eigenvalues the basis is first rotated to diagonalize the boundary projector;
// the rotated vectors replace the originals and carry their Rayleigh quotients as values.
Eigen::VectorXd boundary_localization(Eigenpairs& pairs, int half_width, int margin);

std::vector<double> default_k_grid(int points = 201);

struct SpectrumTable {
    InterfaceKind kind;
    HoppingProfile profile;
    double c_used;
    SupercellOptions options;
    std::vector<double> k_grid;
    std::vector<Eigen::VectorXd> eigenvalues;
    std::vector<Eigen::VectorXd> localization;
    std::vector<std::vector<char>> kept;
};

SpectrumTable supercell_spectrum(InterfaceKind kind, const HoppingProfile& prof, double c,
                                 const std::vector<double>& k_grid, const SupercellOptions& opt = {});

void write_spectrum_csv(const SpectrumTable& table, std::ostream& out);

struct EdgeCurves {
    std::vector<double> k;
    std::vector<double> lower;  // <= 0
    std::vector<double> upper;  // >= 0
    double min_abs_at_zero;
    double min_abs_overall;
    double gap_edge;  // min(|delta+|, |delta-|)
};

// kept eigenvalues of smallest magnitude per k
EdgeCurves edge_curves(const SpectrumTable& table);

// smallest kept |E| over all k (no mid-gap requirement)
double min_kept_abs(const SpectrumTable& table);

struct SlopeReport {
    Eigen::Matrix2cd m0;
    double slope;
    double fd_slope;       // one-sided difference at h
    double fd_slope_half;  // same at h/2
    double richardson;     // 2*fd(h/2) - fd(h)
    double rel_gap;
    double h;
    int half_width;

    // coefficients on (mode A, mode B) of the m0 eigenvector whose eigenvalue has sign `direction`
    Eigen::Vector2cd combination(int direction) const;
};

Eigen::Matrix2cd perturbation_m0(const ZeroMode& a, const ZeroMode& b, const HoppingProfile& prof);
SlopeReport perturbation_matrix(InterfaceKind kind, const HoppingProfile& prof, const SupercellOptions& opt = {},
                                double h = 1e-3);

// smallest positive kept eigenvalue of the supercell at one k
double kept_upper_branch(InterfaceKind kind, const HoppingProfile& prof, double k, const SupercellOptions& opt);

}
