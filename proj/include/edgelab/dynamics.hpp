#pragma once
#include <array>
#include <optional>
#include <string>
#include <vector>
#include <Eigen/Dense>

#include "edgelab/hamiltonian.hpp"
#include "edgelab/lattice.hpp"

namespace edgelab {

struct Bend {
    int vertex_m = 20;
    int turn = 1;  // +1 turns toward the + material, -1 away from it
};

struct DomainSpec {
    InterfaceKind kind = InterfaceKind::TypeII;
    HoppingProfile profile;
    int extent_a = 40;  // cells m in [0, extent_a)
    int extent_b = 40;  // rows n in [-extent_b/2, extent_b - extent_b/2)
    std::optional<Bend> bend;
    // if set, only cells within this many rows of the interface path are kept
    std::optional<double> ribbon_rows;
};

// real symmetric operator in compressed rows
struct SparseOperator {
    int dim = 0;
    std::vector<int> row_start;
    std::vector<int> col;
    std::vector<double> val;

    static SparseOperator diagonal(const std::vector<double>& d);
    void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
    double row_sum_bound() const;
};

struct DomainCell {
    int m, n;
    Cell cell;
    int side;  // +1 or -1
    Eigen::Vector2d center;
};

struct InterfacePath {
    Eigen::Vector2d corner;  // vertex point of the polyline (any point on the line if straight)
    Eigen::Vector2d heading_in;
    Eigen::Vector2d heading_out;
    bool bent = false;
    double row_spacing = 1;

    double distance(const Eigen::Vector2d& x) const;
    // true when the nearest path point lies on the outgoing leg
    bool on_outgoing(const Eigen::Vector2d& x) const;
};

struct Domain {
    DomainSpec spec;
    std::vector<DomainCell> cells;
    std::vector<int> site_j;     // per site
    std::vector<int> site_cell;  // per site, index into cells
    SparseOperator h;
    InterfacePath path;

    int sites() const { return static_cast<int>(site_j.size()); }
    // -1 when (j, m, n) is not in the domain
    int index(int j, int m, int n) const;
    Eigen::Vector2d site_pos(int s) const;
    int material(int m, int n) const;

    std::vector<int> lookup;  // dense (m, n, j) -> site
    int n_lo = 0;
};

// side of cell (m, n) for the spec's interface, with the bend applied
int material_map(const DomainSpec& spec, int m, int n);
InterfacePath interface_path(const DomainSpec& spec);

Domain build_domain(const DomainSpec& spec);

struct WavepacketState {
    Eigen::VectorXcd amplitudes;
    double time = 0;
    double initial_norm = 1;
};

Eigen::Vector2cd mode_combination(const Eigen::Matrix2cd& m0, int direction);

WavepacketState initial_wavepacket(const Domain& domain, double center_m, double width, int direction);

double default_dt(const SparseOperator& h);
WavepacketState evolve(const WavepacketState& state, const SparseOperator& h, double dt, int steps);

double norm_of(const WavepacketState& s);
double energy_of(const WavepacketState& s, const SparseOperator& h);
double center_m(const WavepacketState& s, const Domain& d);

double interface_mass(const WavepacketState& s, const Domain& d, double tube_radius);

struct Transmission {
    double transmitted, reflected, residual;
};
Transmission transmission(const WavepacketState& s, const Domain& d, double tube_radius);

struct RunOptions {
    double center_m = 10;
    double width = 8;
    int direction = 1;
    double t_end = 1;
    std::optional<double> dt;
    int stride = 100;          // steps between diagnostics
    int snapshot_every = 0;    // in diagnostics records; 0 = none
    double tube_radius = 5;
};

struct RunRecord {
    double dt;
    int steps;
    double energy_scale;  // RMS energy of the initial state
    std::vector<double> time, norm, energy, mass, transmitted, reflected, residual, center;
    std::vector<std::pair<double, Eigen::VectorXd>> snapshots;  // time, density per site
    WavepacketState final_state;
};

RunRecord run_dynamics(const Domain& d, const RunOptions& opt);

}
