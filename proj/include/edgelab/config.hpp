#pragma once
#include <optional>
#include <string>

#include <json.hpp>

#include "edgelab/hamiltonian.hpp"
#include "edgelab/lattice.hpp"

namespace edgelab {

// Flat run configuration shared by all subcommands. Keys mirror the field names.
struct RunConfig {
    InterfaceKind kind = InterfaceKind::TypeI;
    HoppingProfile profile;
    bool tune_c = false;  // replace c by the matching value (type I only)

    // supercell
    int n_cells = 80;
    int margin = 5;
    double threshold = 0.01;
    int k_points = 201;
    double fd_step = 1e-3;
    bool slope = true;

    // bulk
    double bulk_b = 5;
    double bulk_eps = 0;
    int band_points = 60;

    // dynamics
    int extent_a = 40;
    int extent_b = 40;
    bool bend = true;
    int bend_vertex_m = 20;
    int bend_turn = 1;
    int ribbon_rows = 0;  // 0 keeps the full rectangle
    double center_m = 10;
    double width = 8;
    int direction = 1;
    double t_end = 1;
    double dt = 0;  // 0 selects 0.1 / rho(H)
    int stride = 100;
    int snapshot_every = 10;
    double tube_radius = 5;

    std::string out = "out";
    int seed = 0;  // reserved

    // throws ConfigError
    void validate() const;
};

RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json config_to_json(const RunConfig& c);

}
