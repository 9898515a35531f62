#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "edgelab/commands.hpp"
#include "edgelab/config.hpp"
#include "edgelab/errors.hpp"

using namespace edgelab;

int main(int argc, char** argv) {
    CLI::App app{"edge-state analysis for generalized honeycomb interfaces"};
    std::string command;
    std::string config_path;
    std::optional<std::string> out;
    std::optional<int> n_cells, k_points, seed;
    CommandFlags flags;
    app.add_option("command", command, "spectrum | match-c | exist | evolve | bulk")
        ->required()
        ->check(CLI::IsMember({"spectrum", "match-c", "exist", "evolve", "bulk"}));
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", out, "output directory");
    app.add_flag("--require-crossing", flags.require_crossing, "fail with exit 3 unless the edge branches cross at k=0");
    app.add_option("--n-cells", n_cells, "supercell half width N");
    app.add_option("--k-points", k_points, "number of k samples");
    app.add_option("--seed", seed, "reserved; the dynamics is deterministic");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    RunConfig cfg;
    try {
        nlohmann::json j = nlohmann::json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot open config file " + config_path);
            try {
                j = nlohmann::json::parse(in);
            } catch (const nlohmann::json::parse_error& e) {
                throw ConfigError(std::string("config is not valid JSON: ") + e.what());
            }
            if (!j.is_object()) throw ConfigError("config must be a JSON object");
        }
        if (out) j["out"] = *out;
        if (n_cells) j["n_cells"] = *n_cells;
        if (k_points) j["k_points"] = *k_points;
        if (seed) j["seed"] = *seed;
        cfg = config_from_json(j);
    } catch (...) {
        return exit_code_for_current_exception(std::cerr);
    }
    return run_command(command, cfg, flags, std::cout, std::cerr);
}
