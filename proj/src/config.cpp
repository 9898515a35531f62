#include "edgelab/config.hpp"
#include "edgelab/errors.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <type_traits>

namespace edgelab {

using nlohmann::json;

void RunConfig::validate() const {
    profile.validate();
    auto need = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(what);
    };
    need(n_cells >= 20, "n_cells must be >= 20");
    need(margin >= 1 && 4 * margin < n_cells, "margin must satisfy 1 <= margin < n_cells / 4");
    need(threshold > 0 && threshold < 1, "threshold must lie in (0, 1)");
    need(k_points >= 3 && k_points % 2 == 1, "k_points must be odd and >= 3");
    need(fd_step > 0 && fd_step < 0.1, "fd_step must lie in (0, 0.1)");
    need(bulk_b > 0 && bulk_b + bulk_eps > 0, "bulk needs b > 0 and b + eps > 0");
    need(band_points >= 2, "band_points must be >= 2");
    need(extent_a >= 20 && extent_b >= 20, "extents must be at least 20 x 20 cells");
    need(!bend || (bend_vertex_m > 0 && bend_vertex_m < extent_a - 1), "bend_vertex_m must lie inside the domain");
    need(bend_turn == 1 || bend_turn == -1, "bend_turn must be +1 or -1");
    need(ribbon_rows >= 0, "ribbon_rows must be >= 0");
    need(width > 0, "width must be > 0");
    need(direction == 1 || direction == -1, "direction must be +1 or -1");
    need(t_end >= 0 && std::isfinite(t_end), "t_end must be >= 0");
    need(dt >= 0 && std::isfinite(dt), "dt must be >= 0");
    need(stride >= 1, "stride must be >= 1");
    need(snapshot_every >= 0, "snapshot_every must be >= 0");
    need(tube_radius >= 0, "tube_radius must be >= 0");
    need(!out.empty(), "out must not be empty");
    need(!tune_c || kind == InterfaceKind::TypeI, "tune_c applies to type I only");
}

namespace {

template <class T>
void read(const json& j, const char* key, T& v) {
    if (!j.contains(key)) return;
    if constexpr (std::is_same_v<T, int>)
        if (!j.at(key).is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
    try {
        v = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

}

RunConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known = {
        "kind", "b_plus", "b_minus", "delta_plus", "delta_minus", "c", "tune_c", "n_cells", "margin",
        "threshold", "k_points", "fd_step", "slope", "bulk_b", "bulk_eps", "band_points", "extent_a",
        "extent_b", "bend", "bend_vertex_m", "bend_turn", "ribbon_rows", "center_m", "width", "direction",
        "t_end", "dt", "stride", "snapshot_every", "tube_radius", "out", "seed"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
    RunConfig c;
    std::string kind = kind_name(c.kind);
    read(j, "kind", kind);
    c.kind = parse_kind(kind);
    read(j, "b_plus", c.profile.b_plus);
    read(j, "b_minus", c.profile.b_minus);
    read(j, "delta_plus", c.profile.delta_plus);
    read(j, "delta_minus", c.profile.delta_minus);
    read(j, "c", c.profile.c);
    read(j, "tune_c", c.tune_c);
    read(j, "n_cells", c.n_cells);
    read(j, "margin", c.margin);
    read(j, "threshold", c.threshold);
    read(j, "k_points", c.k_points);
    read(j, "fd_step", c.fd_step);
    read(j, "slope", c.slope);
    read(j, "bulk_b", c.bulk_b);
    read(j, "bulk_eps", c.bulk_eps);
    read(j, "band_points", c.band_points);
    read(j, "extent_a", c.extent_a);
    read(j, "extent_b", c.extent_b);
    read(j, "bend", c.bend);
    read(j, "bend_vertex_m", c.bend_vertex_m);
    read(j, "bend_turn", c.bend_turn);
    read(j, "ribbon_rows", c.ribbon_rows);
    read(j, "center_m", c.center_m);
    read(j, "width", c.width);
    read(j, "direction", c.direction);
    read(j, "t_end", c.t_end);
    read(j, "dt", c.dt);
    read(j, "stride", c.stride);
    read(j, "snapshot_every", c.snapshot_every);
    read(j, "tube_radius", c.tube_radius);
    read(j, "out", c.out);
    read(j, "seed", c.seed);
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

json config_to_json(const RunConfig& c) {
    return json{{"kind", kind_name(c.kind)},
                {"b_plus", c.profile.b_plus},
                {"b_minus", c.profile.b_minus},
                {"delta_plus", c.profile.delta_plus},
                {"delta_minus", c.profile.delta_minus},
                {"c", c.profile.c},
                {"tune_c", c.tune_c},
                {"n_cells", c.n_cells},
                {"margin", c.margin},
                {"threshold", c.threshold},
                {"k_points", c.k_points},
                {"fd_step", c.fd_step},
                {"slope", c.slope},
                {"bulk_b", c.bulk_b},
                {"bulk_eps", c.bulk_eps},
                {"band_points", c.band_points},
                {"extent_a", c.extent_a},
                {"extent_b", c.extent_b},
                {"bend", c.bend},
                {"bend_vertex_m", c.bend_vertex_m},
                {"bend_turn", c.bend_turn},
                {"ribbon_rows", c.ribbon_rows},
                {"center_m", c.center_m},
                {"width", c.width},
                {"direction", c.direction},
                {"t_end", c.t_end},
                {"dt", c.dt},
                {"stride", c.stride},
                {"snapshot_every", c.snapshot_every},
                {"tube_radius", c.tube_radius},
                {"out", c.out},
                {"seed", c.seed}};
}

}
