#include "edgelab/commands.hpp"
#include "edgelab/bulk.hpp"
#include "edgelab/dynamics.hpp"
#include "edgelab/errors.hpp"
#include "edgelab/io.hpp"
#include "edgelab/spectrum.hpp"
#include "edgelab/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace edgelab {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path out_file(const RunConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out);
    return fs::path(cfg.out) / name;
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
    const fs::path p = out_file(cfg, name);
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + p.string());
    return f;
}

void write_json(const RunConfig& cfg, const std::string& name, json doc) {
    doc["config"] = config_to_json(cfg);
    auto f = open_out(cfg, name);
    f << doc.dump(2) << '\n';
}

SupercellOptions supercell_options(const RunConfig& cfg) { return {cfg.n_cells, cfg.margin, cfg.threshold}; }

HoppingProfile effective_profile(const RunConfig& cfg) {
    if (!cfg.tune_c) return cfg.profile;
    return cfg.profile.with_c(matching_c_star(cfg.profile));
}

json complex_pair(cd z) { return json::array({z.real(), z.imag()}); }

json mode_summary(const ZeroMode& m) {
    return json{{"label", std::string(1, m.label)},
                {"n_min", m.n_min},
                {"n_max", m.n_max()},
                {"decay_rate", m.decay_rate},
                {"residual", m.residual}};
}

void write_modes_csv(const RunConfig& cfg, const ZeroMode& a, const ZeroMode& b) {
    auto f = open_out(cfg, "zero_modes.csv");
    f << "mode,n,j,re,im\n";
    for (const ZeroMode* m : {&a, &b})
        for (int n = m->n_min; n <= m->n_max(); ++n) {
            const Cell6 u = m->amplitude(n);
            for (int j = 0; j < 6; ++j)
                f << m->label << ',' << n << ',' << j + 1 << ',' << format_double(u[j].real()) << ','
                  << format_double(u[j].imag()) << '\n';
        }
}

}

void cmd_spectrum(const RunConfig& cfg, const CommandFlags& flags, std::ostream& log) {
    cfg.validate();
    const HoppingProfile prof = effective_profile(cfg);
    const SupercellOptions opt = supercell_options(cfg);
    const SpectrumTable table = supercell_spectrum(cfg.kind, prof, prof.c, default_k_grid(cfg.k_points), opt);
    {
        auto f = open_out(cfg, "spectrum.csv");
        write_spectrum_csv(table, f);
    }
    json summary;
    const double scale = std::max(prof.b_plus, prof.b_minus);
    const double gap_edge = std::min(std::abs(prof.delta_plus), std::abs(prof.delta_minus));
    summary["c_used"] = prof.c;
    summary["bulk_gap_width"] = 2 * gap_edge;
    summary["min_abs_overall"] = min_kept_abs(table);
    bool crossing = false;
    try {
        const EdgeCurves ec = edge_curves(table);
        crossing = ec.min_abs_at_zero < 1e-6 * scale;
        summary["midgap"] = true;
        summary["min_abs_at_zero"] = ec.min_abs_at_zero;
        summary["edge_gap_width"] = 2 * ec.min_abs_overall;
        auto f = open_out(cfg, "edges.csv");
        f << "k,lower,upper\n";
        for (size_t i = 0; i < ec.k.size(); ++i)
            f << format_double(ec.k[i]) << ',' << format_double(ec.lower[i]) << ',' << format_double(ec.upper[i])
              << '\n';
    } catch (const NoMidGapState&) {
        summary["midgap"] = false;
        if (flags.require_crossing) throw;
    }
    summary["crossing"] = crossing;
    json doc{{"summary", summary}};
    if (crossing && cfg.slope) {
        const SlopeReport r = perturbation_matrix(cfg.kind, prof, opt, cfg.fd_step);
        doc["slope"] = json{{"slope", r.slope},
                            {"fd_slope", r.fd_slope},
                            {"fd_slope_half", r.fd_slope_half},
                            {"richardson", r.richardson},
                            {"rel_gap", r.rel_gap},
                            {"h", r.h},
                            {"m0", json::array({complex_pair(r.m0(0, 0)), complex_pair(r.m0(0, 1)),
                                                complex_pair(r.m0(1, 0)), complex_pair(r.m0(1, 1))})}};
    }
    write_json(cfg, "spectrum.json", doc);
    log << "spectrum: crossing=" << (crossing ? "true" : "false") << " min|E|=" << format_double(min_kept_abs(table))
        << '\n';
    if (flags.require_crossing && !crossing) throw NoMidGapState("no crossing at k = 0");
}

void cmd_match_c(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const HoppingProfile& p = cfg.profile;
    if (p.delta_plus == 0 || p.delta_minus == 0) throw ConfigError("match-c needs nonzero delta on both sides");
    const double c_star = matching_c_star(p);
    const double f1p = *p_eigen(p.b_plus, p.delta_plus, 0).f1;
    const double f1m = *p_eigen(p.b_minus, p.delta_minus, 0).f1;
    const double residual = kept_upper_branch(InterfaceKind::TypeI, p.with_c(c_star), 0, supercell_options(cfg));
    write_json(cfg, "match_c.json",
               json{{"c_star", c_star},
                    {"f1_plus", f1p},
                    {"f1_minus", f1m},
                    {"residual_min_abs_e0", residual},
                    {"n_cells", cfg.n_cells}});
    log << "c* = " << format_double(c_star) << "\nresidual min|E(0)| = " << format_double(residual) << '\n';
}

void cmd_exist(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const HoppingProfile prof = effective_profile(cfg);
    json doc{{"kind", kind_name(cfg.kind)}, {"c_used", prof.c}};
    bool exists;
    if (cfg.kind == InterfaceKind::TypeI) {
        if (prof.delta_plus == 0 || prof.delta_minus == 0) throw DegenerateGapless("type I needs nonzero delta");
        doc["alignment"] = type1_alignment(prof, prof.c, 0);
        doc["c_star"] = matching_c_star(prof);
        exists = type1_zero_exists(prof, prof.c, 0);
    } else {
        const QMatrixReport qp = q_eigen(prof.b_plus, prof.delta_plus);
        const QMatrixReport qm = q_eigen(prof.b_minus, prof.delta_minus);
        doc["mu_plus"] = json::array({qp.mu1, qp.mu2, qp.mu3});
        doc["mu_minus"] = json::array({qm.mu1, qm.mu2, qm.mu3});
        exists = type2_zero_exists(prof);
    }
    doc["exists"] = exists;
    if (exists) {
        const auto [a, b] = build_zero_modes(cfg.kind, prof);
        doc["modes"] = json::array({mode_summary(a), mode_summary(b)});
        write_modes_csv(cfg, a, b);
    }
    write_json(cfg, "exist.json", doc);
    log << "exists: " << (exists ? "true" : "false") << '\n';
}

void cmd_evolve(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    DomainSpec spec;
    spec.kind = cfg.kind;
    spec.profile = effective_profile(cfg);
    spec.extent_a = cfg.extent_a;
    spec.extent_b = cfg.extent_b;
    if (cfg.bend) spec.bend = Bend{cfg.bend_vertex_m, cfg.bend_turn};
    if (cfg.ribbon_rows > 0) spec.ribbon_rows = cfg.ribbon_rows;
    const Domain d = build_domain(spec);

    RunOptions opt;
    opt.center_m = cfg.center_m;
    opt.width = cfg.width;
    opt.direction = cfg.direction;
    opt.t_end = cfg.t_end;
    if (cfg.dt > 0) opt.dt = cfg.dt;
    opt.stride = cfg.stride;
    opt.snapshot_every = cfg.snapshot_every;
    opt.tube_radius = cfg.tube_radius;
    const RunRecord rec = run_dynamics(d, opt);

    json series{{"time", rec.time},
                {"norm", rec.norm},
                {"energy", rec.energy},
                {"interface_mass", rec.mass},
                {"center_m", rec.center}};
    if (d.path.bent) {
        series["transmitted"] = rec.transmitted;
        series["reflected"] = rec.reflected;
        series["residual"] = rec.residual;
    }
    json snaps = json::array();
    for (size_t i = 0; i < rec.snapshots.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "snapshot_%04zu.csv", i);
        auto f = open_out(cfg, name);
        f << "x,y,density\n";
        const Eigen::VectorXd& rho = rec.snapshots[i].second;
        for (int s = 0; s < d.sites(); ++s) {
            const Eigen::Vector2d x = d.site_pos(s);
            f << format_double(x.x()) << ',' << format_double(x.y()) << ',' << format_double(rho[s]) << '\n';
        }
        snaps.push_back(json{{"file", name}, {"time", rec.snapshots[i].first}});
    }
    write_json(cfg, "evolve.json",
               json{{"sites", d.sites()},
                    {"rho_bound", d.h.row_sum_bound()},
                    {"dt", rec.dt},
                    {"steps", rec.steps},
                    {"energy_scale", rec.energy_scale},
                    {"series", series},
                    {"snapshots", snaps}});
    log << "evolve: " << d.sites() << " sites, " << rec.steps << " steps, final norm "
        << format_double(rec.norm.back()) << '\n';
}

void cmd_bulk(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const double b = cfg.bulk_b, eps = cfg.bulk_eps;
    const BandPath path = bulk_bands(b, eps, default_band_path(), cfg.band_points);
    {
        auto f = open_out(cfg, "bands.csv");
        write_band_csv(path, f);
    }
    const auto g = gamma_eigs(b, eps);
    const auto gc = gamma_eigs_closed_form(b, eps);
    json doc{{"gamma_eigs", g},
             {"gamma_closed_form", gc},
             {"gap_law_holds", path.gap_law_holds},
             {"gap_law_violation", gap_law_violation(b, eps)}};
    if (eps == 0) {
        const DiracFit fit = dirac_fit(b);
        if (fit.spread >= 0.01) throw NotConical("band touching at Gamma is not conical");
        doc["dirac"] = true;
        doc["dirac_slope"] = fit.slope;
        doc["dirac_spread"] = fit.spread;
    } else {
        doc["dirac"] = false;
        const BandInversion here = band_inversion(b, eps);
        const BandInversion flipped = band_inversion(b, -eps);
        const Mat6 inv = inversion_matrix();
        const double parity = (here.lower.adjoint() * inv * here.lower).trace().real() / 2;
        doc["lower_pair_parity"] = parity;
        doc["swap_distance"] = std::max(subspace_distance(here.lower, flipped.upper),
                                        subspace_distance(here.upper, flipped.lower));
    }
    write_json(cfg, "bulk.json", doc);
    log << "bulk: gamma";
    for (double e : g) log << ' ' << format_double(e);
    log << '\n';
}

int exit_code_for_current_exception(std::ostream& err) {
    try {
        throw;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const StepTooLarge& e) {
        err << "numerical precondition: " << e.what() << '\n';
        return kNumericalError;
    } catch (const DegenerateGapless& e) {
        err << "domain failure: " << e.what() << '\n';
        return kDomainError;
    } catch (const NoMidGapState& e) {
        err << "domain failure: " << e.what() << '\n';
        return kDomainError;
    } catch (const NotAZeroMode& e) {
        err << "domain failure: " << e.what() << '\n';
        return kDomainError;
    } catch (const NotConical& e) {
        err << "domain failure: " << e.what() << '\n';
        return kDomainError;
    } catch (const nlohmann::json::exception& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

int run_command(const std::string& name, const RunConfig& cfg, const CommandFlags& flags, std::ostream& log,
                std::ostream& err) {
    try {
        if (name == "spectrum")
            cmd_spectrum(cfg, flags, log);
        else if (name == "match-c")
            cmd_match_c(cfg, log);
        else if (name == "exist")
            cmd_exist(cfg, log);
        else if (name == "evolve")
            cmd_evolve(cfg, log);
        else if (name == "bulk")
            cmd_bulk(cfg, log);
        else
            throw ConfigError("unknown subcommand '" + name + "'");
        return kOk;
    } catch (...) {
        return exit_code_for_current_exception(err);
    }
}

}
