// fockgen - command-line front end.
//
// Exit codes: 0 success, 1 internal error, 2 config/usage error,
// 3 ensemble failure, 4 dark-state property failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fockgen/config.hpp"
#include "fockgen/dark_check.hpp"
#include "fockgen/dark_state.hpp"
#include "fockgen/ensemble.hpp"
#include "fockgen/error_bounds.hpp"
#include "fockgen/errors.hpp"
#include "fockgen/report.hpp"
#include "fockgen/spectral.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace fockgen;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitEnsemble = 3;
constexpr int kExitProperty = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    unsigned threads{0};
};

SimulationConfig load(const CommonOptions& o) {
    SimulationConfig cfg = load_config(o.config_path);
    if (o.seed) cfg.ensemble.master_seed = *o.seed;
    cfg.ensemble.threads = o.threads;
    return cfg;
}

fs::path output_dir(const CommonOptions& o, const SimulationConfig* cfg) {
    fs::path dir = !o.out_dir.empty() ? fs::path(o.out_dir)
                   : cfg != nullptr   ? fs::path(cfg->output_dir)
                                      : fs::path(".");
    fs::create_directories(dir);
    return dir;
}

// "a,b,,c" -> {"a", "b", "", "c"}; one argv token so a bare "," cannot swallow later flags
std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = text.find(',', start);
        out.push_back(text.substr(start, comma - start));
        if (comma == std::string::npos) return out;
        start = comma + 1;
    }
}

std::vector<double> parse_grid(const std::vector<std::string>& items, const char* what) {
    std::vector<double> out;
    for (const auto& s : items) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size() || !std::isfinite(v)) {
            throw UsageError(std::string(what) + ": not a number: '" + s + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) throw UsageError(std::string(what) + " is empty");
    return out;
}

int cmd_simulate(const CommonOptions& o, bool dump_trajectory) {
    const SimulationConfig cfg = load(o);
    const EnsembleStats stats = run_ensemble(cfg.ensemble);
    const fs::path dir = output_dir(o, &cfg);
    write_file_atomic(dir / "ensemble.csv", ensemble_csv(stats));
    write_file_atomic(dir / "summary.json", ensemble_summary_json(stats, cfg));
    if (dump_trajectory) {
        const std::uint64_t seed = trajectory_seed(cfg.ensemble.master_seed, 0);
        const TrajectoryRecord rec = run_trajectory(cfg.trajectory(), seed);
        write_file_atomic(dir / "trajectory.csv", trajectory_csv(rec));
        write_file_atomic(dir / "jumps.json", jump_log_json(rec, seed));
    }
    std::printf("N=%d trajectories=%zu photons_out=%.6g +- %.2g cavity_jumps=%.6g +- %.2g "
                "N_s=%.6g +- %.2g fractional_loss=%.4g +- %.2g aborted=%zu\n",
                stats.n_initial, stats.trajectories, stats.photons_out, stats.photons_out_se,
                stats.mean_cavity_jumps, stats.mean_cavity_jumps_se, stats.n_s, stats.n_s_se,
                stats.fractional_loss, stats.fractional_loss_se, stats.aborted);
    if (stats.failed()) {
        std::cerr << "fockgen: ensemble failed: " << stats.aborted << " of " << stats.trajectories
                  << " trajectories aborted\n";
        for (const auto& d : stats.diagnostics) std::cerr << "  " << d << '\n';
        return kExitEnsemble;
    }
    return kExitOk;
}

int cmd_sweep(const CommonOptions& o, const std::string& axis_name,
              std::vector<std::string> values, bool proportional_ramp) {
    SweepAxis axis;
    try {
        axis = parse_sweep_axis(axis_name);
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    std::erase(values, std::string{});
    if (values.empty()) throw UsageError("--values is empty");
    const SimulationConfig cfg = load(o);
    const std::vector<SweepRow> rows = sweep(cfg.ensemble, axis, values, {proportional_ramp});
    const fs::path dir = output_dir(o, &cfg);
    write_file_atomic(dir / "sweep.csv", sweep_csv(rows));
    write_file_atomic(dir / "sweep.json", sweep_summary_json(rows, axis, proportional_ramp, cfg));
    bool complete = true;
    for (const auto& r : rows) {
        if (r.ok) {
            std::printf("%s=%s fractional_loss=%.4g +- %.2g photons_out=%.6g N_s=%.6g\n",
                        to_string(axis).c_str(), r.axis_value.c_str(), r.stats.fractional_loss,
                        r.stats.fractional_loss_se, r.stats.photons_out, r.stats.n_s);
        } else {
            complete = false;
            std::cerr << "fockgen: sweep point " << r.axis_value << " failed: " << r.error << '\n';
        }
    }
    return complete ? kExitOk : kExitEnsemble;
}

int cmd_dark_check(const CommonOptions& o, int n_max, const std::vector<std::string>& grid_items) {
    if (n_max < 1) throw UsageError("--n-max must be >= 1");
    const std::vector<double> grid = parse_grid(grid_items, "--x-grid");
    for (double x : grid) {
        if (x < 0.0) throw UsageError("--x-grid values must be >= 0");
    }
    const std::vector<DarkCheckRow> rows = run_dark_checks(n_max, grid);

    std::string csv = "n_atoms,k,x,check,residual,tolerance,passed\n";
    std::size_t failures = 0;
    std::printf("%3s %3s %8s  %-28s %12s %9s  %s\n", "N", "k", "x", "check", "residual", "tol",
                "ok");
    for (const auto& r : rows) {
        if (!r.passed) ++failures;
        std::printf("%3d %3d %8.3g  %-28s %12.3e %9.1e  %s\n", r.n_atoms, r.k, r.x, r.check.c_str(),
                    r.residual, r.tolerance, r.passed ? "pass" : "FAIL");
        csv += std::to_string(r.n_atoms) + ',' + std::to_string(r.k) + ',' + format_double(r.x) +
               ",\"" + r.check + "\"," + format_double(r.residual) + ',' +
               format_double(r.tolerance) + ',' + (r.passed ? "true" : "false") + '\n';
    }
    if (!o.out_dir.empty()) {
        write_file_atomic(output_dir(o, nullptr) / "dark_check.csv", csv);
    }
    std::printf("%zu checks, %zu failures\n", rows.size(), failures);
    return failures == 0 ? kExitOk : kExitProperty;
}

json number_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

int cmd_spectrum(const CommonOptions& o, const std::vector<std::string>& grid_items, int k) {
    const SimulationConfig cfg = load(o);
    const std::vector<double> grid = parse_grid(grid_items, "--x-grid");
    const TrajectoryConfig& tc = cfg.trajectory();
    const SystemParams& p = tc.params;
    const int n = tc.n_atoms;
    if (k < 0 || k > n) throw UsageError("--k must be in [0, n_atoms]");
    const Manifold m(n, k);

    std::string csv = "x,eigenvalue_index,eigenvalue,overlap_with_dark\n";
    json points = json::array();
    for (double x : grid) {
        if (x < 0.0) throw UsageError("--x-grid values must be >= 0");
        const double r = x * p.g;
        const SpectrumReport rep = eigendecompose(m, r, p);
        const std::vector<double> dark = dark_state(n, k, x).amplitudes;
        for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
            double ov = 0.0;
            for (std::size_t j = 0; j < dark.size(); ++j) ov += rep.eigenvectors(j, i) * dark[j];
            csv += format_double(x) + ',' + std::to_string(i) + ',' +
                   format_double(rep.eigenvalues[i]) + ',' + format_double(ov * ov) + '\n';
        }
        json pt;
        pt["x"] = x;
        pt["dark_index"] = rep.dark_index;
        pt["dark_overlap"] = rep.dark_overlap;
        pt["degenerate_dark"] = rep.degenerate_dark;
        pt["spectral_radius"] = rep.spectral_radius;
        pt["min_bohr"] = number_or_null(rep.min_bohr);
        pt["min_bohr_coupled"] = number_or_null(rep.min_bohr_coupled);
        if (m.dim() > 1 && std::abs(p.delta) > 0.0) {
            pt["heuristic_min_bohr"] = heuristic_min_bohr(k, r, p.g, p.delta);
        }
        points.push_back(std::move(pt));
    }

    json report;
    report["units"] = {{"energies", "g"}, {"x", "r/g"}};
    report["n_atoms"] = n;
    report["k"] = k;
    report["points"] = std::move(points);
    report["schwinger_deviation_r100g"] = schwinger_limit_check(n, k, 100.0 * p.g, p);

    json tc_table = json::array();
    std::printf("Tavis-Cummings degeneracy (r = 0)\n%3s %6s %6s %8s\n", "k", "f", "size", "expected");
    for (int kk = 0; kk <= n; ++kk) {
        const TavisCummingsReport t = tavis_cummings_check(n, kk, p);
        json rows = json::array();
        for (const auto& row : t.rows) {
            rows.push_back({{"f", row.f},
                            {"block_size", row.block_size},
                            {"expected", row.expected},
                            {"min_number_overlap", row.min_number_overlap}});
            std::printf("%3d %6.1f %6zu %8zu\n", kk, row.f, row.block_size, row.expected);
        }
        tc_table.push_back({{"k", kk},
                            {"blocks_unmixed", t.blocks_unmixed},
                            {"sizes_match", t.sizes_match},
                            {"spectrum_matches", t.spectrum_matches},
                            {"rows", rows}});
    }
    report["tavis_cummings"] = std::move(tc_table);
    report["config"] = json::parse(config_to_json(cfg));

    const fs::path dir = output_dir(o, &cfg);
    write_file_atomic(dir / "spectrum.csv", csv);
    write_file_atomic(dir / "spectrum.json", report.dump(2) + '\n');
    std::printf("Schwinger deviation at r = 100 g: %.3e\n",
                report["schwinger_deviation_r100g"].get<double>());
    return kExitOk;
}

int cmd_bounds(const CommonOptions& o, std::optional<double> r_opt,
               std::optional<double> min_bohr_opt) {
    const SimulationConfig cfg = load(o);
    const TrajectoryConfig& tc = cfg.trajectory();
    const SystemParams& p = tc.params;
    const int n = tc.n_atoms;
    const double r = r_opt.value_or(p.g);
    if (!(r >= 0.0)) throw UsageError("--r must be >= 0");
    const double rdot = tc.pulse.max_derivative();

    json reports = json::array();
    std::printf("%3s %12s %12s %12s %12s %12s\n", "k", "min_bohr", "eps_cavity", "eps_adiab",
                "gamma'_smallD", "gamma'_largeD");
    for (int k = 0; k <= n; ++k) {
        const Manifold m(n, k);
        double w = 0.0;
        std::string source;
        if (min_bohr_opt) {
            w = *min_bohr_opt;
            source = "given";
        } else if (m.dim() > 1) {
            w = min_bohr_frequency(m, r, p, true);
            source = "spectral";
            if (!std::isfinite(w)) {
                w = heuristic_min_bohr(k, r, p.g, p.delta);
                source = "heuristic";
            }
        } else {
            w = heuristic_min_bohr(k, r, p.g, p.delta);
            source = "heuristic";
        }
        BoundReport b;
        try {
            b = bound_report(n, k, r, rdot, p.g, p.delta, p.kappa, p.gamma, w);
        } catch (const SingularError& e) {
            throw ConfigError(std::string("bounds are singular for this config: ") + e.what());
        }
        std::printf("%3d %12.5g %12.5g %12.5g %12.5g %12.5g\n", k, b.min_bohr, b.eps_cavity,
                    b.eps_adiabatic, b.gamma_prime_small_delta, b.gamma_prime_large_delta);
        reports.push_back({{"k", b.k},
                           {"min_bohr", b.min_bohr},
                           {"min_bohr_source", source},
                           {"eps_cavity", b.eps_cavity},
                           {"eps_adiabatic", b.eps_adiabatic},
                           {"gamma_prime_small_delta", b.gamma_prime_small_delta},
                           {"gamma_prime_large_delta", b.gamma_prime_large_delta},
                           {"fractional_loss_bound", b.fractional_loss_bound},
                           {"eta", b.eta},
                           {"effective_r", b.effective_r}});
    }
    json out;
    out["units"] = {{"rates", "g"}, {"times", "1/g"}};
    out["r"] = r;
    out["rdot_max"] = rdot;
    out["fractional_loss_bound"] = fractional_loss_bound(p.gamma, p.kappa, p.g);
    out["reports"] = std::move(reports);
    out["config"] = json::parse(config_to_json(cfg));
    const fs::path dir = output_dir(o, &cfg);
    write_file_atomic(dir / "bounds.json", out.dump(2) + '\n');
    std::printf("fractional loss bound gamma kappa / g^2 = %.4g\n",
                out["fractional_loss_bound"].get<double>());
    return kExitOk;
}

void add_common(CLI::App* cmd, CommonOptions& o, bool needs_config) {
    auto* c = cmd->add_option("--config", o.config_path, "JSON config file");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out_dir, "output directory (default: config output_dir)");
}

void add_run_options(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--seed", o.seed, "master seed override");
    cmd->add_option("--threads", o.threads,
                    "worker threads (default: FOCKGEN_THREADS or hardware concurrency)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fockgen: N-photon Fock-state generation in a driven atom-cavity system"};
    app.require_subcommand(1);

    CommonOptions sim_o, sweep_o, dark_o, spec_o, bounds_o;
    bool dump_trajectory = false;
    auto* sim = app.add_subcommand("simulate", "run a trajectory ensemble");
    add_common(sim, sim_o, true);
    add_run_options(sim, sim_o);
    sim->add_flag("--dump-trajectory", dump_trajectory, "also write trajectory 0 and its jump log");

    std::string axis;
    std::string values;
    bool proportional = false;
    auto* sw = app.add_subcommand("sweep", "one ensemble per axis value");
    add_common(sw, sweep_o, true);
    add_run_options(sw, sweep_o);
    sw->add_option("--axis", axis, "delta | ramp_rate | g | N | pulse_kind")->required();
    sw->add_option("--values", values, "comma-separated axis values")->required();
    sw->add_flag("--proportional-ramp", proportional, "g axis: scale pulse with g and dt with 1/g");

    int n_max = 8;
    std::string dark_grid{"0,0.01,0.1,1,3,10"};
    auto* dc = app.add_subcommand("dark-check", "verify dark-state identities on a grid");
    dc->add_option("--n-max", n_max, "largest atom number");
    dc->add_option("--x-grid", dark_grid, "comma-separated r/g values");
    dc->add_option("--out", dark_o.out_dir, "also write dark_check.csv here");

    std::string spec_grid{"0,0.5,1,2,5,10"};
    int spec_k = 0;
    auto* sp = app.add_subcommand("spectrum", "eigen-spectrum of H along r/g");
    add_common(sp, spec_o, true);
    sp->add_option("--x-grid", spec_grid, "comma-separated r/g values");
    sp->add_option("--k", spec_k, "manifold index k");

    std::optional<double> bounds_r, bounds_w;
    auto* bd = app.add_subcommand("bounds", "analytic error bounds for k = 0..N");
    add_common(bd, bounds_o, true);
    bd->add_option("--r", bounds_r, "drive amplitude (default g)");
    bd->add_option("--min-bohr", bounds_w, "override the minimum Bohr frequency");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*sim) return cmd_simulate(sim_o, dump_trajectory);
        if (*sw) return cmd_sweep(sweep_o, axis, split_list(values), proportional);
        if (*dc) return cmd_dark_check(dark_o, n_max, split_list(dark_grid));
        if (*sp) return cmd_spectrum(spec_o, split_list(spec_grid), spec_k);
        if (*bd) return cmd_bounds(bounds_o, bounds_r, bounds_w);
    } catch (const ConfigError& e) {
        std::cerr << "fockgen: config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const UsageError& e) {
        std::cerr << "fockgen: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "fockgen: error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}
