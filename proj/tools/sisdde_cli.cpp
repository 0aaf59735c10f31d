// Command-line front end: equilibria, Hopf analysis, normal form, simulation,
// d2 sweep, and theory-vs-simulation verification, driven by flat key-value
// config files. Every command writes a run manifest next to its outputs.

#include "sisdde/analysis.hpp"
#include "sisdde/config.hpp"
#include "sisdde/errors.hpp"
#include "sisdde/json_io.hpp"
#include "sisdde/version.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>

using nlohmann::json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::string manifest_path;
};

struct ManifestWriter {
    std::string command;
    json config_echo;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void write(const std::string& path) const {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json j{{"schema", sisdde::kJsonSchema},
               {"command", command},
               {"version", sisdde::kVersion},
               {"config", config_echo},
               {"outputs", outputs},
               {"wall_time_s", secs},
               {"thread_count", 1}};
        std::ofstream f(path);
        if (!f) throw std::invalid_argument("cannot write manifest: " + path);
        f << j.dump(2) << '\n';
    }
};

json config_echo(const sisdde::KeyValueConfig& cfg) {
    json j = json::object();
    for (const auto& [k, v] : cfg.values) j[k] = v;
    for (const auto& [k, v] : cfg.strings) j[k] = v;
    return j;
}

void emit(const json& j, const CommonArgs& args, ManifestWriter& manifest) {
    std::cout << j.dump(2) << '\n';
    if (!args.out_path.empty()) {
        std::ofstream f(args.out_path);
        if (!f) throw std::invalid_argument("cannot write output: " + args.out_path);
        f << j.dump(2) << '\n';
        manifest.outputs.push_back(args.out_path);
    }
    const std::string mpath =
        args.manifest_path.empty() ? manifest.command + ".manifest.json" : args.manifest_path;
    manifest.outputs.push_back(mpath);
    manifest.write(mpath);
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "key-value parameter file")->required();
    cmd->add_option("--out", args.out_path, "write the JSON result to this file");
    cmd->add_option("--manifest", args.manifest_path,
                    "run manifest path (default: <command>.manifest.json)");
}

int run_equilibria(const CommonArgs& args) {
    ManifestWriter manifest{"equilibria", {}, {}};
    const auto cfg = sisdde::load_config(args.config_path);
    manifest.config_echo = config_echo(cfg);
    const auto p = sisdde::params_from_config(cfg);
    json j = sisdde::to_json(sisdde::equilibria(p));
    j["params"] = sisdde::to_json(p);
    emit(j, args, manifest);
    return 0;
}

int run_hopf(const CommonArgs& args, int modes, int jmax) {
    ManifestWriter manifest{"hopf", {}, {}};
    const auto cfg = sisdde::load_config(args.config_path);
    manifest.config_echo = config_echo(cfg);
    const auto p = sisdde::params_from_config(cfg);

    const auto cut = sisdde::mode_cutoff(p);
    const int n_hi = modes < 0 ? cut.n1 : std::min(modes, cut.n1);
    json mode_records = json::array();
    for (int n = 0; n <= n_hi; ++n) {
        const auto c = sisdde::mode_coefficients(p, n);
        const auto h = sisdde::critical_delays(p, n, jmax);
        json rec = sisdde::to_json(h, sisdde::transversality(p, n, 0));
        rec["A_n"] = c.A;
        rec["B_n"] = c.B;
        rec["C"] = c.C;
        rec["D_n"] = c.D;
        mode_records.push_back(rec);
    }
    json j{{"schema", sisdde::kJsonSchema},
           {"params", sisdde::to_json(p)},
           {"n1", cut.n1},
           {"n2", cut.n2},
           {"modes", mode_records},
           {"first_hopf", sisdde::to_json(sisdde::first_hopf(p))}};
    emit(j, args, manifest);
    return 0;
}

int run_normalform(const CommonArgs& args) {
    ManifestWriter manifest{"normalform", {}, {}};
    const auto cfg = sisdde::load_config(args.config_path);
    manifest.config_echo = config_echo(cfg);
    const auto p = sisdde::params_from_config(cfg);
    json j = sisdde::to_json(sisdde::hopf_properties(p));
    j["params"] = sisdde::to_json(p);
    emit(j, args, manifest);
    return 0;
}

struct SimOverrides {
    std::optional<double> omega, d2, dt, t_end;
    std::optional<int> grid, record_every;
    std::string csv_path, binary_path;
    sisdde::ClassifyOptions classify;
};

int run_simulate(const CommonArgs& args, const SimOverrides& ov) {
    ManifestWriter manifest{"simulate", {}, {}};
    const auto cfg = sisdde::load_config(args.config_path);
    manifest.config_echo = config_echo(cfg);
    auto p = sisdde::params_from_config(cfg);
    if (ov.omega) p.omega = *ov.omega;
    if (ov.d2) p.d2 = *ov.d2;
    sisdde::require_valid(p);
    auto sim = sisdde::sim_from_config(cfg, p);
    if (ov.dt) sim.dt = *ov.dt;
    if (ov.t_end) sim.t_end = *ov.t_end;
    if (ov.grid) sim.grid_points = *ov.grid;
    if (ov.record_every) sim.record_every = *ov.record_every;

    const auto traj = sisdde::run_simulation(p, sim);
    if (!ov.csv_path.empty()) {
        sisdde::write_trajectory_csv(traj, ov.csv_path);
        manifest.outputs.push_back(ov.csv_path);
    }
    if (!ov.binary_path.empty()) {
        sisdde::write_trajectory_binary(traj, ov.binary_path);
        manifest.outputs.push_back(ov.binary_path);
    }
    const auto report = sisdde::classify_attractor(traj, ov.classify);
    json j = sisdde::to_json(report);
    j["params"] = sisdde::to_json(p);
    j["dt"] = traj.config.dt;
    j["grid_points"] = traj.grid_points;
    j["t_end"] = sim.t_end;
    emit(j, args, manifest);
    return 0;
}

int run_sweep(const CommonArgs& args, double d2_min, double d2_max, int points,
              const std::string& csv_path) {
    ManifestWriter manifest{"sweep", {}, {}};
    const auto cfg = sisdde::load_config(args.config_path);
    manifest.config_echo = config_echo(cfg);
    const auto p = sisdde::params_from_config(cfg);
    const auto sweep = sisdde::sweep_d2(p, sisdde::log_grid(d2_min, d2_max, points));
    if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        if (!f) throw std::invalid_argument("cannot write csv: " + csv_path);
        f << "d2";
        for (std::size_t n = 0; n < sweep.points.front().omega0.size(); ++n) f << ",omega_" << n << "_0";
        f << ",n0\n";
        f.precision(12);
        for (const auto& pt : sweep.points) {
            f << pt.d2;
            for (const auto& w : pt.omega0) {
                f << ',';
                if (w) f << *w;
            }
            f << ',' << pt.n0 << '\n';
        }
        manifest.outputs.push_back(csv_path);
    }
    emit(sisdde::to_json(sweep), args, manifest);
    return 0;
}

int run_verify(const CommonArgs& args, double margin) {
    ManifestWriter manifest{"verify", {}, {}};
    const auto cfg = sisdde::load_config(args.config_path);
    manifest.config_echo = config_echo(cfg);
    const auto p = sisdde::params_from_config(cfg);
    auto sim = sisdde::sim_from_config(cfg, p);
    if (!cfg.has("t_end")) sim.t_end = 0; // let verify choose from the growth rate
    const auto rep = sisdde::verify_prediction(p, margin, sim);
    emit(sisdde::to_json(rep), args, manifest);

    if (!rep.conclusive) {
        std::cerr << "verification inconclusive\n";
        return 0;
    }
    for (const auto& c : rep.checks)
        std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    return rep.all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bifurcation analysis and simulation of a two-delay stage-structured "
                 "SIS reaction-diffusion model"};
    app.require_subcommand(1);
    app.set_version_flag("--version", sisdde::kVersion);

    CommonArgs eq_args, hopf_args, nf_args, sim_args, sweep_args, verify_args;
    int hopf_modes = -1, hopf_jmax = 5;
    SimOverrides sim_ov;
    double d2_min = 1e-3, d2_max = 1e3, verify_margin = 0.02;
    int sweep_points = 60;
    std::string sweep_csv;

    auto* c_eq = app.add_subcommand("equilibria", "R0 and the constant equilibria E0, E1, E2");
    add_common(c_eq, eq_args);

    auto* c_hopf = app.add_subcommand("hopf", "per-mode Hopf crossings and the first Hopf point");
    add_common(c_hopf, hopf_args);
    c_hopf->add_option("--modes", hopf_modes, "highest mode to report (default: n1)");
    c_hopf->add_option("--jmax", hopf_jmax, "critical delays per mode: j = 0..jmax")
        ->check(CLI::NonNegativeNumber);

    auto* c_nf = app.add_subcommand("normalform", "Hopf normal form: c1(0), mu2, beta2, T2");
    add_common(c_nf, nf_args);

    auto* c_sim = app.add_subcommand("simulate", "integrate the model and classify the attractor");
    add_common(c_sim, sim_args);
    c_sim->add_option("--omega", [&sim_ov](auto& v) { sim_ov.omega = std::stod(v[0]); return true; },
                      "override the freely-moving delay")->expected(1);
    c_sim->add_option("--d2", [&sim_ov](auto& v) { sim_ov.d2 = std::stod(v[0]); return true; },
                      "override the infected diffusion rate")->expected(1);
    c_sim->add_option("--dt", [&sim_ov](auto& v) { sim_ov.dt = std::stod(v[0]); return true; },
                      "override the time step")->expected(1);
    c_sim->add_option("--t-end", [&sim_ov](auto& v) { sim_ov.t_end = std::stod(v[0]); return true; },
                      "override the horizon")->expected(1);
    c_sim->add_option("--grid", [&sim_ov](auto& v) { sim_ov.grid = std::stoi(v[0]); return true; },
                      "override the number of grid points")->expected(1);
    c_sim->add_option("--record-every",
                      [&sim_ov](auto& v) { sim_ov.record_every = std::stoi(v[0]); return true; },
                      "override the output cadence (steps)")->expected(1);
    c_sim->add_option("--csv", sim_ov.csv_path, "write the trajectory as CSV (t,x,S,I,y)");
    c_sim->add_option("--binary", sim_ov.binary_path, "write the trajectory snapshot file");
    c_sim->add_option("--window-fraction", sim_ov.classify.window_fraction,
                      "trailing fraction of the run used for classification");
    c_sim->add_option("--equilibrium-threshold", sim_ov.classify.equilibrium_threshold,
                      "relative amplitude below which the state counts as an equilibrium");
    c_sim->add_option("--dominance-ratio", sim_ov.classify.dominance_ratio,
                      "mode-0 dominance margin for the homogeneous label");

    auto* c_sweep = app.add_subcommand("sweep", "omega_n^0 curves and n0 regimes across d2");
    add_common(c_sweep, sweep_args);
    c_sweep->add_option("--d2-min", d2_min, "lower end of the d2 range")->check(CLI::PositiveNumber);
    c_sweep->add_option("--d2-max", d2_max, "upper end of the d2 range")->check(CLI::PositiveNumber);
    c_sweep->add_option("--points", sweep_points, "grid points (logarithmic)")
        ->check(CLI::Range(2, 100000));
    c_sweep->add_option("--csv", sweep_csv, "write the curves as CSV (d2, omega_n^0..., n0)");

    auto* c_verify = app.add_subcommand("verify", "simulate at omega*(1 -+ margin) and check the theory");
    add_common(c_verify, verify_args);
    c_verify->add_option("--margin", verify_margin, "relative distance from omega*");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c_eq->parsed()) return run_equilibria(eq_args);
        if (c_hopf->parsed()) return run_hopf(hopf_args, hopf_modes, hopf_jmax);
        if (c_nf->parsed()) return run_normalform(nf_args);
        if (c_sim->parsed()) return run_simulate(sim_args, sim_ov);
        if (c_sweep->parsed()) return run_sweep(sweep_args, d2_min, d2_max, sweep_points, sweep_csv);
        if (c_verify->parsed()) return run_verify(verify_args, verify_margin);
    } catch (const sisdde::precondition_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const sisdde::numeric_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
