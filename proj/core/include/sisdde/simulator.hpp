#pragma once

#include "sisdde/model.hpp"

#include <span>
#include <string>
#include <vector>

namespace sisdde {

enum class Scheme {
    semi_implicit, ///< Strang split: Crank-Nicolson diffusion halves around a Heun reaction step
    explicit_rk2,  ///< Heun on diffusion + reaction, bound dt <= dx^2 / (2 max d)
};

/// Initial profile c + a*cos(k x) on [0, l*pi]; the time history on [-tau, 0]
/// is this same function, constant in time.
struct InitialProfile {
    double offset = 0;
    double amplitude = 0;
    double wavenumber = 0;
};

struct SimConfig {
    int grid_points = 192;   ///< N >= 16, uniform including both endpoints
    double dt = 0;           ///< 0: pick automatically (0.9x the explicit bound / 0.005)
    double t_end = 500;
    int record_every = 50;   ///< output cadence in steps
    Scheme scheme = Scheme::semi_implicit;
    std::array<InitialProfile, 3> initial{}; ///< S, I, y
};

struct Trajectory {
    ModelParams params;
    SimConfig config;
    int grid_points = 0;
    double dx = 0;
    std::vector<double> times;
    std::vector<std::vector<double>> S, I, y; ///< one grid array per recorded instant
    double min_S = 0; ///< most negative S over the whole run (S may genuinely dip below 0)
};

/// Second-order Neumann Laplacian: central differences with ghost reflection
/// (u_{-1} = u_1, u_N = u_{N-2}) at both ends.
void laplacian_neumann(std::span<const double> field, double dx, std::span<double> out);

/// dt bound of the explicit scheme: dx^2 / (2 max(d1,d2,d3)).
double explicit_stability_bound(const ModelParams& p, double dx);

/// Method-of-lines integration of the model with ring-buffer delay history
/// (linear interpolation between bracketing snapshots).
/// Throws numeric_error on NaN/overflow (reporting the failing time), on a
/// violated stability bound, and on I or y excursions below -1e-10 (those
/// components preserve nonnegativity, so negative means scheme trouble);
/// values in (-1e-10, 0) are clamped to zero. S excursions are kept and
/// reported via Trajectory::min_S.
Trajectory run_simulation(const ModelParams& p, const SimConfig& cfg);

/// CSV with header t,x,S,I,y, one row per (instant, node).
void write_trajectory_csv(const Trajectory& t, const std::string& path);

/// Binary snapshot format: magic "SDDE", u32 version = 1, u32 N, u32 count,
/// then count rows of (1 + 3N) little-endian doubles: t, S[0..N), I[0..N), y[0..N).
void write_trajectory_binary(const Trajectory& t, const std::string& path);
Trajectory read_trajectory_binary(const std::string& path);

} // namespace sisdde
