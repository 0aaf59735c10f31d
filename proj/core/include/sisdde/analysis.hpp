#pragma once

#include "sisdde/normalform.hpp"
#include "sisdde/simulator.hpp"
#include "sisdde/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sisdde {

enum class Component { S, I, y };

/// Time series of projection coefficients a_n(t) = <field(.,t), b_n> against
/// the normalized cosine basis, via composite trapezoid on the grid.
struct ModeSpectrum {
    Component component = Component::I;
    int n_max = 0;
    std::vector<double> times;
    std::vector<std::vector<double>> coeffs; ///< coeffs[j][n], j over times
};

/// Throws std::invalid_argument when n_max > N/4 (aliasing guard).
ModeSpectrum project_modes(const Trajectory& traj, Component c, int n_max);

enum class AttractorKind { equilibrium, homogeneous_oscillation, inhomogeneous_oscillation, inconclusive };

struct AttractorReport {
    AttractorKind kind = AttractorKind::inconclusive;
    int dominant_mode = 0;
    double period = 0;             ///< NaN unless oscillatory with >= 3 cycles in the window
    std::vector<double> amplitude; ///< per-mode peak-to-peak in the trailing window
    double window_fraction = 0;
    std::string note;
};

struct ClassifyOptions {
    double window_fraction = 0.4;     ///< trailing fraction of the run used for classification
    double equilibrium_threshold = 1e-4; ///< relative to the field scale
    double dominance_ratio = 0.1;     ///< mode-0 dominance margin for "homogeneous"
    int n_max = 8;
    Component component = Component::I;
};

AttractorReport classify_attractor(const Trajectory& traj, const ClassifyOptions& opt = {});

struct SweepPoint {
    double d2 = 0;
    std::vector<std::optional<double>> omega0; ///< omega_n^0 for n = 0..n_track-1, absent above n1
    int n0 = 0;
    double omega_star = 0;
};

struct SweepBoundary {
    double d2_low = 0, d2_high = 0; ///< bracketing the n0 transition within 2% relative
    int n0_before = 0, n0_after = 0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::vector<SweepBoundary> boundaries;
};

/// omega_n^0 curves and the first-Hopf mode across d2, with n0-transition
/// boundaries refined by bisection.
SweepResult sweep_d2(const ModelParams& base, const std::vector<double>& d2_values,
                     int n_track = 5);

std::vector<double> log_grid(double lo, double hi, int points);

struct VerificationCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerificationReport {
    bool conclusive = false;
    bool all_pass = false;
    double omega_below = 0, omega_above = 0;
    NormalFormResult prediction;
    AttractorReport below, above;
    std::vector<VerificationCheck> checks;
};

/// Runs the theory (first Hopf + normal form) against two simulations at
/// omega = omega* (1 -+ margin): equilibrium below, oscillation above with the
/// predicted mode n0 and period within 5% of 2*pi/z*.
/// sim.t_end <= 0 selects a horizon from the linear growth rate at omega_above.
VerificationReport verify_prediction(const ModelParams& p, double margin, SimConfig sim = {});

} // namespace sisdde
