#pragma once

#include "sisdde/model.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace sisdde {

/// Coefficients of the mode-n quadratic factor of the characteristic equation
/// at E2:  lambda^2 + A_n lambda + B_n + e^{-lambda omega} (C lambda + D_n) = 0.
struct ModeCoefficients {
    int n = 0;
    double A = 0; ///< d + d1 n^2/l^2 + d2 n^2/l^2
    double B = 0; ///< d2 n^2/l^2 (d + d1 n^2/l^2)
    double C = 0; ///< mu I*
    double D = 0; ///< mu I* (d2 n^2/l^2 + d)
};

/// Requires R0 > 1 (uses I*); throws precondition_error otherwise.
ModeCoefficients mode_coefficients(const ModelParams& p, int n);

/// Largest mode n1 with B_n - D_n < 0, and the real root n2 of B_n - D_n = 0.
/// B_n - D_n < 0 exactly for 0 <= n <= n1 and > 0 for n >= n1 + 1.
struct ModeCutoff {
    int n1 = 0;
    double n2 = 0; ///< n1 < n2 < n1 + 1
};
ModeCutoff mode_cutoff(const ModelParams& p);

/// Positive root z_n of z^4 + (A^2-2B-C^2) z^2 + (B^2-D^2) = 0, present iff n <= n1.
std::optional<double> crossing_frequency(const ModelParams& p, int n);

/// Imaginary-axis crossing data for one mode: frequency, the sine/cosine of
/// z_n omega at the crossing, and the critical delays omega_n^j.
struct HopfCrossing {
    int n = 0;
    double z = 0;                ///< crossing frequency z_n > 0
    double S = 0;                ///< sin(z_n omega) at the crossing
    double C = 0;                ///< cos(z_n omega) at the crossing
    std::vector<double> omegas;  ///< omega_n^j, j = 0..j_max, spaced by 2*pi/z_n
};
HopfCrossing critical_delays(const ModelParams& p, int n, int j_max = 5);

/// The very first Hopf point: omega* = min_n omega_n^0 over n in {0..n1}.
struct FirstHopf {
    int n0 = 0;
    double omega_star = 0;
    double z_star = 0;
    std::vector<int> ties; ///< all minimizing modes when within tie tolerance (candidate double Hopf)
};
FirstHopf first_hopf(const ModelParams& p);

/// Value of the mode-n quadratic characteristic factor at lambda, delay omega_delay.
std::complex<double> characteristic_residual(const ModelParams& p, int n,
                                             std::complex<double> lambda,
                                             double omega_delay);

/// Re (dlambda/domega)^{-1} at omega_n^j via the closed form
/// sqrt((A^2-2B-C^2)^2 - 4(B^2-D^2)) / (C^2 z_n^2 + D^2); positive at every crossing.
double transversality(const ModelParams& p, int n, int j);

/// Full complex (dlambda/domega)^{-1} at omega_n^j (its real part is transversality()).
std::complex<double> dlambda_domega_inverse(const ModelParams& p, int n, int j);

/// lambda'(omega_n^j), the reciprocal of dlambda_domega_inverse.
std::complex<double> lambda_prime(const ModelParams& p, int n, int j);

/// alpha^2 e^{-2 d tau} - (2 beta y* + d3 n^2/l^2)^2; negative for every n, so the
/// third characteristic factor never crosses the imaginary axis.
double third_factor_margin(const ModelParams& p, int n);

enum class Stability { stable, unstable, critical, absent };

struct StabilityReport {
    Stability e0 = Stability::unstable;
    Stability e1 = Stability::stable;
    Stability e2 = Stability::absent;
    double omega_star = 0; ///< first Hopf value when E2 present, NaN otherwise
};

/// E0 always unstable; E1 stable iff R0 < 1; E2 stable iff omega < omega*.
StabilityReport linear_stability(const ModelParams& p);

enum class OmegaPattern {
    increasing,        ///< omega_n^0 strictly increasing over 0..n1, so omega* = omega_0^0
    decreasing_prefix, ///< (H1): decreasing for 0 <= n <= m with m >= 1
    mixed,             ///< neither; see breaks
    single_mode,       ///< n1 = 0, only omega_0^0 exists
};

struct MonotonicityProfile {
    OmegaPattern pattern = OmegaPattern::single_mode;
    int minimizer = 0;          ///< argmin of omega_n^0
    int prefix_end = -1;        ///< (H1) witness m: last index of the decreasing prefix
    std::vector<int> breaks;    ///< indices n where the direction of omega_n^0 flips
    std::vector<double> omega0; ///< omega_n^0 for n = 0..n1
};

/// Pattern of n -> omega_n^0 over the crossing modes, deciding the spatial
/// profile of the first bifurcating branch.
MonotonicityProfile monotonicity_profile(const ModelParams& p);

} // namespace sisdde
