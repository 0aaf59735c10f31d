#include "sisdde/spectral.hpp"

#include "sisdde/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>

namespace sisdde {

namespace {

double endemic_infected(const ModelParams& p) {
    auto eq = equilibria(p);
    if (!eq.E2) throw precondition_error("no endemic equilibrium (R0 <= 1)");
    return (*eq.E2)[1];
}

ModeCoefficients coeffs_from_istar(const ModelParams& p, int n, double I_star) {
    const double k2 = double(n) * double(n) / (p.l * p.l);
    ModeCoefficients c;
    c.n = n;
    c.A = p.d + p.d1 * k2 + p.d2 * k2;
    c.B = p.d2 * k2 * (p.d + p.d1 * k2);
    c.C = p.mu * I_star;
    c.D = p.mu * I_star * (p.d2 * k2 + p.d);
    return c;
}

// Positive root of the quartic in z^2, evaluated without cancellation.
// P = A^2-2B-C^2, Q = B^2-D^2 < 0 for n <= n1.
std::optional<double> crossing_from_coeffs(const ModeCoefficients& c) {
    const double P = c.A * c.A - 2.0 * c.B - c.C * c.C;
    const double Q = (c.B + c.D) * (c.B - c.D);
    if (Q >= 0) return std::nullopt; // no sign change: no positive root for n > n1
    const double disc = P * P - 4.0 * Q;
    const double sq = std::sqrt(disc);
    const double z2 = (P > 0) ? (-2.0 * Q) / (P + sq) : (sq - P) / 2.0;
    if (!(z2 > 0)) return std::nullopt;
    return std::sqrt(z2);
}

struct CrossingAngles {
    double S, C;
};

CrossingAngles crossing_angles(const ModeCoefficients& c, double z) {
    const double den = (c.C * z) * (c.C * z) + c.D * c.D;
    const double z2 = z * z;
    CrossingAngles a;
    a.S = z * (c.A * c.D - c.B * c.C + z2 * c.C) / den;
    a.C = -(c.A * c.C * z2 + (c.B - z2) * c.D) / den;
    return a;
}

double clamp_unit(double x) {
    if (x > 1.0) {
        if (x > 1.0 + 1e-9) throw numeric_error("cos(z omega) outside [-1,1]");
        return 1.0;
    }
    if (x < -1.0) {
        if (x < -1.0 - 1e-9) throw numeric_error("cos(z omega) outside [-1,1]");
        return -1.0;
    }
    return x;
}

} // namespace

ModeCoefficients mode_coefficients(const ModelParams& p, int n) {
    return coeffs_from_istar(p, n, endemic_infected(p));
}

ModeCutoff mode_cutoff(const ModelParams& p) {
    const double I_star = endemic_infected(p);
    // B_n - D_n = a m^2 + b m + c with m = n^2
    const double muI = p.mu * I_star;
    const double a = p.d1 * p.d2 / (p.l * p.l * p.l * p.l);
    const double b = (p.d - muI) * p.d2 / (p.l * p.l);
    const double c = -muI * p.d;
    const double root_m = (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
    ModeCutoff cut;
    cut.n2 = std::sqrt(root_m);
    cut.n1 = int(std::floor(cut.n2));
    // re-evaluate the sign pattern exactly; floor can land wrong only through rounding
    auto bmd = [&](int n) {
        auto mc = coeffs_from_istar(p, n, I_star);
        return mc.B - mc.D;
    };
    while (cut.n1 > 0 && !(bmd(cut.n1) < 0)) --cut.n1;
    while (bmd(cut.n1 + 1) < 0) ++cut.n1;
    return cut;
}

std::optional<double> crossing_frequency(const ModelParams& p, int n) {
    return crossing_from_coeffs(mode_coefficients(p, n));
}

HopfCrossing critical_delays(const ModelParams& p, int n, int j_max) {
    const auto c = mode_coefficients(p, n);
    const auto z = crossing_from_coeffs(c);
    if (!z) throw precondition_error("mode stable for all delays (no imaginary crossing)");
    const auto ang = crossing_angles(c, *z);
    HopfCrossing h;
    h.n = n;
    h.z = *z;
    h.S = ang.S;
    h.C = ang.C;
    // S_n >= 0 is guaranteed for n <= n1 (A_n D_n - B_n C > 0); both arccos
    // branches are implemented anyway, with a warning when the lower one fires.
    const bool lower_branch = ang.S < -1e-12;
    if (lower_branch)
        std::fprintf(stderr, "critical_delays: sin(z omega) = %g < 0 at n = %d\n", ang.S, n);
    const double base = lower_branch ? 2.0 * M_PI - std::acos(clamp_unit(ang.C))
                                     : std::acos(clamp_unit(ang.C));
    h.omegas.reserve(std::size_t(j_max) + 1);
    for (int j = 0; j <= j_max; ++j) h.omegas.push_back((base + 2.0 * M_PI * j) / *z);
    return h;
}

FirstHopf first_hopf(const ModelParams& p) {
    const auto cut = mode_cutoff(p);
    FirstHopf fh;
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::pair<int, double>> omega0(std::size_t(cut.n1) + 1);
    std::vector<double> z(std::size_t(cut.n1) + 1);
    for (int n = 0; n <= cut.n1; ++n) {
        const auto h = critical_delays(p, n, 0);
        omega0[std::size_t(n)] = {n, h.omegas[0]};
        z[std::size_t(n)] = h.z;
        if (h.omegas[0] < best) {
            best = h.omegas[0];
            fh.n0 = n;
        }
    }
    fh.omega_star = best;
    fh.z_star = z[std::size_t(fh.n0)];
    const double tie_tol = 1e-9 * best;
    for (const auto& [n, w] : omega0)
        if (std::abs(w - best) <= tie_tol) fh.ties.push_back(n);
    return fh;
}

std::complex<double> characteristic_residual(const ModelParams& p, int n,
                                             std::complex<double> lambda,
                                             double omega_delay) {
    const auto c = mode_coefficients(p, n);
    return lambda * lambda + c.A * lambda + c.B +
           std::exp(-lambda * omega_delay) * (c.C * lambda + c.D);
}

double transversality(const ModelParams& p, int n, int j) {
    (void)j; // closed form is j-independent
    const auto c = mode_coefficients(p, n);
    const auto z = crossing_from_coeffs(c);
    if (!z) throw precondition_error("mode stable for all delays (no imaginary crossing)");
    const double P = c.A * c.A - 2.0 * c.B - c.C * c.C;
    const double Q = (c.B + c.D) * (c.B - c.D);
    const double z2 = *z * *z;
    return std::sqrt(P * P - 4.0 * Q) / (c.C * c.C * z2 + c.D * c.D);
}

std::complex<double> dlambda_domega_inverse(const ModelParams& p, int n, int j) {
    const auto c = mode_coefficients(p, n);
    const auto h = critical_delays(p, n, j);
    const double w = h.omegas[std::size_t(j)];
    const std::complex<double> lam(0.0, h.z);
    // e^{-lam w}(C lam + D) = -(lam^2 + A lam + B) at the crossing
    return -(2.0 * lam + c.A) / (lam * (lam * lam + c.A * lam + c.B)) +
           c.C / (lam * (c.C * lam + c.D)) - w / lam;
}

std::complex<double> lambda_prime(const ModelParams& p, int n, int j) {
    return 1.0 / dlambda_domega_inverse(p, n, j);
}

double third_factor_margin(const ModelParams& p, int n) {
    require_valid(p);
    const double ae = p.alpha * p.survival();
    const double y_star = ae / p.beta; // equals y_bar at both E1 and E2
    const double k2 = double(n) * double(n) / (p.l * p.l);
    const double s = 2.0 * p.beta * y_star + p.d3 * k2;
    return ae * ae - s * s;
}

StabilityReport linear_stability(const ModelParams& p) {
    require_valid(p);
    const auto eq = equilibria(p);
    StabilityReport r;
    r.e0 = Stability::unstable;
    r.omega_star = std::numeric_limits<double>::quiet_NaN();
    if (eq.at_threshold)
        r.e1 = Stability::critical;
    else
        r.e1 = eq.R0 < 1.0 ? Stability::stable : Stability::unstable;
    if (!eq.E2) {
        r.e2 = Stability::absent;
        return r;
    }
    const auto fh = first_hopf(p);
    r.omega_star = fh.omega_star;
    const double tol = 1e-9 * fh.omega_star;
    if (std::abs(p.omega - fh.omega_star) <= tol)
        r.e2 = Stability::critical;
    else
        r.e2 = p.omega < fh.omega_star ? Stability::stable : Stability::unstable;
    return r;
}

MonotonicityProfile monotonicity_profile(const ModelParams& p) {
    const auto cut = mode_cutoff(p);
    MonotonicityProfile m;
    m.omega0.reserve(std::size_t(cut.n1) + 1);
    for (int n = 0; n <= cut.n1; ++n)
        m.omega0.push_back(critical_delays(p, n, 0).omegas[0]);
    m.minimizer = int(std::min_element(m.omega0.begin(), m.omega0.end()) - m.omega0.begin());
    if (m.omega0.size() < 2) {
        m.pattern = OmegaPattern::single_mode;
        return m;
    }
    for (std::size_t i = 2; i < m.omega0.size(); ++i) {
        const bool up_prev = m.omega0[i - 1] > m.omega0[i - 2];
        const bool up_here = m.omega0[i] > m.omega0[i - 1];
        if (up_prev != up_here) m.breaks.push_back(int(i) - 1);
    }
    const bool first_up = m.omega0[1] > m.omega0[0];
    if (first_up) {
        m.pattern = m.breaks.empty() ? OmegaPattern::increasing : OmegaPattern::mixed;
    } else {
        // decreasing prefix; (H1) with m = end of the prefix
        int mend = int(m.omega0.size()) - 1;
        if (!m.breaks.empty()) mend = m.breaks.front();
        m.prefix_end = mend;
        m.pattern = OmegaPattern::decreasing_prefix;
    }
    return m;
}

} // namespace sisdde
