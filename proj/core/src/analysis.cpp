#include "sisdde/analysis.hpp"

#include "sisdde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace sisdde {

namespace {

const std::vector<std::vector<double>>& component_of(const Trajectory& t, Component c) {
    switch (c) {
    case Component::S: return t.S;
    case Component::y: return t.y;
    default: return t.I;
    }
}

std::vector<double> basis_on_grid(int n, double l, int N, double dx) {
    std::vector<double> b(static_cast<std::size_t>(N));
    const double lpi = l * M_PI;
    if (n == 0) {
        std::fill(b.begin(), b.end(), 1.0 / std::sqrt(lpi));
    } else {
        const double amp = std::sqrt(2.0 / lpi);
        for (int i = 0; i < N; ++i) b[std::size_t(i)] = amp * std::cos(double(n) / l * double(i) * dx);
    }
    return b;
}

double trapezoid_dot(const std::vector<double>& f, const std::vector<double>& g, double dx) {
    const std::size_t n = f.size();
    double s = 0.5 * (f[0] * g[0] + f[n - 1] * g[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) s += f[i] * g[i];
    return s * dx;
}

std::size_t window_start(const std::vector<double>& times, double fraction) {
    const double t_cut = times.back() * (1.0 - fraction);
    std::size_t j = 0;
    while (j < times.size() && times[j] < t_cut) ++j;
    return std::min(j, times.size() - 1);
}

// Mean spacing of upward crossings of the series through its window mean.
std::optional<double> zero_crossing_period(const std::vector<double>& t,
                                           const std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
    std::vector<double> crossings;
    for (std::size_t j = 1; j < v.size(); ++j) {
        const double a = v[j - 1] - mean, b = v[j] - mean;
        if (a < 0 && b >= 0) {
            const double frac = a / (a - b);
            crossings.push_back(t[j - 1] + frac * (t[j] - t[j - 1]));
        }
    }
    if (crossings.size() < 4) return std::nullopt; // fewer than 3 full cycles
    double sum = 0;
    for (std::size_t j = 1; j < crossings.size(); ++j) sum += crossings[j] - crossings[j - 1];
    return sum / double(crossings.size() - 1);
}

} // namespace

ModeSpectrum project_modes(const Trajectory& traj, Component c, int n_max) {
    if (n_max < 0) throw std::invalid_argument("n_max must be non-negative");
    if (n_max > traj.grid_points / 4)
        throw std::invalid_argument("n_max too large for the grid (aliasing guard: n_max <= N/4)");
    ModeSpectrum sp;
    sp.component = c;
    sp.n_max = n_max;
    sp.times = traj.times;
    const auto& field = component_of(traj, c);
    std::vector<std::vector<double>> basis;
    basis.reserve(std::size_t(n_max) + 1);
    for (int n = 0; n <= n_max; ++n)
        basis.push_back(basis_on_grid(n, traj.params.l, traj.grid_points, traj.dx));
    sp.coeffs.resize(field.size());
    for (std::size_t j = 0; j < field.size(); ++j) {
        sp.coeffs[j].resize(std::size_t(n_max) + 1);
        for (int n = 0; n <= n_max; ++n)
            sp.coeffs[j][std::size_t(n)] = trapezoid_dot(field[j], basis[std::size_t(n)], traj.dx);
    }
    return sp;
}

AttractorReport classify_attractor(const Trajectory& traj, const ClassifyOptions& opt) {
    AttractorReport rep;
    rep.window_fraction = opt.window_fraction;
    const int n_max = std::min(opt.n_max, traj.grid_points / 4);
    const auto sp = project_modes(traj, opt.component, n_max);
    const std::size_t j0 = window_start(sp.times, opt.window_fraction);

    // field scale: sup norm of the full state over the window, so a component
    // decaying to zero (I when R0 < 1) still reads as an equilibrium
    double scale = 0;
    for (const auto* f : {&traj.S, &traj.I, &traj.y})
        for (std::size_t j = j0; j < f->size(); ++j)
            for (double v : (*f)[j]) scale = std::max(scale, std::abs(v));
    if (scale == 0) scale = 1.0;

    rep.amplitude.assign(std::size_t(n_max) + 1, 0.0);
    for (int n = 0; n <= n_max; ++n) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t j = j0; j < sp.coeffs.size(); ++j) {
            lo = std::min(lo, sp.coeffs[j][std::size_t(n)]);
            hi = std::max(hi, sp.coeffs[j][std::size_t(n)]);
        }
        rep.amplitude[std::size_t(n)] = hi - lo;
    }

    const double threshold = opt.equilibrium_threshold * scale;
    const double peak = *std::max_element(rep.amplitude.begin(), rep.amplitude.end());
    if (peak < threshold) {
        rep.kind = AttractorKind::equilibrium;
        rep.dominant_mode = 0;
        rep.period = std::numeric_limits<double>::quiet_NaN();
        return rep;
    }

    rep.dominant_mode =
        int(std::max_element(rep.amplitude.begin(), rep.amplitude.end()) - rep.amplitude.begin());

    std::vector<double> t_w(sp.times.begin() + std::ptrdiff_t(j0), sp.times.end());
    std::vector<double> a_w;
    a_w.reserve(t_w.size());
    for (std::size_t j = j0; j < sp.coeffs.size(); ++j)
        a_w.push_back(sp.coeffs[j][std::size_t(rep.dominant_mode)]);
    const auto period = zero_crossing_period(t_w, a_w);
    if (!period) {
        rep.kind = AttractorKind::inconclusive;
        rep.note = "fewer than 3 oscillation cycles in the window";
        rep.period = std::numeric_limits<double>::quiet_NaN();
        return rep;
    }
    rep.period = *period;

    if (rep.dominant_mode == 0) {
        bool homogeneous = true;
        for (int n = 1; n <= n_max; ++n)
            if (rep.amplitude[std::size_t(n)] >= opt.dominance_ratio * rep.amplitude[0])
                homogeneous = false;
        rep.kind = homogeneous ? AttractorKind::homogeneous_oscillation
                               : AttractorKind::inhomogeneous_oscillation;
        if (!homogeneous) {
            // dominant is 0 but a spatial mode is not negligible
            int worst = 1;
            for (int n = 2; n <= n_max; ++n)
                if (rep.amplitude[std::size_t(n)] > rep.amplitude[std::size_t(worst)]) worst = n;
            rep.note = "mode 0 dominant but mode " + std::to_string(worst) + " above the dominance ratio";
        }
    } else {
        rep.kind = AttractorKind::inhomogeneous_oscillation;
    }
    return rep;
}

std::vector<double> log_grid(double lo, double hi, int points) {
    if (!(lo > 0 && hi > lo) || points < 2) throw std::invalid_argument("log grid needs 0 < lo < hi and at least 2 points");
    std::vector<double> v(static_cast<std::size_t>(points));
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < points; ++i)
        v[std::size_t(i)] = std::exp(a + (b - a) * double(i) / double(points - 1));
    return v;
}

SweepResult sweep_d2(const ModelParams& base, const std::vector<double>& d2_values, int n_track) {
    require_valid(base);
    if (!equilibria(base).E2) throw precondition_error("no endemic equilibrium (R0 <= 1)");
    SweepResult out;
    auto eval = [&](double d2) {
        ModelParams p = base;
        p.d2 = d2;
        SweepPoint pt;
        pt.d2 = d2;
        const auto cut = mode_cutoff(p);
        pt.omega0.resize(std::size_t(n_track));
        for (int n = 0; n < n_track; ++n)
            if (n <= cut.n1) pt.omega0[std::size_t(n)] = critical_delays(p, n, 0).omegas[0];
        const auto fh = first_hopf(p);
        pt.n0 = fh.n0;
        pt.omega_star = fh.omega_star;
        return pt;
    };
    for (double d2 : d2_values) out.points.push_back(eval(d2));

    auto n0_at = [&](double d2) {
        ModelParams p = base;
        p.d2 = d2;
        return first_hopf(p).n0;
    };
    for (std::size_t i = 1; i < out.points.size(); ++i) {
        if (out.points[i - 1].n0 == out.points[i].n0) continue;
        double lo = out.points[i - 1].d2, hi = out.points[i].d2;
        int nlo = out.points[i - 1].n0;
        // bisect the first transition inside (lo, hi) to 2% relative width
        while ((hi - lo) > 0.02 * 0.5 * (hi + lo)) {
            const double mid = std::sqrt(lo * hi);
            if (n0_at(mid) == nlo)
                lo = mid;
            else
                hi = mid;
        }
        out.boundaries.push_back({lo, hi, nlo, n0_at(hi)});
    }
    return out;
}

VerificationReport verify_prediction(const ModelParams& p, double margin, SimConfig sim) {
    require_valid(p);
    if (!equilibria(p).E2) throw precondition_error("no endemic equilibrium (R0 <= 1)");
    VerificationReport rep;
    rep.prediction = hopf_properties(p);
    const double omega_star = rep.prediction.hopf.omega_star;
    const int n0 = rep.prediction.hopf.n0;

    if (margin <= 0) {
        rep.conclusive = false;
        rep.checks.push_back({"margin", false, "margin 0: at criticality, dynamics undefined - inconclusive"});
        return rep;
    }
    rep.omega_below = omega_star * (1.0 - margin);
    rep.omega_above = omega_star * (1.0 + margin);

    if (sim.t_end <= 0) {
        const double growth = rep.prediction.lambda_prime_.real() * (rep.omega_above - omega_star);
        sim.t_end = std::clamp(16.0 / growth, 400.0, 6000.0);
    }
    const auto eq = equilibria(p);
    const auto [S_star, I_star, y_star] = *eq.E2;
    const bool no_offsets = sim.initial[0].offset == 0 && sim.initial[1].offset == 0 &&
                            sim.initial[2].offset == 0;
    if (no_offsets) {
        sim.initial[0].offset = S_star;
        sim.initial[1].offset = I_star;
        sim.initial[2].offset = y_star;
    }
    const bool no_perturbation = sim.initial[0].amplitude == 0 &&
                                 sim.initial[1].amplitude == 0 && sim.initial[2].amplitude == 0;
    if (no_perturbation) {
        const double k = double(n0) / p.l; // seed the predicted critical wavenumber
        sim.initial[0].amplitude = 0.01;
        sim.initial[1].amplitude = -0.06;
        sim.initial[2].amplitude = -0.05;
        for (auto& profile : sim.initial) profile.wavenumber = k;
    }

    ModelParams below = p, above = p;
    below.omega = rep.omega_below;
    above.omega = rep.omega_above;
    ClassifyOptions opt;
    opt.n_max = std::max(opt.n_max, 2 * n0 + 2);
    rep.below = classify_attractor(run_simulation(below, sim), opt);
    rep.above = classify_attractor(run_simulation(above, sim), opt);

    auto check = [&](const std::string& name, bool ok, const std::string& detail) {
        rep.checks.push_back({name, ok, detail});
    };
    {
        std::ostringstream d;
        d << "kind below omega*: expected equilibrium";
        check("below_equilibrium", rep.below.kind == AttractorKind::equilibrium, d.str());
    }
    const bool oscillating = rep.above.kind == AttractorKind::homogeneous_oscillation ||
                             rep.above.kind == AttractorKind::inhomogeneous_oscillation;
    check("above_oscillation", oscillating, "kind above omega*: expected oscillation");
    {
        std::ostringstream d;
        d << "dominant mode " << rep.above.dominant_mode << ", predicted n0 = " << n0;
        check("dominant_mode", oscillating && rep.above.dominant_mode == n0, d.str());
    }
    {
        const double predicted = rep.prediction.predicted_period;
        const double rel = std::abs(rep.above.period - predicted) / predicted;
        std::ostringstream d;
        d << "measured period " << rep.above.period << " vs 2*pi/z* = " << predicted
          << " (rel err " << rel << ")";
        check("period", oscillating && std::isfinite(rep.above.period) && rel < 0.05, d.str());
    }
    rep.conclusive = rep.below.kind != AttractorKind::inconclusive &&
                     rep.above.kind != AttractorKind::inconclusive;
    rep.all_pass = rep.conclusive;
    for (const auto& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
    return rep;
}

} // namespace sisdde
