#include <sisdde/analysis.hpp>
#include <sisdde/config.hpp>
#include <sisdde/errors.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace sisdde;
using Catch::Matchers::WithinAbs;

namespace {

ModelParams endemic(double d2 = 0.2, double omega = 0.3) {
    return {2.1, 0.5, 0.5, 0.1, 0.3, 1.0, omega, 0.05, d2, 0.06, 3.0};
}

// hand-built trajectory: I(x, t) = base + amp * cos(t * 2 pi / period) * profile(x)
Trajectory synthetic(int N, double l, double t_end, double dt_rec, double base, double amp,
                     int mode, double period) {
    Trajectory t;
    t.params = endemic();
    t.params.l = l;
    t.grid_points = N;
    t.dx = l * M_PI / (N - 1);
    for (double tt = 0; tt <= t_end + 1e-9; tt += dt_rec) {
        t.times.push_back(tt);
        std::vector<double> row(static_cast<std::size_t>(N));
        for (int i = 0; i < N; ++i) {
            const double profile = mode == 0 ? 1.0 : std::cos(mode / l * i * t.dx);
            row[std::size_t(i)] = base + amp * std::cos(2 * M_PI * tt / period) * profile;
        }
        t.I.push_back(row);
        t.S.push_back(std::vector<double>(std::size_t(N), 1.2));
        t.y.push_back(std::vector<double>(std::size_t(N), 4.2));
    }
    return t;
}

} // namespace

TEST_CASE("projection of a constant field") {
    const auto t = synthetic(96, 3.0, 10.0, 0.5, 5.8, 0.0, 0, 1.0);
    const auto sp = project_modes(t, Component::I, 6);
    const double lpi = 3.0 * M_PI;
    for (std::size_t j = 0; j < sp.times.size(); ++j) {
        CHECK_THAT(sp.coeffs[j][0], WithinAbs(5.8 * std::sqrt(lpi), 1e-10));
        for (int n = 1; n <= 6; ++n) CHECK_THAT(sp.coeffs[j][std::size_t(n)], WithinAbs(0.0, 1e-10));
    }
}

TEST_CASE("projection of an exactly sampled basis mode") {
    Trajectory t = synthetic(96, 3.0, 0.0, 1.0, 0.0, 1.0, 2, 1.0);
    // overwrite with normalized b_2 itself
    const double lpi = 3.0 * M_PI;
    for (int i = 0; i < t.grid_points; ++i)
        t.I[0][std::size_t(i)] = std::sqrt(2.0 / lpi) * std::cos(2.0 / 3.0 * i * t.dx);
    const auto sp = project_modes(t, Component::I, 6);
    CHECK_THAT(sp.coeffs[0][2], WithinAbs(1.0, 1e-6));
    for (int n : {1, 3, 4, 5, 6}) CHECK_THAT(sp.coeffs[0][std::size_t(n)], WithinAbs(0.0, 1e-6));
}

TEST_CASE("projection rejects aliasing-prone n_max") {
    const auto t = synthetic(64, 3.0, 1.0, 0.5, 5.8, 0.0, 0, 1.0);
    CHECK_THROWS_AS(project_modes(t, Component::I, 17), std::invalid_argument);
}

TEST_CASE("Parseval inequality on a random smooth field") {
    Trajectory t = synthetic(128, 3.0, 0.0, 1.0, 0.0, 0.0, 0, 1.0);
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> uni(-1, 1);
    for (int n = 0; n <= 8; ++n) {
        const double c = uni(rng);
        for (int i = 0; i < t.grid_points; ++i)
            t.I[0][std::size_t(i)] += c * std::cos(n / 3.0 * i * t.dx);
    }
    const auto sp = project_modes(t, Component::I, 16);
    double sum_sq = 0;
    for (double a : sp.coeffs[0]) sum_sq += a * a;
    // discrete norm via trapezoid
    double norm_sq = 0;
    for (int i = 0; i < t.grid_points; ++i) {
        const double w = (i == 0 || i == t.grid_points - 1) ? 0.5 : 1.0;
        norm_sq += w * t.I[0][std::size_t(i)] * t.I[0][std::size_t(i)] * t.dx;
    }
    CHECK(sum_sq <= norm_sq + 1e-9);
}

TEST_CASE("classification of synthetic attractors") {
    // equilibrium: tiny residual ripple far below threshold
    const auto eq = classify_attractor(synthetic(96, 3.0, 100.0, 0.25, 5.8, 1e-9, 0, 2.0));
    CHECK(eq.kind == AttractorKind::equilibrium);

    // homogeneous oscillation, period 2.16
    const auto hom = classify_attractor(synthetic(96, 3.0, 100.0, 0.25, 5.8, 0.8, 0, 2.16));
    CHECK(hom.kind == AttractorKind::homogeneous_oscillation);
    CHECK(hom.dominant_mode == 0);
    CHECK_THAT(hom.period, WithinAbs(2.16, 0.01));

    // inhomogeneous mode 3
    const auto inh = classify_attractor(synthetic(96, 3.0, 100.0, 0.25, 5.8, 0.8, 3, 2.12));
    CHECK(inh.kind == AttractorKind::inhomogeneous_oscillation);
    CHECK(inh.dominant_mode == 3);
    CHECK_THAT(inh.period, WithinAbs(2.12, 0.01));

    // too short a window: fewer than three cycles
    const auto shrt = classify_attractor(synthetic(96, 3.0, 10.0, 0.25, 5.8, 0.8, 0, 2.16));
    CHECK(shrt.kind == AttractorKind::inconclusive);
}

TEST_CASE("classification is stable under subsampling by two") {
    const auto full = synthetic(96, 3.0, 120.0, 0.25, 5.8, 0.7, 2, 2.06);
    Trajectory half = full;
    half.times.clear();
    half.S.clear();
    half.I.clear();
    half.y.clear();
    for (std::size_t j = 0; j < full.times.size(); j += 2) {
        half.times.push_back(full.times[j]);
        half.S.push_back(full.S[j]);
        half.I.push_back(full.I[j]);
        half.y.push_back(full.y[j]);
    }
    const auto a = classify_attractor(full);
    const auto b = classify_attractor(half);
    CHECK(a.kind == b.kind);
    CHECK(a.dominant_mode == b.dominant_mode);
    CHECK_THAT(a.period, Catch::Matchers::WithinRel(b.period, 0.01));
}

TEST_CASE("single-point sweep equals the direct first Hopf computation") {
    const auto base = endemic(1.0, 0.5);
    const auto sweep = sweep_d2(base, {2.5});
    REQUIRE(sweep.points.size() == 1);
    ModelParams p = base;
    p.d2 = 2.5;
    const auto fh = first_hopf(p);
    CHECK(sweep.points[0].n0 == fh.n0);
    CHECK_THAT(sweep.points[0].omega_star, WithinAbs(fh.omega_star, 1e-14));
    REQUIRE(sweep.points[0].omega0[2].has_value());
    CHECK_THAT(*sweep.points[0].omega0[2], WithinAbs(0.5265, 1e-3));
}

TEST_CASE("sweep reproduces the published n0 sequence and boundaries") {
    const auto base = endemic(1.0, 0.5);
    const auto sweep = sweep_d2(base, {0.2, 0.4, 2.5, 5.5, 40.0});
    const int expected[] = {0, 3, 2, 1, 0};
    for (std::size_t i = 0; i < sweep.points.size(); ++i) CHECK(sweep.points[i].n0 == expected[i]);

    // coarse grid spanning the first transition out of n0 = 0
    const auto fine = sweep_d2(base, log_grid(0.1, 1.0, 12));
    bool found = false;
    for (const auto& b : fine.boundaries) {
        if (b.n0_before == 0) {
            found = true;
            CHECK((b.d2_high - b.d2_low) <= 0.02 * 0.5 * (b.d2_high + b.d2_low) * 1.001);
            // first transition out of the homogeneous regime sits near d2 ~ 0.27
            CHECK(b.d2_low > 0.2);
            CHECK(b.d2_high < 0.33);
        }
    }
    CHECK(found);
}

TEST_CASE("verification report at margin zero is inconclusive") {
    const auto rep = verify_prediction(endemic(0.2, 0.5), 0.0);
    CHECK_FALSE(rep.conclusive);
}

TEST_CASE("verification requires the endemic equilibrium") {
    ModelParams sub = endemic();
    sub.alpha = 0.85;
    CHECK_THROWS_AS(verify_prediction(sub, 0.02), precondition_error);
}

TEST_CASE("verification passes on the homogeneous branch") {
    // build the sim settings the way the command line does: equilibrium offsets,
    // no explicit perturbation (verify must seed one itself)
    const auto p = endemic(0.2, 0.5);
    const auto cfg = parse_config("alpha = 2.1\nd = 0.5\nmu = 0.5\ngamma = 0.1\nbeta = 0.3\n"
                                  "tau = 1\nomega = 0.5\nd1 = 0.05\nd2 = 0.2\nd3 = 0.06\n"
                                  "l = 3\ngrid_points = 64\nrecord_every = 40\n");
    SimConfig sim = sim_from_config(cfg, p);
    sim.t_end = 0; // derive from the growth rate
    const auto rep = verify_prediction(p, 0.03, sim);
    REQUIRE(rep.conclusive);
    for (const auto& c : rep.checks) {
        INFO(c.name << ": " << c.detail);
        CHECK(c.pass);
    }
    CHECK(rep.all_pass);
}
