#include <sisdde/errors.hpp>
#include <sisdde/simulator.hpp>

#include "support/oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

using namespace sisdde;
using Catch::Matchers::WithinAbs;

namespace {

ModelParams endemic(double d2 = 0.2, double omega = 0.3) {
    return {2.1, 0.5, 0.5, 0.1, 0.3, 1.0, omega, 0.05, d2, 0.06, 3.0};
}

SimConfig config_at_equilibrium(const ModelParams& p, int n, double dt, double t_end) {
    const auto eq = equilibria(p);
    const State base = eq.E2 ? *eq.E2 : eq.E1;
    SimConfig cfg;
    cfg.grid_points = n;
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.record_every = 20;
    cfg.initial = {{{base[0], 0, 0}, {base[1], 0, 0}, {base[2], 0, 0}}};
    return cfg;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("laplacian of a constant field is zero") {
    std::vector<double> u(64, 3.7), out(64);
    laplacian_neumann(u, 0.1, out);
    for (double v : out) CHECK_THAT(v, WithinAbs(0.0, 1e-12));
}

TEST_CASE("laplacian eigenfunction and convergence order") {
    const double l = 3.0;
    const int n = 2;
    auto run = [&](int N) {
        const double dx = l * M_PI / (N - 1);
        std::vector<double> u(static_cast<std::size_t>(N)), out(static_cast<std::size_t>(N));
        for (int i = 0; i < N; ++i) u[std::size_t(i)] = std::cos(n / l * i * dx);
        laplacian_neumann(u, dx, out);
        double err = 0;
        const double k2 = (n / l) * (n / l);
        for (int i = 0; i < N; ++i)
            err = std::max(err, std::abs(out[std::size_t(i)] + k2 * u[std::size_t(i)]));
        return err;
    };
    const double e1 = run(101), e2 = run(201);
    CHECK(oracles::observed_order(e1, e2) >= 1.8);
}

TEST_CASE("laplacian is weighted-symmetric, negative semidefinite, kills constants") {
    const int N = 24;
    const double dx = 0.2;
    // assemble the matrix column by column
    std::vector<std::vector<double>> M(N, std::vector<double>(N));
    std::vector<double> e(N), out(N);
    for (int j = 0; j < N; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[std::size_t(j)] = 1.0;
        laplacian_neumann(e, dx, out);
        for (int i = 0; i < N; ++i) M[std::size_t(i)][std::size_t(j)] = out[std::size_t(i)];
    }
    // trapezoid weights make it self-adjoint: W M symmetric
    auto w = [N](int i) { return (i == 0 || i == N - 1) ? 0.5 : 1.0; };
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            CHECK_THAT(w(i) * M[std::size_t(i)][std::size_t(j)],
                       WithinAbs(w(j) * M[std::size_t(j)][std::size_t(i)], 1e-12));
    // x^T W M x <= 0 on random vectors, = 0 on constants
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(-1, 1);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> x(N);
        for (auto& v : x) v = uni(rng);
        laplacian_neumann(x, dx, out);
        double q = 0;
        for (int i = 0; i < N; ++i) q += w(i) * x[std::size_t(i)] * out[std::size_t(i)];
        CHECK(q <= 1e-12);
    }
    std::fill(e.begin(), e.end(), 1.0);
    laplacian_neumann(e, dx, out);
    for (double v : out) CHECK_THAT(v, WithinAbs(0.0, 1e-13));
}

TEST_CASE("constant equilibrium history stays put") {
    for (auto scheme : {Scheme::semi_implicit, Scheme::explicit_rk2}) {
        const auto p = endemic();
        auto cfg = config_at_equilibrium(p, 48, 0.004, 50.0);
        cfg.scheme = scheme;
        const auto traj = run_simulation(p, cfg);
        const auto eq = *equilibria(p).E2;
        double worst = 0;
        for (std::size_t j = 0; j < traj.times.size(); ++j) {
            for (int i = 0; i < traj.grid_points; ++i) {
                worst = std::max(worst, std::abs(traj.S[j][std::size_t(i)] - eq[0]));
                worst = std::max(worst, std::abs(traj.I[j][std::size_t(i)] - eq[1]));
                worst = std::max(worst, std::abs(traj.y[j][std::size_t(i)] - eq[2]));
            }
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("y stays at y* whatever S and I do") {
    const auto p = endemic(0.2, 0.52);
    const auto eq = *equilibria(p).E2;
    SimConfig cfg;
    cfg.grid_points = 48;
    cfg.dt = 0.004;
    cfg.t_end = 100.0;
    cfg.record_every = 50;
    cfg.initial = {{{eq[0], 0.2, 1.0}, {eq[1], -0.5, 1.0}, {eq[2], 0, 0}}};
    const auto traj = run_simulation(p, cfg);
    double worst = 0;
    for (const auto& row : traj.y)
        for (double v : row) worst = std::max(worst, std::abs(v - eq[2]));
    CHECK(worst < 1e-6);
}

TEST_CASE("too-coarse grids are rejected") {
    const auto p = endemic();
    SimConfig cfg = config_at_equilibrium(p, 8, 0.004, 1.0);
    CHECK_THROWS_AS(run_simulation(p, cfg), std::invalid_argument);
}

TEST_CASE("explicit scheme rejects a dt above the stability bound") {
    const auto p = endemic();
    SimConfig cfg = config_at_equilibrium(p, 192, 0.01, 10.0);
    cfg.scheme = Scheme::explicit_rk2;
    const double dx = p.domain_length() / (cfg.grid_points - 1);
    REQUIRE(cfg.dt > explicit_stability_bound(p, dx));
    CHECK_THROWS_AS(run_simulation(p, cfg), numeric_error);
}

TEST_CASE("negative initial infected data is rejected with the failing time") {
    const auto p = endemic();
    SimConfig cfg = config_at_equilibrium(p, 48, 0.004, 10.0);
    cfg.initial[1] = {0.001, -0.1, 1.0}; // dips to -0.099
    try {
        run_simulation(p, cfg);
        FAIL("expected numeric_error");
    } catch (const numeric_error& e) {
        CHECK(std::string(e.what()).find("t = 0") != std::string::npos);
    }
}

TEST_CASE("schemes agree to plotting accuracy") {
    const auto p = endemic(0.2, 0.541);
    SimConfig a = config_at_equilibrium(p, 64, 0.02, 30.0);
    a.initial[1].amplitude = -0.06;
    a.initial[1].wavenumber = 1.0;
    a.scheme = Scheme::semi_implicit;
    SimConfig b = a;
    b.scheme = Scheme::explicit_rk2;
    const auto ta = run_simulation(p, a), tb = run_simulation(p, b);
    REQUIRE(ta.times == tb.times);
    double worst = 0;
    for (std::size_t j = 0; j < ta.times.size(); ++j) {
        worst = std::max(worst, sup_diff(ta.I[j], tb.I[j]));
        worst = std::max(worst, sup_diff(ta.S[j], tb.S[j]));
    }
    CHECK(worst < 1e-3);
}

TEST_CASE("time-step refinement converges at second order") {
    // omega and tau are exact multiples of every dt below, so the delay-induced
    // derivative kinks sit on grid points at all resolutions
    const auto p = endemic(0.2, 0.5);
    auto run = [&](double dt) {
        SimConfig cfg = config_at_equilibrium(p, 48, dt, 4.0);
        cfg.initial[1].amplitude = -0.06;
        cfg.initial[1].wavenumber = 1.0;
        cfg.record_every = 1 << 20; // final state only
        return run_simulation(p, cfg).I.back();
    };
    const auto ref = run(0.000625);
    const double e1 = sup_diff(run(0.01), ref);
    const double e2 = sup_diff(run(0.005), ref);
    CHECK(oracles::observed_order(e1, e2) >= 1.8);
}

TEST_CASE("grid refinement converges at second order") {
    const auto p = endemic(0.2, 0.541);
    auto run = [&](int N) {
        SimConfig cfg = config_at_equilibrium(p, N, 0.002, 4.0);
        cfg.initial[1].amplitude = -0.06;
        cfg.initial[1].wavenumber = 1.0;
        cfg.record_every = 1 << 20;
        return run_simulation(p, cfg).I.back();
    };
    const auto a = run(25), b = run(49), c = run(97);
    // compare on shared nodes (every second / fourth point)
    double e1 = 0, e2 = 0;
    for (int i = 0; i < 25; ++i) e1 = std::max(e1, std::abs(a[std::size_t(i)] - b[std::size_t(2 * i)]));
    for (int i = 0; i < 49; ++i) e2 = std::max(e2, std::abs(b[std::size_t(i)] - c[std::size_t(2 * i)]));
    CHECK(oracles::observed_order(e1, e2) >= 1.8);
}

TEST_CASE("trajectory binary round trip") {
    const auto p = endemic();
    SimConfig cfg = config_at_equilibrium(p, 32, 0.01, 1.0);
    cfg.initial[0].amplitude = 0.01;
    cfg.initial[0].wavenumber = 1.0;
    cfg.record_every = 10;
    const auto traj = run_simulation(p, cfg);
    const auto path = std::filesystem::temp_directory_path() / "sisdde_traj_test.bin";
    write_trajectory_binary(traj, path.string());
    const auto back = read_trajectory_binary(path.string());
    REQUIRE(back.grid_points == traj.grid_points);
    REQUIRE(back.times.size() == traj.times.size());
    for (std::size_t j = 0; j < traj.times.size(); ++j) {
        CHECK(back.times[j] == traj.times[j]);
        CHECK(back.S[j] == traj.S[j]);
        CHECK(back.I[j] == traj.I[j]);
        CHECK(back.y[j] == traj.y[j]);
    }
    std::filesystem::remove(path);
}

TEST_CASE("csv export carries the documented header") {
    const auto p = endemic();
    SimConfig cfg = config_at_equilibrium(p, 32, 0.01, 0.5);
    const auto traj = run_simulation(p, cfg);
    const auto path = std::filesystem::temp_directory_path() / "sisdde_traj_test.csv";
    write_trajectory_csv(traj, path.string());
    std::FILE* f = std::fopen(path.string().c_str(), "r");
    REQUIRE(f != nullptr);
    char line[64];
    REQUIRE(std::fgets(line, sizeof line, f) != nullptr);
    std::fclose(f);
    CHECK(std::string(line) == "t,x,S,I,y\n");
    std::filesystem::remove(path);
}
