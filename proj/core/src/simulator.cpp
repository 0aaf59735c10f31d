#include "sisdde/simulator.hpp"

#include "sisdde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace sisdde {

namespace {

constexpr double kNegativityTol = 1e-10;

struct Fields {
    std::vector<double> S, I, y;
};

// Snapshot ring buffer at step resolution; index 0 holds the initial data,
// which also serves as the constant history for t <= 0.
class History {
public:
    History(std::size_t capacity, const Fields& initial)
        : capacity_(capacity), initial_(initial) {
        buf_.resize(capacity_);
        buf_[0] = initial;
        latest_step_ = 0;
    }

    void push(std::int64_t step, const Fields& f) {
        buf_[std::size_t(step % std::int64_t(capacity_))] = f;
        latest_step_ = step;
    }

    const Fields& at_step(std::int64_t step) const {
        if (step <= 0) return initial_;
        return buf_[std::size_t(step % std::int64_t(capacity_))];
    }

    // Linear interpolation between the two bracketing snapshots.
    void sample(double t_query, double dt, std::vector<double>& outS,
                std::vector<double>& outY) const {
        if (t_query <= 0) {
            outS = initial_.S;
            outY = initial_.y;
            return;
        }
        const double k = t_query / dt;
        std::int64_t k0 = std::int64_t(std::floor(k));
        double frac = k - double(k0);
        if (k0 >= latest_step_) {
            k0 = latest_step_;
            frac = 0.0;
        }
        const Fields& a = at_step(k0);
        const Fields& b = at_step(std::min(k0 + 1, latest_step_));
        const std::size_t n = a.S.size();
        outS.resize(n);
        outY.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            outS[i] = a.S[i] + frac * (b.S[i] - a.S[i]);
            outY[i] = a.y[i] + frac * (b.y[i] - a.y[i]);
        }
    }

private:
    std::size_t capacity_;
    Fields initial_;
    std::vector<Fields> buf_;
    std::int64_t latest_step_ = 0;
};

// Tridiagonal Crank-Nicolson half step for one field:
// (I - r L) u+ = (I + r L) u with r = d*dt/4 and L the reflected Laplacian.
class CrankNicolsonHalf {
public:
    CrankNicolsonHalf(std::size_t n, double diffusion, double dt, double dx)
        : n_(n), r_(diffusion * dt / (4.0 * dx * dx)) {
        cp_.resize(n_);
        dp_.resize(n_);
        rhs_.resize(n_);
    }

    void apply(std::vector<double>& u) {
        const double r = r_;
        rhs_[0] = u[0] + 2.0 * r * (u[1] - u[0]);
        for (std::size_t i = 1; i + 1 < n_; ++i)
            rhs_[i] = u[i] + r * (u[i + 1] - 2.0 * u[i] + u[i - 1]);
        rhs_[n_ - 1] = u[n_ - 1] + 2.0 * r * (u[n_ - 2] - u[n_ - 1]);

        // Thomas with boundary rows (1+2r, -2r) and (-2r, 1+2r)
        const double diag = 1.0 + 2.0 * r;
        cp_[0] = -2.0 * r / diag;
        dp_[0] = rhs_[0] / diag;
        for (std::size_t i = 1; i < n_; ++i) {
            const double lower = (i + 1 == n_) ? -2.0 * r : -r;
            const double upper = -r;
            const double m = diag - lower * cp_[i - 1];
            cp_[i] = upper / m;
            dp_[i] = (rhs_[i] - lower * dp_[i - 1]) / m;
        }
        u[n_ - 1] = dp_[n_ - 1];
        for (std::size_t i = n_ - 1; i-- > 0;) u[i] = dp_[i] - cp_[i] * u[i + 1];
    }

private:
    std::size_t n_;
    double r_;
    std::vector<double> cp_, dp_, rhs_;
};

// I and y preserve nonnegativity under the model (I' = I*(...), y' >= 0 at y = 0),
// so negative values there signal a scheme/step-size problem. S does not: at
// S = 0, dS/dt = alpha*y - alpha*e^{-d tau}*y(t-tau) + gamma*I can be negative,
// and saturated large-amplitude cycles genuinely dip below zero. S excursions
// are therefore kept and reported via Trajectory::min_S.
void check_finite_and_clamp(Fields& f, double t, double& min_S) {
    auto bail = [&](const char* what, double v) {
        std::ostringstream os;
        os << what << " at t = " << t << " (value " << v << ")";
        throw numeric_error(os.str());
    };
    for (double& v : f.S) {
        if (!std::isfinite(v)) bail("integration blew up (non-finite value)", v);
        if (v < 0 && v > -kNegativityTol) v = 0.0;
        min_S = std::min(min_S, v);
    }
    for (auto* field : {&f.I, &f.y}) {
        for (double& v : *field) {
            if (!std::isfinite(v)) bail("integration blew up (non-finite value)", v);
            if (v < 0) {
                if (v < -kNegativityTol)
                    bail("negative excursion below tolerance; reduce dt or check the scheme", v);
                v = 0.0;
            }
        }
    }
}

} // namespace

void laplacian_neumann(std::span<const double> u, double dx, std::span<double> out) {
    const std::size_t n = u.size();
    if (n < 3) throw std::invalid_argument("laplacian_neumann: need at least 3 nodes");
    const double inv = 1.0 / (dx * dx);
    out[0] = 2.0 * (u[1] - u[0]) * inv;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv;
    out[n - 1] = 2.0 * (u[n - 2] - u[n - 1]) * inv;
}

double explicit_stability_bound(const ModelParams& p, double dx) {
    return dx * dx / (2.0 * std::max({p.d1, p.d2, p.d3}));
}

Trajectory run_simulation(const ModelParams& p, const SimConfig& cfg) {
    require_valid(p);
    if (cfg.grid_points < 16) throw std::invalid_argument("grid_points must be >= 16");
    if (cfg.t_end <= 0) throw std::invalid_argument("t_end must be positive");
    if (cfg.record_every < 1) throw std::invalid_argument("record_every must be >= 1");

    const std::size_t N = std::size_t(cfg.grid_points);
    const double dx = p.domain_length() / double(cfg.grid_points - 1);
    const double bound = explicit_stability_bound(p, dx);

    double dt = cfg.dt;
    if (dt <= 0) dt = (cfg.scheme == Scheme::explicit_rk2) ? 0.9 * bound : std::min(0.005, p.tau / 10.0);
    if (cfg.scheme == Scheme::explicit_rk2 && dt > bound) {
        std::ostringstream os;
        os << "dt = " << dt << " violates the explicit stability bound dx^2/(2 max d) = " << bound;
        throw numeric_error(os.str());
    }
    if (dt > p.tau) throw std::invalid_argument("dt must not exceed tau");
    if (p.omega > 0 && dt > p.omega)
        throw std::invalid_argument("dt must not exceed omega when omega > 0");

    Fields u;
    u.S.resize(N);
    u.I.resize(N);
    u.y.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double x = double(i) * dx;
        u.S[i] = cfg.initial[0].offset + cfg.initial[0].amplitude * std::cos(cfg.initial[0].wavenumber * x);
        u.I[i] = cfg.initial[1].offset + cfg.initial[1].amplitude * std::cos(cfg.initial[1].wavenumber * x);
        u.y[i] = cfg.initial[2].offset + cfg.initial[2].amplitude * std::cos(cfg.initial[2].wavenumber * x);
    }
    double min_S = 0.0;
    check_finite_and_clamp(u, 0.0, min_S);

    const std::int64_t steps = std::int64_t(std::ceil(cfg.t_end / dt - 1e-12));
    const std::size_t hist_cap = std::size_t(std::ceil(p.tau / dt)) + 3;
    History hist(hist_cap, u);

    Trajectory traj;
    traj.params = p;
    traj.config = cfg;
    traj.config.dt = dt;
    traj.grid_points = cfg.grid_points;
    traj.dx = dx;
    auto record = [&](double t, const Fields& f) {
        traj.times.push_back(t);
        traj.S.push_back(f.S);
        traj.I.push_back(f.I);
        traj.y.push_back(f.y);
    };
    record(0.0, u);

    CrankNicolsonHalf cnS(N, p.d1, dt, dx), cnI(N, p.d2, dt, dx), cnY(N, p.d3, dt, dx);

    std::vector<double> sDel(N), yDel(N), sDel2(N), yDel2(N);
    std::vector<double> lapS(N), lapI(N), lapY(N);
    Fields stage;
    stage.S.resize(N);
    stage.I.resize(N);
    stage.y.resize(N);
    Fields k1 = stage, k2 = stage;

    const double ae = p.alpha * p.survival();
    auto reaction_into = [&](const Fields& f, const std::vector<double>& Sdel,
                             const std::vector<double>& Ydel, Fields& out) {
        for (std::size_t i = 0; i < N; ++i) {
            const double S = f.S[i], I = f.I[i], y = f.y[i];
            out.S[i] = p.alpha * y - p.d * S - ae * Ydel[i] - p.mu * Sdel[i] * I + p.gamma * I;
            out.I[i] = p.mu * Sdel[i] * I - p.d * I - p.gamma * I;
            out.y[i] = ae * Ydel[i] - p.beta * y * y;
        }
    };

    for (std::int64_t step = 0; step < steps; ++step) {
        const double t = double(step) * dt;

        if (cfg.scheme == Scheme::semi_implicit) {
            cnS.apply(u.S);
            cnI.apply(u.I);
            cnY.apply(u.y);
        }

        hist.sample(t - p.omega, dt, sDel, yDel);
        hist.sample(t - p.tau, dt, sDel2, yDel2);
        // delayed S from the omega sample, delayed y from the tau sample
        const std::vector<double>* Som = p.omega == 0 ? &u.S : &sDel;
        reaction_into(u, *Som, yDel2, k1);
        if (cfg.scheme == Scheme::explicit_rk2) {
            laplacian_neumann(u.S, dx, lapS);
            laplacian_neumann(u.I, dx, lapI);
            laplacian_neumann(u.y, dx, lapY);
            for (std::size_t i = 0; i < N; ++i) {
                k1.S[i] += p.d1 * lapS[i];
                k1.I[i] += p.d2 * lapI[i];
                k1.y[i] += p.d3 * lapY[i];
            }
        }
        for (std::size_t i = 0; i < N; ++i) {
            stage.S[i] = u.S[i] + dt * k1.S[i];
            stage.I[i] = u.I[i] + dt * k1.I[i];
            stage.y[i] = u.y[i] + dt * k1.y[i];
        }

        hist.sample(t + dt - p.omega, dt, sDel, yDel);
        hist.sample(t + dt - p.tau, dt, sDel2, yDel2);
        const std::vector<double>* Som2 = p.omega == 0 ? &stage.S : &sDel;
        reaction_into(stage, *Som2, yDel2, k2);
        if (cfg.scheme == Scheme::explicit_rk2) {
            laplacian_neumann(stage.S, dx, lapS);
            laplacian_neumann(stage.I, dx, lapI);
            laplacian_neumann(stage.y, dx, lapY);
            for (std::size_t i = 0; i < N; ++i) {
                k2.S[i] += p.d1 * lapS[i];
                k2.I[i] += p.d2 * lapI[i];
                k2.y[i] += p.d3 * lapY[i];
            }
        }
        for (std::size_t i = 0; i < N; ++i) {
            u.S[i] += 0.5 * dt * (k1.S[i] + k2.S[i]);
            u.I[i] += 0.5 * dt * (k1.I[i] + k2.I[i]);
            u.y[i] += 0.5 * dt * (k1.y[i] + k2.y[i]);
        }

        if (cfg.scheme == Scheme::semi_implicit) {
            cnS.apply(u.S);
            cnI.apply(u.I);
            cnY.apply(u.y);
        }

        const double t_next = double(step + 1) * dt;
        check_finite_and_clamp(u, t_next, min_S);
        hist.push(step + 1, u);
        if ((step + 1) % cfg.record_every == 0 || step + 1 == steps) record(t_next, u);
    }
    traj.min_S = min_S;
    return traj;
}

void write_trajectory_csv(const Trajectory& t, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::invalid_argument("cannot open for writing: " + path);
    f << "t,x,S,I,y\n";
    f.precision(17);
    for (std::size_t j = 0; j < t.times.size(); ++j)
        for (int i = 0; i < t.grid_points; ++i)
            f << t.times[j] << ',' << double(i) * t.dx << ',' << t.S[j][std::size_t(i)] << ','
              << t.I[j][std::size_t(i)] << ',' << t.y[j][std::size_t(i)] << '\n';
}

namespace {
constexpr char kMagic[4] = {'S', 'D', 'D', 'E'};
constexpr std::uint32_t kBinaryVersion = 1;
} // namespace

void write_trajectory_binary(const Trajectory& t, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open for writing: " + path);
    f.write(kMagic, 4);
    const std::uint32_t version = kBinaryVersion;
    const std::uint32_t n = std::uint32_t(t.grid_points);
    const std::uint32_t count = std::uint32_t(t.times.size());
    f.write(reinterpret_cast<const char*>(&version), 4);
    f.write(reinterpret_cast<const char*>(&n), 4);
    f.write(reinterpret_cast<const char*>(&count), 4);
    for (std::size_t j = 0; j < t.times.size(); ++j) {
        f.write(reinterpret_cast<const char*>(&t.times[j]), 8);
        f.write(reinterpret_cast<const char*>(t.S[j].data()), std::streamsize(8 * n));
        f.write(reinterpret_cast<const char*>(t.I[j].data()), std::streamsize(8 * n));
        f.write(reinterpret_cast<const char*>(t.y[j].data()), std::streamsize(8 * n));
    }
}

Trajectory read_trajectory_binary(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open: " + path);
    char magic[4];
    std::uint32_t version = 0, n = 0, count = 0;
    f.read(magic, 4);
    f.read(reinterpret_cast<char*>(&version), 4);
    f.read(reinterpret_cast<char*>(&n), 4);
    f.read(reinterpret_cast<char*>(&count), 4);
    if (!f || std::memcmp(magic, kMagic, 4) != 0)
        throw std::invalid_argument("not a trajectory snapshot file: " + path);
    if (version != kBinaryVersion)
        throw std::invalid_argument("unsupported snapshot version in " + path);
    Trajectory t;
    t.grid_points = int(n);
    t.times.resize(count);
    t.S.assign(count, std::vector<double>(n));
    t.I.assign(count, std::vector<double>(n));
    t.y.assign(count, std::vector<double>(n));
    for (std::uint32_t j = 0; j < count; ++j) {
        f.read(reinterpret_cast<char*>(&t.times[j]), 8);
        f.read(reinterpret_cast<char*>(t.S[j].data()), std::streamsize(8 * n));
        f.read(reinterpret_cast<char*>(t.I[j].data()), std::streamsize(8 * n));
        f.read(reinterpret_cast<char*>(t.y[j].data()), std::streamsize(8 * n));
    }
    if (!f) throw std::invalid_argument("truncated snapshot file: " + path);
    return t;
}

} // namespace sisdde
