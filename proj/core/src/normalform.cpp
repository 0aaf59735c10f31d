#include "sisdde/normalform.hpp"

#include "sisdde/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace sisdde {

namespace {

constexpr Complex kI{0.0, 1.0};

CVec3 mat_vec(const Mat3& m, const CVec3& v) {
    CVec3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[std::size_t(i)] += m[std::size_t(i)][std::size_t(j)] * v[std::size_t(j)];
    return r;
}

Complex dot(const CVec3& row, const CVec3& col) {
    return row[0] * col[0] + row[1] * col[1] + row[2] * col[2];
}

CVec3 conj(const CVec3& v) { return {std::conj(v[0]), std::conj(v[1]), std::conj(v[2])}; }

// int_{-h}^{0} e^{s xi} d xi
Complex exp_integral(Complex s, double h) {
    if (std::abs(s) < 1e-14) return h;
    return (1.0 - std::exp(-s * h)) / s;
}

struct BasisWeights {
    double gamma;                               // self-overlap of b_{n0} entering the g-formulas
    std::vector<std::pair<int, double>> modes;  // (n, overlap of b_n with b_{n0}^2)
};

// Homogeneous mode: reduction w.r.t. the constant basis 1 (all overlaps 1).
// Inhomogeneous modes: L2-normalized cosine basis; b_{n0}^2 projects onto
// b_0 and b_{2 n0} with weights 1/sqrt(l pi) and 1/sqrt(2 l pi).
BasisWeights basis_weights(int n0, double l) {
    const double lpi = l * M_PI;
    if (n0 == 0) return {1.0, {{0, 1.0}}};
    return {0.0, {{0, 1.0 / std::sqrt(lpi)}, {2 * n0, 1.0 / std::sqrt(2.0 * lpi)}}};
}

CVec3 f_tilde_20(const EigenData& ed, const ModelParams& p) {
    const Complex e = std::exp(-kI * ed.z_star * ed.omega_star);
    return {ed.omega_star * (-0.5 * p.mu * e * ed.xi1),
            ed.omega_star * (0.5 * p.mu * e * ed.xi1),
            ed.omega_star * (-0.5 * p.beta * ed.xi2 * ed.xi2)};
}

CVec3 f_tilde_11(const EigenData& ed, const ModelParams& p) {
    const Complex e = std::exp(-kI * ed.z_star * ed.omega_star);
    const Complex s = e * std::conj(ed.xi1) + std::conj(e) * ed.xi1; // real
    return {ed.omega_star * (-0.25 * p.mu * s),
            ed.omega_star * (0.25 * p.mu * s),
            ed.omega_star * (-0.5 * p.beta * ed.xi2 * std::conj(ed.xi2))};
}

} // namespace

CVec3 Segment::at(double arg) const {
    CVec3 v{};
    for (const auto& t : terms) {
        const Complex e = std::exp(t.rate * arg);
        for (int i = 0; i < 3; ++i) v[std::size_t(i)] += t.coef[std::size_t(i)] * e;
    }
    return v;
}

Segment Segment::scaled(Complex factor) const {
    Segment s = *this;
    for (auto& t : s.terms)
        for (auto& c : t.coef) c *= factor;
    return s;
}

Segment operator+(const Segment& a, const Segment& b) {
    Segment s = a;
    s.terms.insert(s.terms.end(), b.terms.begin(), b.terms.end());
    return s;
}

LinearKernel linear_kernel(const ModelParams& p, int n, double omega_star) {
    const auto eq = equilibria(p);
    if (!eq.E2) throw precondition_error("no endemic equilibrium (R0 <= 1)");
    const auto [S_star, I_star, y_star] = *eq.E2;
    const double ae = p.alpha * p.survival();
    LinearKernel k;
    k.omega_star = omega_star;
    k.tau_star = p.tau / omega_star;
    k.inv_l2 = 1.0 / (p.l * p.l);
    k.k2 = double(n) * double(n) * k.inv_l2;
    k.diffusion = {p.d1, p.d2, p.d3};
    k.B1 = {{{-p.d, -p.mu * S_star + p.gamma, p.alpha},
             {0.0, p.mu * S_star - p.d - p.gamma, 0.0},
             {0.0, 0.0, -2.0 * p.beta * y_star}}};
    k.B2 = {{{-p.mu * I_star, 0.0, 0.0}, {p.mu * I_star, 0.0, 0.0}, {0.0, 0.0, 0.0}}};
    k.B3 = {{{0.0, 0.0, -ae}, {0.0, 0.0, 0.0}, {0.0, 0.0, ae}}};
    return k;
}

CMat3 characteristic_matrix(const LinearKernel& k, Complex lambda) {
    const Complex e1 = std::exp(-lambda);
    const Complex et = std::exp(-lambda * k.tau_star);
    CMat3 m{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const auto si = std::size_t(i), sj = std::size_t(j);
            Complex v = -k.omega_star * (k.B1[si][sj] + k.B2[si][sj] * e1 + k.B3[si][sj] * et);
            if (i == j) v += lambda + k.omega_star * k.diffusion[si] * k.k2;
            m[si][sj] = v;
        }
    }
    return m;
}

Complex bilinear_form(const Segment& psi, const Segment& phi, const LinearKernel& k) {
    if (std::abs(psi.domain - k.tau_star) > 1e-9 * std::max(1.0, k.tau_star) ||
        std::abs(phi.domain - k.tau_star) > 1e-9 * std::max(1.0, k.tau_star))
        throw std::invalid_argument("bilinear_form: segment domains do not match the kernel");
    Complex val = dot(psi.at(0.0), phi.at(0.0));
    for (const auto& a : psi.terms) {
        for (const auto& b : phi.terms) {
            const Complex rb2 = dot(a.coef, mat_vec(k.B2, b.coef));
            const Complex rb3 = dot(a.coef, mat_vec(k.B3, b.coef));
            val += k.omega_star * rb2 * std::exp(a.rate) * exp_integral(a.rate + b.rate, 1.0);
            val += k.omega_star * rb3 * std::exp(a.rate * k.tau_star) *
                   exp_integral(a.rate + b.rate, k.tau_star);
        }
    }
    return val;
}

CVec3 solve3(CMat3 A, CVec3 b) {
    for (int c = 0; c < 3; ++c) {
        int pivot = c;
        double best = std::abs(A[std::size_t(c)][std::size_t(c)]);
        for (int r = c + 1; r < 3; ++r) {
            if (std::abs(A[std::size_t(r)][std::size_t(c)]) > best) {
                best = std::abs(A[std::size_t(r)][std::size_t(c)]);
                pivot = r;
            }
        }
        if (best < 1e-13) throw numeric_error("singular 3x3 system");
        std::swap(A[std::size_t(c)], A[std::size_t(pivot)]);
        std::swap(b[std::size_t(c)], b[std::size_t(pivot)]);
        for (int r = c + 1; r < 3; ++r) {
            const Complex f = A[std::size_t(r)][std::size_t(c)] / A[std::size_t(c)][std::size_t(c)];
            for (int j = c; j < 3; ++j) A[std::size_t(r)][std::size_t(j)] -= f * A[std::size_t(c)][std::size_t(j)];
            b[std::size_t(r)] -= f * b[std::size_t(c)];
        }
    }
    CVec3 x{};
    for (int r = 2; r >= 0; --r) {
        Complex s = b[std::size_t(r)];
        for (int j = r + 1; j < 3; ++j) s -= A[std::size_t(r)][std::size_t(j)] * x[std::size_t(j)];
        x[std::size_t(r)] = s / A[std::size_t(r)][std::size_t(r)];
    }
    return x;
}

EigenData eigen_basis(const ModelParams& p, const FirstHopf& fh) {
    const auto eq = equilibria(p);
    if (!eq.E2) throw precondition_error("no endemic equilibrium (R0 <= 1)");
    if (fh.omega_star >= p.tau)
        throw precondition_error("first Hopf point not reachable: omega* >= tau");
    const auto [S_star, I_star, y_star] = *eq.E2;
    EigenData ed;
    ed.n0 = fh.n0;
    ed.z_star = fh.z_star;
    ed.omega_star = fh.omega_star;
    ed.tau_star = p.tau / fh.omega_star;
    ed.kernel = linear_kernel(p, fh.n0, fh.omega_star);

    const double k2 = ed.kernel.k2;
    const Complex Om = kI * ed.z_star * ed.omega_star;
    const Complex emiO = std::exp(-Om);
    const double ae = p.alpha * p.survival();
    const Complex e_tau = std::exp(-Om * ed.tau_star); // e^{-i z* tau}

    ed.xi1 = p.mu * I_star * emiO / (p.d2 * k2 + kI * ed.z_star);
    ed.xi2 = 0.0;
    ed.eta1 = (p.gamma - p.mu * S_star) / (p.d2 * k2 + kI * ed.z_star);
    ed.eta2 = (p.alpha - ae * e_tau) /
              (kI * ed.z_star + p.d3 * k2 + 2.0 * p.beta * y_star - ae * e_tau);

    const CVec3 p0{1.0, ed.xi1, ed.xi2};
    const CVec3 q0{1.0, ed.eta1, ed.eta2};
    const double ts = ed.tau_star;
    ed.p1 = Segment{{{p0, Om}}, ts};
    ed.p2 = Segment{{{conj(p0), -Om}}, ts};
    ed.q1 = Segment{{{q0, -Om}}, ts};
    ed.q2 = Segment{{{conj(q0), Om}}, ts};

    const Complex half{0.5, 0.0};
    const Complex halfi = half / kI;
    ed.phi1 = ed.p1.scaled(half) + ed.p2.scaled(half);
    ed.phi2 = ed.p1.scaled(halfi) + ed.p2.scaled(-halfi);
    ed.phi1s = ed.q1.scaled(half) + ed.q2.scaled(half);
    ed.phi2s = ed.q1.scaled(halfi) + ed.q2.scaled(-halfi);

    const Segment* stars[2] = {&ed.phi1s, &ed.phi2s};
    const Segment* bases[2] = {&ed.phi1, &ed.phi2};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const Complex v = bilinear_form(*stars[i], *bases[j], ed.kernel);
            if (std::abs(v.imag()) > 1e-9)
                throw numeric_error("pairing of real bases came out complex");
            ed.innerprod[std::size_t(i)][std::size_t(j)] = v.real();
        }
    }

    const auto& M = ed.innerprod;
    const double det = M[0][0] * M[1][1] - M[0][1] * M[1][0];
    if (std::abs(det) < 1e-12) throw precondition_error("degenerate pairing (Phi*, Phi)");
    const double inv[2][2] = {{M[1][1] / det, -M[0][1] / det}, {-M[1][0] / det, M[0][0] / det}};
    ed.psi1 = ed.phi1s.scaled(inv[0][0]) + ed.phi2s.scaled(inv[0][1]);
    ed.psi2 = ed.phi1s.scaled(inv[1][0]) + ed.phi2s.scaled(inv[1][1]);

    const CVec3 psi1_0 = ed.psi1.at(0.0), psi2_0 = ed.psi2.at(0.0);
    for (int i = 0; i < 3; ++i) ed.psi0[std::size_t(i)] = psi1_0[std::size_t(i)] - kI * psi2_0[std::size_t(i)];
    return ed;
}

GQuadratic g_coefficients(const EigenData& ed, const ModelParams& p) {
    GQuadratic g;
    g.Gamma = basis_weights(ed.n0, p.l).gamma;
    g.g20 = g.Gamma * dot(ed.psi0, f_tilde_20(ed, p));
    g.g11 = g.Gamma * dot(ed.psi0, f_tilde_11(ed, p));
    g.g02 = std::conj(g.g20);
    return g;
}

// characteristic_matrix at 2 i z* w* (resp. 0) equals omega* times the displayed
// correction matrix, so solve3 against it yields J^n * rhs directly.
CMat3 correction_matrix_zz(const EigenData& ed, int n) {
    LinearKernel k = ed.kernel;
    k.k2 = double(n) * double(n) * k.inv_l2;
    return characteristic_matrix(k, 2.0 * kI * ed.z_star * ed.omega_star);
}

CMat3 correction_matrix_zzbar(const EigenData& ed, int n) {
    LinearKernel k = ed.kernel;
    k.k2 = double(n) * double(n) * k.inv_l2;
    return characteristic_matrix(k, Complex{0.0, 0.0});
}

CmCorrection center_manifold_correction(const EigenData& ed, const GQuadratic& gq,
                                        const ModelParams& p) {
    const double Om = ed.z_star * ed.omega_star;
    CmCorrection w;
    w.a20 = kI * gq.g20 / (2.0 * Om);
    w.b20 = kI * std::conj(gq.g02) / (6.0 * Om);
    w.a11 = -kI * gq.g11 / (2.0 * Om);
    w.b11 = kI * std::conj(gq.g11) / (2.0 * Om);
    const CVec3 F20 = f_tilde_20(ed, p);
    const CVec3 F11 = f_tilde_11(ed, p);
    for (const auto& [n, weight] : basis_weights(ed.n0, p.l).modes) {
        CVec3 rhs20{F20[0] * weight, F20[1] * weight, F20[2] * weight};
        CVec3 rhs11{F11[0] * weight, F11[1] * weight, F11[2] * weight};
        try {
            w.E1[n] = solve3(correction_matrix_zz(ed, n), rhs20);
            w.E2[n] = solve3(correction_matrix_zzbar(ed, n), rhs11);
        } catch (const numeric_error&) {
            throw numeric_error("resonant correction: 2 i z* omega* collides with a linear eigenvalue");
        }
    }
    return w;
}

GCubic g21_coefficient(const EigenData& ed, const GQuadratic& gq, const CmCorrection& corr,
                       const ModelParams& p) {
    const auto weights = basis_weights(ed.n0, p.l);
    const Complex Om = kI * ed.z_star * ed.omega_star;
    const Complex eiO = std::exp(Om);
    const Complex emiO = std::exp(-Om);

    // int W(theta) b_{n0}^2 dx at the needed theta: p-parts carry the
    // self-overlap Gamma, E-parts the per-mode overlaps.
    auto iw20 = [&](double theta) {
        CVec3 v{};
        const CVec3 p1t = ed.p1.at(theta), p2t = ed.p2.at(theta);
        const Complex e2 = std::exp(2.0 * Om * theta);
        for (int i = 0; i < 3; ++i)
            v[std::size_t(i)] = gq.Gamma * (corr.a20 * p1t[std::size_t(i)] + corr.b20 * p2t[std::size_t(i)]);
        for (const auto& [n, weight] : weights.modes)
            for (int i = 0; i < 3; ++i) v[std::size_t(i)] += corr.E1.at(n)[std::size_t(i)] * e2 * weight;
        return v;
    };
    auto iw11 = [&](double theta) {
        CVec3 v{};
        const CVec3 p1t = ed.p1.at(theta), p2t = ed.p2.at(theta);
        for (int i = 0; i < 3; ++i)
            v[std::size_t(i)] = gq.Gamma * (corr.a11 * p1t[std::size_t(i)] + corr.b11 * p2t[std::size_t(i)]);
        for (const auto& [n, weight] : weights.modes)
            for (int i = 0; i < 3; ++i) v[std::size_t(i)] += corr.E2.at(n)[std::size_t(i)] * weight;
        return v;
    };

    GCubic out;
    const CVec3 w20_0 = iw20(0.0), w11_0 = iw11(0.0);
    const CVec3 w20_m1 = iw20(-1.0), w11_m1 = iw11(-1.0);
    out.kappa1 = 0.5 * eiO * w20_0[1] + emiO * w11_0[1] + 0.5 * std::conj(ed.xi1) * w20_m1[0] +
                 ed.xi1 * w11_m1[0];
    out.kappa2 = std::conj(ed.xi2) * w20_0[2] + 2.0 * ed.xi2 * w11_0[2];
    const CVec3 cubic{ed.omega_star * (-p.mu * out.kappa1), ed.omega_star * (p.mu * out.kappa1),
                      ed.omega_star * (-p.beta * out.kappa2)};
    out.g21 = dot(ed.psi0, cubic);
    return out;
}

NormalFormResult hopf_properties(const ModelParams& p) {
    require_valid(p);
    NormalFormResult r;
    r.hopf = first_hopf(p);
    r.eigen = eigen_basis(p, r.hopf);
    const auto gq = g_coefficients(r.eigen, p);
    r.corrections = center_manifold_correction(r.eigen, gq, p);
    const auto cubic = g21_coefficient(r.eigen, gq, r.corrections, p);
    r.g20 = gq.g20;
    r.g11 = gq.g11;
    r.g02 = gq.g02;
    r.Gamma = gq.Gamma;
    r.g21 = cubic.g21;
    r.kappa1 = cubic.kappa1;
    r.kappa2 = cubic.kappa2;

    const double Om = r.eigen.z_star * r.eigen.omega_star;
    r.c1_0 = kI / (2.0 * Om) *
                 (r.g11 * r.g20 - 2.0 * std::norm(r.g11) - std::norm(r.g02) / 3.0) +
             r.g21 / 2.0;
    r.lambda_prime_ = lambda_prime(p, r.hopf.n0, 0);
    r.mu2 = -r.c1_0.real() / r.lambda_prime_.real();
    r.beta2 = 2.0 * r.c1_0.real();
    r.T2 = -(r.c1_0.imag() + r.mu2 * r.lambda_prime_.imag()) / Om;
    r.supercritical = r.mu2 > 0;
    r.orbit_stable = r.beta2 < 0;
    r.period_increasing = r.T2 > 0;
    r.predicted_period = 2.0 * M_PI / r.hopf.z_star;
    return r;
}

} // namespace sisdde
