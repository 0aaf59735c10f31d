#pragma once

#include "sisdde/model.hpp"
#include "sisdde/spectral.hpp"

#include <array>
#include <complex>
#include <map>
#include <vector>

namespace sisdde {

using Complex = std::complex<double>;
using CVec3 = std::array<Complex, 3>;
using CMat3 = std::array<CVec3, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

/// Function segment represented as a finite sum of vector exponentials
/// sum_k coef_k * exp(rate_k * arg). State segments live on [-tau*, 0],
/// adjoint segments on [0, tau*]; the representation is shared and every
/// integral against them has a closed form.
struct Segment {
    struct Term {
        CVec3 coef{};
        Complex rate{};
    };
    std::vector<Term> terms;
    double domain = 0; ///< tau*, for mismatch checks

    CVec3 at(double arg) const;
    Segment scaled(Complex factor) const;
};

Segment operator+(const Segment& a, const Segment& b);

/// Mode-n kernel of the time-rescaled linearization at E2:
/// dX/dt = omega* [ -D k2 X(t) + B1 X(t) + B2 X(t-1) + B3 X(t-tau*) ].
struct LinearKernel {
    double omega_star = 0;
    double tau_star = 0;
    double k2 = 0;     ///< n^2/l^2
    double inv_l2 = 0; ///< 1/l^2, for re-deriving k2 at other modes
    std::array<double, 3> diffusion{};
    Mat3 B1{}, B2{}, B3{};
};

LinearKernel linear_kernel(const ModelParams& p, int n, double omega_star);

/// Characteristic matrix lambda*I - omega*(-D k2 + B1 + B2 e^{-lambda} + B3 e^{-lambda tau*}).
CMat3 characteristic_matrix(const LinearKernel& k, Complex lambda);

/// Bilinear pairing (psi, phi) between an adjoint segment and a state segment:
///   psi(0) phi(0) + omega* int_{-1}^{0} psi(xi+1) B2 phi(xi) dxi
///             + omega* int_{-tau*}^{0} psi(xi+tau*) B3 phi(xi) dxi,
/// evaluated in closed form. Throws std::invalid_argument on mismatched domains.
Complex bilinear_form(const Segment& psi, const Segment& phi, const LinearKernel& k);

/// Gaussian elimination with partial pivoting on a 3x3 complex system.
CVec3 solve3(CMat3 A, CVec3 b);

/// Eigenbases of the critical mode at the first Hopf point and their pairing.
///
/// p1(theta) = (1, xi1, xi2)^T e^{i z* w* theta} spans the critical eigenspace;
/// q1(s) = (1, eta1, eta2) e^{-i z* w* s} is the adjoint eigenvector, with
/// q1(0) a left null vector of the characteristic matrix at +i z* w*, which
/// makes (q1, p1) != 0 and (q1, p2) = 0 exactly.
struct EigenData {
    int n0 = 0;
    double z_star = 0, omega_star = 0, tau_star = 0;
    Complex xi1{}, xi2{}, eta1{}, eta2{};
    std::array<std::array<double, 2>, 2> innerprod{}; ///< (Phi*, Phi)
    CVec3 psi0{};                                     ///< Psi1(0) - i Psi2(0)
    Segment p1, p2, q1, q2;
    Segment phi1, phi2, phi1s, phi2s; ///< real bases of P and P*
    Segment psi1, psi2;               ///< normalized adjoint rows, (Psi, Phi) = I
    LinearKernel kernel;              ///< mode-n0 kernel
};

EigenData eigen_basis(const ModelParams& p, const FirstHopf& fh);

/// Quadratic normal-form coefficients. All three vanish for n0 >= 1.
/// Gamma is the basis self-overlap used by the reduction: 1 for the
/// homogeneous mode (constant basis), 0 otherwise.
struct GQuadratic {
    Complex g20{}, g11{}, g02{};
    double Gamma = 0;
};

GQuadratic g_coefficients(const EigenData& ed, const ModelParams& p);

/// Quadratic center-manifold corrections, mode-indexed:
///   W20(theta)(x) = [a20 p1(theta) + b20 p2(theta)] b_{n0}(x)
///                   + sum_n E1[n] e^{2 i z* w* theta} b_n(x)
///   W11(theta)(x) = [a11 p1(theta) + b11 p2(theta)] b_{n0}(x) + sum_n E2[n] b_n(x)
/// The E maps carry entries only for n in {0, 2 n0}.
struct CmCorrection {
    Complex a20{}, b20{}, a11{}, b11{};
    std::map<int, CVec3> E1, E2;
};

CmCorrection center_manifold_correction(const EigenData& ed, const GQuadratic& gq,
                                        const ModelParams& p);

/// Matrix whose inverse, divided by omega*, is J1^n (resp. J2^n).
CMat3 correction_matrix_zz(const EigenData& ed, int n);
CMat3 correction_matrix_zzbar(const EigenData& ed, int n);

struct GCubic {
    Complex kappa1{}, kappa2{}, g21{};
};

GCubic g21_coefficient(const EigenData& ed, const GQuadratic& gq, const CmCorrection& corr,
                       const ModelParams& p);

struct NormalFormResult {
    FirstHopf hopf;
    EigenData eigen;
    Complex g20{}, g11{}, g02{}, g21{}, kappa1{}, kappa2{};
    double Gamma = 0;
    CmCorrection corrections;
    Complex c1_0{};          ///< first Lyapunov coefficient
    Complex lambda_prime_{}; ///< lambda'(omega*), full complex value
    double mu2 = 0;          ///< bifurcation direction (> 0: supercritical)
    double beta2 = 0;        ///< orbit stability (< 0: stable)
    double T2 = 0;           ///< period trend (> 0: increasing)
    bool supercritical = false, orbit_stable = false, period_increasing = false;
    double predicted_period = 0; ///< 2*pi/z* in original time
};

/// Full normal form at the first Hopf point:
/// c1(0) = i/(2 z* w*) (g11 g20 - 2|g11|^2 - |g02|^2/3) + g21/2, then mu2,
/// beta2, T2 and the classification of the bifurcating periodic solutions.
NormalFormResult hopf_properties(const ModelParams& p);

} // namespace sisdde
