#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace sisdde {

/// State triple (S, I, y): susceptible immature, infected immature, mature.
using State = std::array<double, 3>;

/// Parameters of the stage-structured SIS reaction-diffusion model on (0, l*pi).
///
/// All quantities are treated as dimensionless numbers; only positivity and
/// omega < tau are enforced.
struct ModelParams {
    double alpha = 0; ///< birth rate of matures
    double d     = 0; ///< death rate of immatures
    double mu    = 0; ///< disease transmission rate
    double gamma = 0; ///< recovery rate
    double beta  = 0; ///< logistic death rate of matures
    double tau   = 0; ///< maturation delay
    double omega = 0; ///< freely-moving delay, the bifurcation parameter (0 <= omega < tau)
    double d1    = 0; ///< diffusion rate of S
    double d2    = 0; ///< diffusion rate of I
    double d3    = 0; ///< diffusion rate of y
    double l     = 0; ///< domain factor, domain is (0, l*pi)

    double survival() const;      ///< exp(-d*tau), fraction of newborns reaching maturity
    double domain_length() const; ///< l*pi
};

/// Every violated parameter invariant, as human-readable strings; empty means valid.
std::vector<std::string> validate_params(const ModelParams& p);

/// Throws std::invalid_argument listing all violations.
void require_valid(const ModelParams& p);

/// R0 = mu*alpha^2*e^{-d tau}(1-e^{-d tau}) / (d*beta*(d+gamma)).
double basic_reproduction_ratio(const ModelParams& p);

struct EquilibriumSet {
    State E0{};                ///< trivial equilibrium (0,0,0)
    State E1{};                ///< disease-free equilibrium (S_bar, 0, y_bar)
    std::optional<State> E2{}; ///< endemic equilibrium, present iff R0 > 1
    double R0 = 0;
    bool at_threshold = false; ///< |R0 - 1| below tolerance; E2 reported absent and flagged
};

/// Constant equilibria and R0. E2 is absent (not NaN) when R0 <= 1.
EquilibriumSet equilibria(const ModelParams& p);

/// Reaction right-hand side of the model, diffusion excluded:
///   dS/dt = alpha*y - d*S - alpha*e^{-d tau}*y(t-tau) - mu*S(t-omega)*I + gamma*I
///   dI/dt = mu*S(t-omega)*I - d*I - gamma*I
///   dy/dt = alpha*e^{-d tau}*y(t-tau) - beta*y^2
State reaction_rhs(const State& current, double S_delay_omega, double y_delay_tau,
                   const ModelParams& p);

} // namespace sisdde
