#include "sisdde/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sisdde {

namespace {
constexpr double kThresholdTol = 1e-12; // R0 == 1 within this is classified "absent E2" and flagged
}

double ModelParams::survival() const { return std::exp(-d * tau); }
double ModelParams::domain_length() const { return l * M_PI; }

std::vector<std::string> validate_params(const ModelParams& p) {
    std::vector<std::string> v;
    auto positive = [&](double x, const char* name) {
        if (!(x > 0)) v.push_back(std::string(name) + " > 0");
    };
    positive(p.alpha, "alpha");
    positive(p.d, "d");
    positive(p.mu, "mu");
    positive(p.gamma, "gamma");
    positive(p.beta, "beta");
    positive(p.tau, "tau");
    positive(p.l, "l");
    positive(p.d1, "d1");
    positive(p.d2, "d2");
    positive(p.d3, "d3");
    if (!(p.omega >= 0)) v.push_back("omega >= 0");
    if (!(p.omega < p.tau)) v.push_back("omega < tau");
    return v;
}

void require_valid(const ModelParams& p) {
    auto v = validate_params(p);
    if (v.empty()) return;
    std::ostringstream os;
    os << "invalid model parameters:";
    for (const auto& s : v) os << " [" << s << "]";
    throw std::invalid_argument(os.str());
}

double basic_reproduction_ratio(const ModelParams& p) {
    const double e = p.survival();
    return p.mu * p.alpha * p.alpha * e * (1.0 - e) / (p.d * p.beta * (p.d + p.gamma));
}

EquilibriumSet equilibria(const ModelParams& p) {
    require_valid(p);
    const double e = p.survival();
    EquilibriumSet eq;
    eq.R0 = basic_reproduction_ratio(p);
    eq.E0 = {0.0, 0.0, 0.0};
    const double y_bar = p.alpha * e / p.beta;
    const double S_bar = p.alpha * p.alpha * e * (1.0 - e) / (p.d * p.beta);
    eq.E1 = {S_bar, 0.0, y_bar};
    eq.at_threshold = std::abs(eq.R0 - 1.0) <= kThresholdTol;
    if (eq.R0 > 1.0 && !eq.at_threshold) {
        const double S_star = (p.d + p.gamma) / p.mu;
        const double I_star = S_star * (eq.R0 - 1.0);
        eq.E2 = State{S_star, I_star, y_bar};
    }
    return eq;
}

State reaction_rhs(const State& u, double S_delay_omega, double y_delay_tau,
                   const ModelParams& p) {
    const double S = u[0], I = u[1], y = u[2];
    const double ae = p.alpha * p.survival();
    return State{
        p.alpha * y - p.d * S - ae * y_delay_tau - p.mu * S_delay_omega * I + p.gamma * I,
        p.mu * S_delay_omega * I - p.d * I - p.gamma * I,
        ae * y_delay_tau - p.beta * y * y,
    };
}

} // namespace sisdde
