#include "sisdde/json_io.hpp"

#include <cmath>

namespace sisdde {

using nlohmann::json;

namespace {

json complex_json(const Complex& c) { return json{{"re", c.real()}, {"im", c.imag()}}; }

json state_json(const State& s) { return json{s[0], s[1], s[2]}; }

double clean(double v) { return std::isfinite(v) ? v : 0.0; }

const char* kind_name(AttractorKind k) {
    switch (k) {
    case AttractorKind::equilibrium: return "equilibrium";
    case AttractorKind::homogeneous_oscillation: return "homogeneous oscillation";
    case AttractorKind::inhomogeneous_oscillation: return "inhomogeneous oscillation";
    default: return "inconclusive";
    }
}

} // namespace

json to_json(const ModelParams& p) {
    return json{{"alpha", p.alpha}, {"d", p.d},   {"mu", p.mu}, {"gamma", p.gamma},
                {"beta", p.beta},   {"tau", p.tau}, {"omega", p.omega}, {"d1", p.d1},
                {"d2", p.d2},       {"d3", p.d3},  {"l", p.l}};
}

json to_json(const EquilibriumSet& eq) {
    json j{{"schema", kJsonSchema},
           {"E0", state_json(eq.E0)},
           {"E1", state_json(eq.E1)},
           {"R0", eq.R0},
           {"at_threshold", eq.at_threshold}};
    j["E2"] = eq.E2 ? state_json(*eq.E2) : json(nullptr);
    return j;
}

json to_json(const HopfCrossing& h, double transversality_value) {
    return json{{"n", h.n},
                {"z_n", h.z},
                {"S_n", h.S},
                {"C_n", h.C},
                {"omegas", h.omegas},
                {"transversality", transversality_value}};
}

json to_json(const FirstHopf& fh) {
    return json{{"n0", fh.n0},
                {"omega_star", fh.omega_star},
                {"z_star", fh.z_star},
                {"ties", fh.ties}};
}

json to_json(const NormalFormResult& nf) {
    json j{{"schema", kJsonSchema},
           {"first_hopf", to_json(nf.hopf)},
           {"g20", complex_json(nf.g20)},
           {"g11", complex_json(nf.g11)},
           {"g02", complex_json(nf.g02)},
           {"g21", complex_json(nf.g21)},
           {"kappa1", complex_json(nf.kappa1)},
           {"kappa2", complex_json(nf.kappa2)},
           {"Gamma", nf.Gamma},
           {"c1_0", complex_json(nf.c1_0)},
           {"lambda_prime", complex_json(nf.lambda_prime_)},
           {"mu2", nf.mu2},
           {"beta2", nf.beta2},
           {"T2", nf.T2},
           {"predicted_period", nf.predicted_period}};
    j["classification"] = json{{"direction", nf.supercritical ? "supercritical" : "subcritical"},
                               {"orbit", nf.orbit_stable ? "stable" : "unstable"},
                               {"period", nf.period_increasing ? "increasing" : "decreasing"}};
    return j;
}

json to_json(const AttractorReport& rep) {
    return json{{"schema", kJsonSchema},
                {"kind", kind_name(rep.kind)},
                {"dominant_mode", rep.dominant_mode},
                {"period", clean(rep.period)},
                {"amplitude", rep.amplitude},
                {"window_fraction", rep.window_fraction},
                {"note", rep.note}};
}

json to_json(const SweepResult& sw) {
    json pts = json::array();
    for (const auto& p : sw.points) {
        json omegas = json::array();
        for (const auto& w : p.omega0) omegas.push_back(w ? json(*w) : json(nullptr));
        pts.push_back(json{{"d2", p.d2}, {"omega0", omegas}, {"n0", p.n0}, {"omega_star", p.omega_star}});
    }
    json bounds = json::array();
    for (const auto& b : sw.boundaries)
        bounds.push_back(json{{"d2_low", b.d2_low},
                              {"d2_high", b.d2_high},
                              {"d2", 0.5 * (b.d2_low + b.d2_high)},
                              {"n0_before", b.n0_before},
                              {"n0_after", b.n0_after}});
    return json{{"schema", kJsonSchema}, {"points", pts}, {"boundaries", bounds}};
}

json to_json(const VerificationReport& rep) {
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back(json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return json{{"schema", kJsonSchema},
                {"conclusive", rep.conclusive},
                {"all_pass", rep.all_pass},
                {"omega_below", rep.omega_below},
                {"omega_above", rep.omega_above},
                {"prediction", to_json(rep.prediction)},
                {"below", to_json(rep.below)},
                {"above", to_json(rep.above)},
                {"checks", checks}};
}

} // namespace sisdde
