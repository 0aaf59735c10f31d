#pragma once

#include "sisdde/analysis.hpp"
#include "sisdde/model.hpp"
#include "sisdde/normalform.hpp"
#include "sisdde/spectral.hpp"

#include <nlohmann/json.hpp>

namespace sisdde {

inline constexpr const char* kJsonSchema = "sisdde/1";

nlohmann::json to_json(const ModelParams& p);
nlohmann::json to_json(const EquilibriumSet& eq);
nlohmann::json to_json(const HopfCrossing& h, double transversality_value);
nlohmann::json to_json(const FirstHopf& fh);
nlohmann::json to_json(const NormalFormResult& nf);
nlohmann::json to_json(const AttractorReport& rep);
nlohmann::json to_json(const SweepResult& sw);
nlohmann::json to_json(const VerificationReport& rep);

} // namespace sisdde
