// JSON mirror of the model format.
#pragma once

#include <string>

#include <json.hpp>

#include "switchcrn/classify.hpp"
#include "switchcrn/drift.hpp"
#include "switchcrn/model.hpp"

namespace switchcrn {

using Json = nlohmann::json;

Json model_to_json(const SwitchedModel& model);
/// Accepts complexes either as {"name": count} objects or as text such as "2 A + B".
/// Unknown top-level fields are ignored, so analysis output can be fed back in.
SwitchedModel model_from_json(const Json& j);
SwitchedModel model_from_json_text(const std::string& text);

Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

/// Model plus per-environment linearization, stationary weights and mixed matrix.
/// The result is itself a valid model document.
Json analysis_to_json(const SwitchedModel& model);
Json to_json(const DirectionCertificate& cert);
Json to_json(const Conclusion& c, const std::vector<std::string>& species);
Json to_json(const RegimeVerdict& v, const std::vector<std::string>& species);
Json to_json(const DriftReport& r, bool with_samples = false);

}  // namespace switchcrn
