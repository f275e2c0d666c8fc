#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "ontic/ontology.hpp"

namespace ontic::ontology {

// JSON form:
// { "lambda": [string],
//   "preparations": [{"name": string, "mu": [number]}],
//   "measurements": [{"name": string, "outcomes": [string], "xi": [[number]]}],
//   "born_targets": {prep: {measurement: [number]}}   (optional) }
//
// Parsing only checks structure and types; numeric invariants are left to validate().

OntModel model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const OntModel& model);

OntModel load_model(const std::filesystem::path& path);

nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const OverlapReport& report);

}  // namespace ontic::ontology
