#pragma once

#include "edgematch/hypothesis.hpp"
#include "edgematch/verification.hpp"

#include <json.hpp>

namespace edgematch {

/// MatchResult document, schema version 1. Transform is {s, tx, ty} or null.
nlohmann::ordered_json to_json(const MatchResult& r);
MatchResult match_result_from_json(const nlohmann::json& doc);

nlohmann::ordered_json to_json(const HypothesisConfig& cfg);
nlohmann::ordered_json to_json(const VerifyConfig& cfg);
/// Overwrites only the fields present in `doc`; unknown keys are rejected.
void merge_json(HypothesisConfig& cfg, const nlohmann::json& doc);
void merge_json(VerifyConfig& cfg, const nlohmann::json& doc);

} // namespace edgematch
