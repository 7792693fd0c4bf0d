#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "rsmech/experiments.hpp"
#include "rsmech/properties.hpp"

namespace rsmech {

using Json = nlohmann::ordered_json;

/// Accepts "p/q" strings and integers. Throws ContractError.
Rational rational_from_json(const Json& value);
Json rational_to_json(const Rational& value);

Json instance_to_json(const Instance& instance);
/// Validates the result. Throws ContractError on malformed input.
Instance instance_from_json(const Json& json);

Json allocation_to_json(const Instance& instance, const Allocation& allocation);
Json outcome_to_json(const Instance& instance, const MechanismOutcome& outcome, const TypeProfile& truth);
Json metrics_to_json(const MetricsRow& row);

/// Zone files are resolved relative to `base_dir`.
ExperimentConfig config_from_json(const Json& json, const std::filesystem::path& base_dir = {});
Json config_to_json(const ExperimentConfig& config);

Json report_to_json(const PropertyReport& report);

Json read_json_file(const std::filesystem::path& path);
/// Two-space indentation and a trailing newline.
std::string dump(const Json& json);

}  // namespace rsmech
