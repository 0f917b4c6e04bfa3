#pragma once

#include "scour/power_law.hpp"

#include <json.hpp>

namespace scour::detail {

using Json = nlohmann::ordered_json;

Json model_to_json(const PowerLawModel& model);
/// Throws ParseError; `what` prefixes messages ("model file", "report").
PowerLawModel model_from_json(const Json& j, const std::string& what);

/// Parses text, reporting syntax errors with a line number.
Json parse_json(const std::string& text, const std::string& what);

} // namespace scour::detail
