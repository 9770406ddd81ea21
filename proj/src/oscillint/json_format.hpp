#pragma once

#include <string>

#include <json.hpp>

namespace oscillint {

/// Pretty JSON with every float printed as %.17g. Non-finite floats become
/// the strings "inf", "-inf" and "nan".
std::string format_json(const nlohmann::ordered_json& doc, int indent = 2);

/// %.17g, or inf / -inf / nan.
std::string format_real(double v);

}  // namespace oscillint
