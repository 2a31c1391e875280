#pragma once

#include <json.hpp>

#include <string>

#include "mms/instance.hpp"

namespace mms {

/// "p/q" or a bare integer string; integers are also accepted as JSON numbers.
Rational rational_from_json(const nlohmann::json& j);
nlohmann::json rational_to_json(const Rational& r);
/// {"value": "p/q", "decimal": x}
nlohmann::json rational_report(const Rational& r);

/// Throws InvalidInstance on malformed documents. Does not check Eq. (1);
/// call validate_instance for that.
Instance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const Instance& inst);

Allocation allocation_from_json(const nlohmann::json& j);
nlohmann::json allocation_to_json(const Allocation& alloc);

/// Throws Error when the file cannot be read and InvalidInstance on parse errors.
nlohmann::json read_json_file(const std::string& path);
/// Writes with two-space indentation and a trailing newline.
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace mms
