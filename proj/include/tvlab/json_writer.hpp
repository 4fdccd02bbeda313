#pragma once

#include <json.hpp>
#include <string>

namespace tvlab {

/// Pretty-prints JSON with every floating-point number written using 17
/// significant digits, so that a value read back re-serializes identically.
std::string dump_json(const nlohmann::json& value, int indent = 2);

}  // namespace tvlab
