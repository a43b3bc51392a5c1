#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

namespace eigencond {

/// Parses the TOML subset used by run configs into a JSON object of tables:
/// `[table]` headers, `key = value` pairs with string / integer / float /
/// boolean / flat-array values, and `#` comments. Anything else is a
/// ConfigError carrying the line number.
nlohmann::json parse_toml_lite(const std::string& text);

nlohmann::json parse_toml_file(const std::string& path);

}  // namespace eigencond
