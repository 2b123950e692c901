#pragma once

#include <string>

#include <json.hpp>

namespace mecsim::util {

/// Load a structured document: JSON by default, YAML for .yaml/.yml paths.
/// YAML input is converted to the equivalent JSON value.
nlohmann::json load_document(const std::string& path);

nlohmann::json parse_json(const std::string& text, const std::string& origin);
nlohmann::json parse_yaml(const std::string& text, const std::string& origin);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace mecsim::util
