#include "mecsim/util/doc.hpp"

#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mecsim/errors.hpp"

namespace mecsim::util {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw SimError(Err::io_error, "cannot open " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw SimError(Err::io_error, "cannot write " + path);
    }
    out << contents;
    if (!out) {
        throw SimError(Err::io_error, "short write to " + path);
    }
}

nlohmann::json parse_json(const std::string& text, const std::string& origin) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SimError(Err::parse_error, origin + ": " + e.what());
    }
}

namespace {

nlohmann::json yaml_to_json(const YAML::Node& node) {
    switch (node.Type()) {
        case YAML::NodeType::Null:
            return nullptr;
        case YAML::NodeType::Scalar: {
            // YAML scalars are untyped; try the JSON-ish interpretations first
            const std::string& raw = node.Scalar();
            if (raw == "true") return true;
            if (raw == "false") return false;
            if (raw == "null" || raw == "~") return nullptr;
            try {
                std::size_t used = 0;
                long long integer = std::stoll(raw, &used);
                if (used == raw.size()) return integer;
            } catch (...) {
            }
            try {
                std::size_t used = 0;
                double real = std::stod(raw, &used);
                if (used == raw.size()) return real;
            } catch (...) {
            }
            return raw;
        }
        case YAML::NodeType::Sequence: {
            nlohmann::json out = nlohmann::json::array();
            for (const auto& item : node) {
                out.push_back(yaml_to_json(item));
            }
            return out;
        }
        case YAML::NodeType::Map: {
            nlohmann::json out = nlohmann::json::object();
            for (const auto& item : node) {
                out[item.first.as<std::string>()] = yaml_to_json(item.second);
            }
            return out;
        }
        default:
            return nullptr;
    }
}

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

nlohmann::json parse_yaml(const std::string& text, const std::string& origin) {
    try {
        return yaml_to_json(YAML::Load(text));
    } catch (const YAML::Exception& e) {
        throw SimError(Err::parse_error, origin + ": " + e.what());
    }
}

nlohmann::json load_document(const std::string& path) {
    std::string text = read_file(path);
    if (has_suffix(path, ".yaml") || has_suffix(path, ".yml")) {
        return parse_yaml(text, path);
    }
    return parse_json(text, path);
}

}  // namespace mecsim::util
