#include "mecsim/mon/metrics.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace mecsim::mon {

const char* to_string(MetricKind kind) {
    return kind == MetricKind::counter ? "counter" : "gauge";
}

std::string format_value(double v) {
    char buf[64];
    auto result = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, result.ptr);
}

void MetricRegistry::define(MetricDescriptor descriptor) {
    if (metrics_.contains(descriptor.name)) {
        throw SimError(Err::duplicate_registration, "metric " + descriptor.name);
    }
    std::string name = descriptor.name;
    metrics_.emplace(std::move(name), Metric{std::move(descriptor), {}});
}

bool MetricRegistry::defined(const std::string& name) const {
    return metrics_.contains(name);
}

const MetricRegistry::Metric& MetricRegistry::metric(const std::string& name) const {
    auto it = metrics_.find(name);
    if (it == metrics_.end()) {
        throw SimError(Err::internal, "metric not defined: " + name);
    }
    return it->second;
}

MetricRegistry::Metric& MetricRegistry::metric_mut(const std::string& name) {
    auto it = metrics_.find(name);
    if (it == metrics_.end()) {
        throw SimError(Err::internal, "metric not defined: " + name);
    }
    return it->second;
}

void MetricRegistry::set(const std::string& name, const Labels& labels, double value) {
    if (!std::isfinite(value)) {
        throw SimError(Err::internal, "non-finite sample for " + name);
    }
    auto& m = metric_mut(name);
    if (labels.size() != m.descriptor.label_keys.size()) {
        throw SimError(Err::internal, "label arity mismatch for " + name);
    }
    for (const auto& key : m.descriptor.label_keys) {
        if (!labels.contains(key)) {
            throw SimError(Err::internal, "missing label " + key + " for " + name);
        }
    }
    auto it = m.series.find(labels);
    if (it != m.series.end()) {
        if (m.descriptor.kind == MetricKind::counter && value < it->second) {
            throw SimError(Err::internal, "counter " + name + " would decrease");
        }
        it->second = value;
    } else {
        m.series.emplace(labels, value);
    }
}

void MetricRegistry::add(const std::string& name, const Labels& labels, double delta) {
    auto& m = metric_mut(name);
    auto it = m.series.find(labels);
    double base = it == m.series.end() ? 0.0 : it->second;
    set(name, labels, base + delta);
}

double MetricRegistry::value(const std::string& name, const Labels& labels) const {
    const auto& m = metric(name);
    auto it = m.series.find(labels);
    if (it == m.series.end()) {
        throw SimError(Err::internal, "no series " + name + render_label_set(labels));
    }
    return it->second;
}

void MetricRegistry::clear_values(const std::string& name) {
    metric_mut(name).series.clear();
}

std::size_t MetricRegistry::series_count() const {
    std::size_t n = 0;
    for (const auto& [name, m] : metrics_) {
        n += m.series.size();
    }
    return n;
}

namespace {

std::string escape_label_value(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_label_set(const Labels& labels) {
    if (labels.empty()) {
        return "";
    }
    std::string out = "{";
    bool first = true;
    for (const auto& [key, value] : labels) {
        if (!first) out += ",";
        first = false;
        out += key;
        out += "=\"";
        out += escape_label_value(value);
        out += "\"";
    }
    out += "}";
    return out;
}

std::string MetricRegistry::render() const {
    std::string out;
    for (const auto& [name, m] : metrics_) {
        if (m.series.empty()) {
            continue;
        }
        out += "# TYPE " + name + " " + to_string(m.descriptor.kind) + "\n";
        for (const auto& [labels, value] : m.series) {
            out += name + render_label_set(labels) + " " + format_value(value) + "\n";
        }
    }
    return out;
}

std::vector<Sample> MetricRegistry::samples() const {
    std::vector<Sample> out;
    for (const auto& [name, m] : metrics_) {
        for (const auto& [labels, value] : m.series) {
            out.push_back(Sample{name, labels, value, {}});
        }
    }
    return out;
}

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
    throw SimError(Err::parse_error, "line " + std::to_string(line_no) + ": " + what);
}

bool is_name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == ':';
}

// name{k="v",...} value   |   name value
void parse_metric_line(const std::string& line, std::size_t line_no, std::vector<Sample>& out) {
    std::size_t pos = 0;
    while (pos < line.size() && is_name_char(line[pos])) {
        ++pos;
    }
    if (pos == 0) {
        parse_fail(line_no, "expected metric name");
    }
    Sample sample;
    sample.name = line.substr(0, pos);

    if (pos < line.size() && line[pos] == '{') {
        ++pos;
        while (pos < line.size() && line[pos] != '}') {
            std::size_t key_start = pos;
            while (pos < line.size() && is_name_char(line[pos])) {
                ++pos;
            }
            if (pos == key_start || pos >= line.size() || line[pos] != '=') {
                parse_fail(line_no, "malformed label key");
            }
            std::string key = line.substr(key_start, pos - key_start);
            ++pos;
            if (pos >= line.size() || line[pos] != '"') {
                parse_fail(line_no, "label value must be quoted");
            }
            ++pos;
            std::string value;
            while (pos < line.size() && line[pos] != '"') {
                if (line[pos] == '\\' && pos + 1 < line.size()) {
                    char next = line[pos + 1];
                    if (next == '\\') value += '\\';
                    else if (next == '"') value += '"';
                    else if (next == 'n') value += '\n';
                    else parse_fail(line_no, "unknown escape in label value");
                    pos += 2;
                } else {
                    value += line[pos++];
                }
            }
            if (pos >= line.size()) {
                parse_fail(line_no, "unterminated label value");
            }
            ++pos;  // closing quote
            sample.labels[key] = value;
            if (pos < line.size() && line[pos] == ',') {
                ++pos;
            }
        }
        if (pos >= line.size() || line[pos] != '}') {
            parse_fail(line_no, "unterminated label set");
        }
        ++pos;
    }

    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) {
        ++pos;
    }
    if (pos >= line.size()) {
        parse_fail(line_no, "missing value");
    }
    std::string token = line.substr(pos);
    while (!token.empty() && (token.back() == ' ' || token.back() == '\r')) {
        token.pop_back();
    }
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto result = std::from_chars(begin, end, sample.value);
    if (result.ec != std::errc{} || result.ptr != end) {
        parse_fail(line_no, "malformed value token '" + token + "'");
    }
    if (!std::isfinite(sample.value)) {
        parse_fail(line_no, "non-finite value");
    }
    out.push_back(std::move(sample));
}

}  // namespace

std::vector<Sample> parse_exposition(const std::string& text) {
    std::vector<Sample> out;
    std::istringstream stream(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            continue;  // TYPE/HELP/comment lines carry no samples
        }
        parse_metric_line(line, line_no, out);
    }
    return out;
}

}  // namespace mecsim::mon
