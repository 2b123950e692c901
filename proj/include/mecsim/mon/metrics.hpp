#pragma once

#include <map>
#include <string>
#include <vector>

#include "mecsim/errors.hpp"
#include "mecsim/sim/time.hpp"

namespace mecsim::mon {

enum class MetricKind { gauge, counter };

const char* to_string(MetricKind kind);

using Labels = std::map<std::string, std::string>;

struct MetricDescriptor {
    std::string name;  // snake_case; counters end in _total
    MetricKind kind = MetricKind::gauge;
    std::string help;
    std::vector<std::string> label_keys;
};

/// A timestamped value as stored in the series store. The exposition parser
/// produces these with the timestamp supplied by the caller.
struct Sample {
    std::string name;
    Labels labels;
    double value = 0;
    sim::SimTime timestamp;
};

/// Shortest decimal representation that round-trips the double exactly.
std::string format_value(double v);

/// Registry of gauge/counter series for one exporter. Metric names are unique;
/// counters reject decreasing values.
class MetricRegistry {
public:
    void define(MetricDescriptor descriptor);
    bool defined(const std::string& name) const;

    void set(const std::string& name, const Labels& labels, double value);
    void add(const std::string& name, const Labels& labels, double delta);
    double value(const std::string& name, const Labels& labels) const;

    /// Drop every series of one metric (the descriptor stays).
    void clear_values(const std::string& name);

    /// Exposition text: a `# TYPE` line per metric, then one line per label
    /// set with labels sorted by key.
    std::string render() const;

    std::vector<Sample> samples() const;
    std::size_t series_count() const;

private:
    struct Metric {
        MetricDescriptor descriptor;
        std::map<Labels, double> series;
    };

    const Metric& metric(const std::string& name) const;
    Metric& metric_mut(const std::string& name);

    std::map<std::string, Metric> metrics_;
};

/// Inverse of MetricRegistry::render. Accepts unsorted labels (they are
/// canonicalized by the Labels map). Throws ParseError with the line number
/// on malformed input. Sample timestamps are left at zero.
std::vector<Sample> parse_exposition(const std::string& text);

std::string render_label_set(const Labels& labels);

}  // namespace mecsim::mon
