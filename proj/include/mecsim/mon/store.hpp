#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "mecsim/mon/metrics.hpp"

namespace mecsim::mon {

struct SeriesKey {
    std::string name;
    Labels labels;

    auto operator<=>(const SeriesKey&) const = default;
};

struct Point {
    sim::SimTime t;
    double value = 0;
};

struct SeriesSlice {
    SeriesKey key;
    std::vector<Point> points;
};

struct SeriesSelector {
    std::string name;
    Labels filter;  // subset match against a series' labels
};

/// Append-only in-memory time-series store; timestamps strictly increase
/// within each series.
class SeriesStore {
public:
    void append(const SeriesKey& key, sim::SimTime t, double value);

    bool has_series(const std::string& name) const;
    std::size_t series_count() const { return series_.size(); }
    std::vector<std::string> metric_names() const;

    /// All samples in [t0, t1] of every series matching (name, filter),
    /// series ordered by key, points by time.
    std::vector<SeriesSlice> query_range(const std::string& name, const Labels& filter,
                                         sim::SimTime t0, sim::SimTime t1) const;
    std::vector<SeriesSlice> select(const std::vector<SeriesSelector>& selection) const;
    std::vector<SeriesSlice> all() const;

    const std::map<SeriesKey, std::vector<Point>>& series() const { return series_; }

private:
    std::map<SeriesKey, std::vector<Point>> series_;
};

/// A run's recorded series plus identifying metadata; the on-disk dump is
/// {meta:{scenario,seed,duration_s}, series:[{name,labels,points:[[t_s,v],..]}]}
/// with series sorted by (name, serialized labels).
struct TsdbDump {
    std::string scenario;
    std::uint64_t seed = 0;
    double duration_s = 0;
    SeriesStore store;

    nlohmann::json to_json() const;
    std::string to_bytes() const;
    static TsdbDump from_json(const nlohmann::json& doc);
    static TsdbDump load_file(const std::string& path);
    void write_file(const std::string& path) const;
};

}  // namespace mecsim::mon
