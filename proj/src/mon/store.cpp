#include "mecsim/mon/store.hpp"

#include <fstream>

namespace mecsim::mon {

void SeriesStore::append(const SeriesKey& key, sim::SimTime t, double value) {
    auto& points = series_[key];
    if (!points.empty() && points.back().t >= t) {
        throw SimError(Err::internal, "timestamps must strictly increase in series " + key.name +
                                          render_label_set(key.labels));
    }
    points.push_back(Point{t, value});
}

bool SeriesStore::has_series(const std::string& name) const {
    for (const auto& [key, points] : series_) {
        if (key.name == name) {
            return true;
        }
    }
    return false;
}

std::vector<std::string> SeriesStore::metric_names() const {
    std::vector<std::string> out;
    for (const auto& [key, points] : series_) {
        if (out.empty() || out.back() != key.name) {
            out.push_back(key.name);
        }
    }
    return out;
}

namespace {

bool labels_match(const Labels& filter, const Labels& labels) {
    for (const auto& [k, v] : filter) {
        auto it = labels.find(k);
        if (it == labels.end() || it->second != v) {
            return false;
        }
    }
    return true;
}

}  // namespace

std::vector<SeriesSlice> SeriesStore::query_range(const std::string& name, const Labels& filter,
                                                  sim::SimTime t0, sim::SimTime t1) const {
    if (t1 < t0) {
        throw SimError(Err::internal, "query_range: t1 < t0");
    }
    std::vector<SeriesSlice> out;
    for (const auto& [key, points] : series_) {
        if (key.name != name || !labels_match(filter, key.labels)) {
            continue;
        }
        SeriesSlice slice;
        slice.key = key;
        for (const auto& point : points) {
            if (point.t >= t0 && point.t <= t1) {
                slice.points.push_back(point);
            }
        }
        out.push_back(std::move(slice));
    }
    return out;
}

std::vector<SeriesSlice> SeriesStore::select(const std::vector<SeriesSelector>& selection) const {
    if (selection.empty()) {
        return all();
    }
    std::vector<SeriesSlice> out;
    for (const auto& selector : selection) {
        for (const auto& [key, points] : series_) {
            if (key.name != selector.name || !labels_match(selector.filter, key.labels)) {
                continue;
            }
            out.push_back(SeriesSlice{key, points});
        }
    }
    return out;
}

std::vector<SeriesSlice> SeriesStore::all() const {
    std::vector<SeriesSlice> out;
    for (const auto& [key, points] : series_) {
        out.push_back(SeriesSlice{key, points});
    }
    return out;
}

nlohmann::json TsdbDump::to_json() const {
    nlohmann::json doc;
    doc["meta"] = {{"scenario", scenario}, {"seed", seed}, {"duration_s", duration_s}};
    doc["series"] = nlohmann::json::array();
    for (const auto& [key, points] : store.series()) {
        nlohmann::json entry;
        entry["name"] = key.name;
        entry["labels"] = nlohmann::json::object();
        for (const auto& [k, v] : key.labels) {
            entry["labels"][k] = v;
        }
        entry["points"] = nlohmann::json::array();
        for (const auto& point : points) {
            entry["points"].push_back({point.t.seconds(), point.value});
        }
        doc["series"].push_back(std::move(entry));
    }
    return doc;
}

std::string TsdbDump::to_bytes() const {
    return to_json().dump(2) + "\n";
}

TsdbDump TsdbDump::from_json(const nlohmann::json& doc) {
    TsdbDump dump;
    if (!doc.is_object() || !doc.contains("meta") || !doc.contains("series")) {
        throw SimError(Err::schema_error, "tsdb dump: expected meta and series");
    }
    const auto& meta = doc["meta"];
    dump.scenario = meta.value("scenario", "");
    dump.seed = meta.value("seed", std::uint64_t{0});
    dump.duration_s = meta.value("duration_s", 0.0);
    for (const auto& entry : doc["series"]) {
        SeriesKey key;
        key.name = entry.at("name").get<std::string>();
        for (const auto& [k, v] : entry.at("labels").items()) {
            key.labels[k] = v.get<std::string>();
        }
        for (const auto& point : entry.at("points")) {
            dump.store.append(key, sim::SimTime::from_seconds(point.at(0).get<double>()),
                              point.at(1).get<double>());
        }
    }
    return dump;
}

TsdbDump TsdbDump::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw SimError(Err::io_error, "cannot open " + path);
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw SimError(Err::parse_error, path + ": " + e.what());
    }
    return from_json(doc);
}

void TsdbDump::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw SimError(Err::io_error, "cannot write " + path);
    }
    out << to_bytes();
}

}  // namespace mecsim::mon
