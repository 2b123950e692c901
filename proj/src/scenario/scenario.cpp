#include "mecsim/scenario/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "mecsim/util/doc.hpp"

namespace mecsim::scenario {

namespace {

constexpr std::pair<ActionType, const char*> action_names[] = {
    {ActionType::install_chart, "install_chart"},
    {ActionType::uninstall_chart, "uninstall_chart"},
    {ActionType::gnb_connect, "gnb_connect"},
    {ActionType::ue_attach, "ue_attach"},
    {ActionType::start_flow, "start_flow"},
    {ActionType::stop_flow, "stop_flow"},
    {ActionType::reassign_upf, "reassign_upf"},
    {ActionType::set_rx_gain_offset, "set_rx_gain_offset"},
};

[[noreturn]] void schema_fail(const std::string& where, const std::string& what) {
    throw SimError(Err::schema_error, where + ": " + what);
}

void require_string(const nlohmann::json& args, const std::string& where, const char* field) {
    if (!args.contains(field) || !args[field].is_string()) {
        schema_fail(where + "." + field, "expected string");
    }
}

void require_int(const nlohmann::json& args, const std::string& where, const char* field) {
    if (!args.contains(field) || !args[field].is_number_integer()) {
        schema_fail(where + "." + field, "expected integer");
    }
}

void require_number(const nlohmann::json& args, const std::string& where, const char* field) {
    if (!args.contains(field) || !args[field].is_number()) {
        schema_fail(where + "." + field, "expected number");
    }
}

void require_choice(const nlohmann::json& args, const std::string& where, const char* field,
                    std::initializer_list<const char*> choices) {
    require_string(args, where, field);
    const std::string value = args[field].get<std::string>();
    for (const char* choice : choices) {
        if (value == choice) {
            return;
        }
    }
    schema_fail(where + "." + field, "unexpected value '" + value + "'");
}

void validate_args(ActionType action, const nlohmann::json& args, const std::string& where) {
    switch (action) {
        case ActionType::install_chart:
            if (!args.contains("chart") && !args.contains("file")) {
                schema_fail(where + ".chart", "install_chart needs 'chart' or 'file'");
            }
            if (args.contains("chart")) require_string(args, where, "chart");
            if (args.contains("file")) require_string(args, where, "file");
            break;
        case ActionType::uninstall_chart:
            require_string(args, where, "chart");
            break;
        case ActionType::gnb_connect:
            if (!args.contains("address") && !args.contains("service")) {
                schema_fail(where + ".address", "gnb_connect needs 'address' or 'service'");
            }
            if (args.contains("address")) require_string(args, where, "address");
            if (args.contains("service")) require_string(args, where, "service");
            break;
        case ActionType::ue_attach:
            require_int(args, where, "ue");
            break;
        case ActionType::start_flow:
            require_string(args, where, "flow");
            require_int(args, where, "ue");
            require_choice(args, where, "direction", {"downlink", "uplink"});
            require_number(args, where, "rate_bps");
            if (args["rate_bps"].get<double>() <= 0) {
                schema_fail(where + ".rate_bps", "must be positive");
            }
            require_choice(args, where, "server", {"core", "edge"});
            break;
        case ActionType::stop_flow:
            require_string(args, where, "flow");
            break;
        case ActionType::reassign_upf:
            require_int(args, where, "ue");
            require_choice(args, where, "target", {"core", "edge"});
            break;
        case ActionType::set_rx_gain_offset:
            require_number(args, where, "offset_db");
            break;
    }
}

bool is_tenth_multiple(double s) {
    double scaled = s * 10.0;
    return std::abs(scaled - std::round(scaled)) < 1e-6;
}

}  // namespace

const char* to_string(ActionType action) {
    for (const auto& [value, name] : action_names) {
        if (value == action) return name;
    }
    return "?";
}

std::optional<ActionType> action_from_string(const std::string& s) {
    for (const auto& [value, name] : action_names) {
        if (s == name) return value;
    }
    return std::nullopt;
}

const std::vector<std::string>& known_override_keys() {
    static const std::vector<std::string> keys = {
        "radio.bandwidth_hz",
        "radio.overhead_factor",
        "radio.rx_gain_offset_db",
        "radio.snr_noise_std_db",
        "radio.snr_ref_db",
        "cluster.node_cpu_base",
        "cluster.transient_height",
        "cluster.transient_duration_s",
        "cluster.cpu_per_gbps",
        "cluster.memory_base_bytes",
        "cluster.memory_per_instance_bytes",
        "monitoring.scrape_interval_s",
    };
    return keys;
}

Scenario parse_scenario(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw SimError(Err::schema_error, "scenario: expected object");
    }
    Scenario scenario;
    if (!doc.contains("name") || !doc["name"].is_string()) {
        throw SimError(Err::schema_error, "scenario.name: expected string");
    }
    scenario.name = doc["name"].get<std::string>();
    if (!doc.contains("duration_s") || !doc["duration_s"].is_number() ||
        doc["duration_s"].get<double>() <= 0) {
        throw SimError(Err::schema_error, "scenario.duration_s: expected positive number");
    }
    scenario.duration_s = doc["duration_s"].get<double>();
    if (!is_tenth_multiple(scenario.duration_s)) {
        throw SimError(Err::schema_error, "scenario.duration_s: must be a multiple of 0.1");
    }

    if (doc.contains("overrides")) {
        if (!doc["overrides"].is_object()) {
            throw SimError(Err::schema_error, "scenario.overrides: expected object");
        }
        const auto& known = known_override_keys();
        for (const auto& [key, value] : doc["overrides"].items()) {
            if (std::find(known.begin(), known.end(), key) == known.end()) {
                throw SimError(Err::schema_error, "scenario.overrides: unknown key '" + key + "'");
            }
            if (!value.is_number()) {
                throw SimError(Err::schema_error,
                               "scenario.overrides." + key + ": expected number");
            }
            scenario.overrides[key] = value.get<double>();
        }
    }

    if (!doc.contains("events") || !doc["events"].is_array()) {
        throw SimError(Err::schema_error, "scenario.events: expected array");
    }
    std::size_t index = 0;
    for (const auto& entry : doc["events"]) {
        std::string where = "events[" + std::to_string(index) + "]";
        if (!entry.is_object()) {
            schema_fail(where, "expected object");
        }
        ScenarioEvent event;
        if (!entry.contains("at_s") || !entry["at_s"].is_number()) {
            schema_fail(where + ".at_s", "expected number");
        }
        event.at_s = entry["at_s"].get<double>();
        if (event.at_s < 0 || !is_tenth_multiple(event.at_s)) {
            schema_fail(where + ".at_s", "must be a non-negative multiple of 0.1");
        }
        if (event.at_s > scenario.duration_s) {
            schema_fail(where + ".at_s", "beyond scenario duration");
        }
        if (!entry.contains("action") || !entry["action"].is_string()) {
            schema_fail(where + ".action", "expected string");
        }
        auto action = action_from_string(entry["action"].get<std::string>());
        if (!action) {
            schema_fail(where + ".action",
                        "unknown action '" + entry["action"].get<std::string>() + "'");
        }
        event.action = *action;
        event.args = entry.value("args", nlohmann::json::object());
        if (!event.args.is_object()) {
            schema_fail(where + ".args", "expected object");
        }
        validate_args(event.action, event.args, where + ".args");
        scenario.events.push_back(std::move(event));
        ++index;
    }
    return scenario;
}

Scenario load_scenario_file(const std::string& path) {
    return parse_scenario(util::load_document(path));
}

nlohmann::json scenario_to_json(const Scenario& scenario) {
    nlohmann::json doc;
    doc["name"] = scenario.name;
    doc["duration_s"] = scenario.duration_s;
    if (!scenario.overrides.empty()) {
        doc["overrides"] = nlohmann::json::object();
        for (const auto& [key, value] : scenario.overrides) {
            doc["overrides"][key] = value;
        }
    }
    doc["events"] = nlohmann::json::array();
    for (const auto& event : scenario.events) {
        doc["events"].push_back(
            {{"at_s", event.at_s}, {"action", to_string(event.action)}, {"args", event.args}});
    }
    return doc;
}

namespace {

ScenarioEvent make_event(double at_s, ActionType action, nlohmann::json args) {
    return ScenarioEvent{at_s, action, std::move(args)};
}

}  // namespace

Scenario builtin_experiment1() {
    Scenario scenario;
    scenario.name = "experiment1";
    scenario.duration_s = 160;
    auto& events = scenario.events;
    events.push_back(make_event(10, ActionType::install_chart, {{"chart", "open5gs-core"}}));
    events.push_back(make_event(10, ActionType::install_chart, {{"chart", "monitoring"}}));
    events.push_back(make_event(10, ActionType::gnb_connect, {{"address", "192.168.1.10:38412"}}));
    events.push_back(make_event(10, ActionType::ue_attach, {{"ue", 1}}));
    events.push_back(make_event(10, ActionType::ue_attach, {{"ue", 2}}));
    events.push_back(make_event(30, ActionType::start_flow,
                                {{"flow", "ue1-dl"},
                                 {"ue", 1},
                                 {"direction", "downlink"},
                                 {"rate_bps", 100e6},
                                 {"server", "core"}}));
    events.push_back(make_event(60, ActionType::start_flow,
                                {{"flow", "ue2-dl-core"},
                                 {"ue", 2},
                                 {"direction", "downlink"},
                                 {"rate_bps", 100e6},
                                 {"server", "core"}}));
    events.push_back(make_event(90, ActionType::stop_flow, {{"flow", "ue2-dl-core"}}));
    events.push_back(make_event(90, ActionType::reassign_upf, {{"ue", 2}, {"target", "edge"}}));
    events.push_back(make_event(100, ActionType::start_flow,
                                {{"flow", "ue2-dl-edge"},
                                 {"ue", 2},
                                 {"direction", "downlink"},
                                 {"rate_bps", 100e6},
                                 {"server", "edge"}}));
    events.push_back(make_event(130, ActionType::stop_flow, {{"flow", "ue1-dl"}}));
    events.push_back(make_event(130, ActionType::stop_flow, {{"flow", "ue2-dl-edge"}}));
    events.push_back(make_event(140, ActionType::uninstall_chart, {{"chart", "open5gs-core"}}));
    return scenario;
}

Scenario builtin_experiment2() {
    Scenario scenario;
    scenario.name = "experiment2";
    scenario.duration_s = 130;
    auto& events = scenario.events;
    events.push_back(make_event(0, ActionType::install_chart, {{"chart", "open5gs-core"}}));
    events.push_back(make_event(0, ActionType::install_chart, {{"chart", "monitoring"}}));
    events.push_back(make_event(0, ActionType::gnb_connect, {{"address", "192.168.1.10:38412"}}));
    events.push_back(make_event(0, ActionType::ue_attach, {{"ue", 1}}));
    events.push_back(make_event(10, ActionType::start_flow,
                                {{"flow", "ue1-ul"},
                                 {"ue", 1},
                                 {"direction", "uplink"},
                                 {"rate_bps", 120e6},
                                 {"server", "core"}}));
    events.push_back(make_event(40, ActionType::set_rx_gain_offset, {{"offset_db", -4}}));
    events.push_back(make_event(70, ActionType::set_rx_gain_offset, {{"offset_db", -8}}));
    events.push_back(make_event(100, ActionType::set_rx_gain_offset, {{"offset_db", -12}}));
    return scenario;
}

}  // namespace mecsim::scenario
