#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mecsim/errors.hpp"

namespace mecsim::scenario {

enum class ActionType {
    install_chart,
    uninstall_chart,
    gnb_connect,
    ue_attach,
    start_flow,
    stop_flow,
    reassign_upf,
    set_rx_gain_offset,
};

const char* to_string(ActionType action);
std::optional<ActionType> action_from_string(const std::string& s);

struct ScenarioEvent {
    double at_s = 0;  // multiple of 0.1
    ActionType action = ActionType::install_chart;
    nlohmann::json args;
};

struct Scenario {
    std::string name;
    double duration_s = 0;
    std::vector<ScenarioEvent> events;
    std::map<std::string, double> overrides;
};

/// Validate and build a scenario from its JSON form. Throws SchemaError
/// naming the offending event index and field.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario_file(const std::string& path);
nlohmann::json scenario_to_json(const Scenario& scenario);

/// The two bundled experiment timelines (also shipped under scenarios/).
Scenario builtin_experiment1();
Scenario builtin_experiment2();

const std::vector<std::string>& known_override_keys();

}  // namespace mecsim::scenario
