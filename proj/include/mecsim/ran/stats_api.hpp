#pragma once

#include <functional>

#include <json.hpp>

#include "mecsim/ran/gnb.hpp"

namespace mecsim::ran {

/// Handles one message of the persistent stats/control API. The same handler
/// backs the in-process fast path and the WebSocket server; `apply_config`
/// decides whether a config change is applied directly or enqueued as a
/// kernel event.
///
/// Requests and responses are single JSON objects:
///   {"message":"stats","message_id":id}
///   {"message":"config_set","message_id":id,"rx_gain_offset_db":n}
/// Unknown message values yield {"error":"unknown_message","message_id":id}.
class StatsApi {
public:
    using StatsSource = std::function<std::pair<double, std::vector<UeStats>>()>;
    using ConfigSink = std::function<void(double rx_gain_offset_db)>;

    StatsApi(StatsSource stats, ConfigSink apply_config)
        : stats_(std::move(stats)), apply_config_(std::move(apply_config)) {}

    nlohmann::json handle(const nlohmann::json& request) const;

private:
    StatsSource stats_;
    ConfigSink apply_config_;
};

nlohmann::json ue_stats_to_json(const UeStats& stats);

}  // namespace mecsim::ran
