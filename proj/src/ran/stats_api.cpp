#include "mecsim/ran/stats_api.hpp"

namespace mecsim::ran {

nlohmann::json ue_stats_to_json(const UeStats& stats) {
    return {{"ue_id", stats.ue},
            {"cell_id", stats.cell_id},
            {"dl_bitrate", stats.dl_bitrate_bps},
            {"ul_bitrate", stats.ul_bitrate_bps},
            {"mcs_dl", stats.mcs_dl},
            {"mcs_ul", stats.mcs_ul},
            {"cqi", stats.cqi},
            {"snr", stats.snr_db}};
}

nlohmann::json StatsApi::handle(const nlohmann::json& request) const {
    std::string message_id;
    if (request.is_object() && request.contains("message_id") &&
        request["message_id"].is_string()) {
        message_id = request["message_id"].get<std::string>();
    }
    if (!request.is_object() || !request.contains("message") || !request["message"].is_string()) {
        return {{"error", "unknown_message"}, {"message_id", message_id}};
    }
    const std::string message = request["message"].get<std::string>();

    if (message == "stats") {
        auto [time_s, ue_list] = stats_();
        nlohmann::json ues = nlohmann::json::array();
        for (const auto& stats : ue_list) {
            ues.push_back(ue_stats_to_json(stats));
        }
        return {{"message", "stats"},
                {"message_id", message_id},
                {"time", time_s},
                {"ue_list", std::move(ues)}};
    }
    if (message == "config_set") {
        if (!request.contains("rx_gain_offset_db") || !request["rx_gain_offset_db"].is_number()) {
            return {{"error", "unknown_message"}, {"message_id", message_id}};
        }
        apply_config_(request["rx_gain_offset_db"].get<double>());
        return {{"message", "config_set"}, {"message_id", message_id}, {"ok", true}};
    }
    return {{"error", "unknown_message"}, {"message_id", message_id}};
}

}  // namespace mecsim::ran
