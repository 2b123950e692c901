#include "mecsim/mon/scraper.hpp"

namespace mecsim::mon {

NodeExporter::NodeExporter(cluster::Cluster& cluster, std::string node)
    : cluster_(cluster), node_(std::move(node)), id_("node-exporter-" + node_) {
    registry_.define({"node_cpu_utilization_ratio", MetricKind::gauge,
                      "node CPU utilization in [0,1]", {"node"}});
    registry_.define({"node_memory_bytes", MetricKind::gauge, "node memory footprint", {"node"}});
    registry_.define({"node_network_transmit_bytes_total", MetricKind::counter,
                      "bytes sent by the node", {"node"}});
    registry_.define({"node_network_receive_bytes_total", MetricKind::counter,
                      "bytes received by the node", {"node"}});
    registry_.define({"sim_nf_instances", MetricKind::gauge,
                      "installed workloads by NF type", {"node", "nf"}});
}

std::string NodeExporter::collect(sim::SimTime t) {
    const Labels node_label{{"node", node_}};
    registry_.set("node_cpu_utilization_ratio", node_label, cluster_.node_cpu_util(node_, t));
    registry_.set("node_memory_bytes", node_label, cluster_.node_memory_bytes(node_));
    registry_.set("node_network_transmit_bytes_total", node_label,
                  cluster_.node(node_).tx_bytes_total);
    registry_.set("node_network_receive_bytes_total", node_label,
                  cluster_.node(node_).rx_bytes_total);
    auto counts = cluster_.installed_by_type(node_);
    for (const auto& [type, count] : counts) {
        seen_nf_types_.insert(type);
    }
    for (const auto& type : seen_nf_types_) {
        auto it = counts.find(type);
        registry_.set("sim_nf_instances", {{"node", node_}, {"nf", type}},
                      it == counts.end() ? 0.0 : static_cast<double>(it->second));
    }
    return registry_.render();
}

RanSampler::RanSampler(cluster::Cluster& cluster, const ran::StatsApi& api)
    : cluster_(cluster), api_(api), id_("ran-sampler") {
    registry_.define({"ran_ue_downlink_bitrate_bps", MetricKind::gauge,
                      "UE downlink bitrate over the trailing second", {"ue", "cell"}});
    registry_.define({"ran_ue_uplink_bitrate_bps", MetricKind::gauge,
                      "UE uplink bitrate over the trailing second", {"ue", "cell"}});
    registry_.define({"ran_ue_mcs_dl", MetricKind::gauge, "downlink MCS index", {"ue", "cell"}});
    registry_.define({"ran_ue_mcs_ul", MetricKind::gauge, "uplink MCS index", {"ue", "cell"}});
    registry_.define({"ran_ue_cqi", MetricKind::gauge, "channel quality indicator", {"ue", "cell"}});
    registry_.define({"ran_ue_snr_db", MetricKind::gauge, "signal-to-noise ratio", {"ue", "cell"}});
}

std::size_t RanSampler::poll(sim::SimTime) {
    bool installed = false;
    for (const auto& node : cluster_.node_names()) {
        if (cluster_.has_installed(nf::NfType::sampler, node)) {
            installed = true;
            break;
        }
    }
    if (!installed) {
        throw SimError(Err::ran_api_down, "sampler workload not installed");
    }
    nlohmann::json request = {{"message", "stats"},
                              {"message_id", "sampler-" + std::to_string(poll_count_++)}};
    nlohmann::json response = api_.handle(request);
    if (response.contains("error")) {
        throw SimError(Err::ran_api_down, response["error"].get<std::string>());
    }

    for (const char* name : {"ran_ue_downlink_bitrate_bps", "ran_ue_uplink_bitrate_bps",
                             "ran_ue_mcs_dl", "ran_ue_mcs_ul", "ran_ue_cqi", "ran_ue_snr_db"}) {
        registry_.clear_values(name);
    }
    std::size_t updated = 0;
    for (const auto& ue : response.at("ue_list")) {
        Labels labels{{"ue", std::to_string(ue.at("ue_id").get<int>())},
                      {"cell", std::to_string(ue.at("cell_id").get<int>())}};
        registry_.set("ran_ue_downlink_bitrate_bps", labels, ue.at("dl_bitrate").get<double>());
        registry_.set("ran_ue_uplink_bitrate_bps", labels, ue.at("ul_bitrate").get<double>());
        registry_.set("ran_ue_mcs_dl", labels, ue.at("mcs_dl").get<double>());
        registry_.set("ran_ue_mcs_ul", labels, ue.at("mcs_ul").get<double>());
        registry_.set("ran_ue_cqi", labels, ue.at("cqi").get<double>());
        registry_.set("ran_ue_snr_db", labels, ue.at("snr").get<double>());
        updated += 6;
    }
    return updated;
}

std::string RanSampler::collect(sim::SimTime t) {
    poll(t);
    return registry_.render();
}

void Scraper::add_target(Exporter& exporter, double interval_s) {
    targets_.push_back(ScrapeTarget{exporter.id(), &exporter, interval_s});
}

std::size_t Scraper::scrape(const std::string& target_id, sim::SimTime t) {
    for (auto& target : targets_) {
        if (target.id == target_id) {
            return scrape_target(target, t);
        }
    }
    throw SimError(Err::internal, "unknown scrape target " + target_id);
}

std::size_t Scraper::scrape_target(ScrapeTarget& target, sim::SimTime t) {
    const Labels up_labels{{"target", target.id}};
    try {
        std::string text = target.exporter->collect(t);
        auto samples = parse_exposition(text);
        for (auto& sample : samples) {
            store_.append(SeriesKey{sample.name, sample.labels}, t, sample.value);
        }
        store_.append(SeriesKey{"up", up_labels}, t, 1);
        if (observer_) {
            observer_(target.id, t, true, text);
        }
        return samples.size();
    } catch (const SimError&) {
        store_.append(SeriesKey{"up", up_labels}, t, 0);
        if (observer_) {
            observer_(target.id, t, false, "");
        }
        return 0;
    }
}

void Scraper::on_tick(sim::SimTime t) {
    if (t.ticks == 0) {
        return;
    }
    for (auto& target : targets_) {
        auto interval_ticks = static_cast<std::uint64_t>(
            target.interval_s * sim::SimTime::ticks_per_second);
        if (interval_ticks == 0) {
            interval_ticks = 1;
        }
        if (t.ticks % interval_ticks == 0) {
            scrape_target(target, t);
        }
    }
}

}  // namespace mecsim::mon
