#include "mecsim/ran/gnb.hpp"

#include <numeric>

namespace mecsim::ran {

Gnb::Gnb(sim::Kernel& kernel, cluster::Cluster& cluster, nf::CoreNetwork& core, GnbConfig config)
    : kernel_(kernel), cluster_(cluster), core_(core), config_(std::move(config)) {
    config_.amf_address.clear();
}

namespace {

std::pair<std::string, int> split_address(const std::string& address) {
    auto colon = address.rfind(':');
    if (colon == std::string::npos) {
        throw SimError(Err::amf_unreachable, "bad address " + address);
    }
    return {address.substr(0, colon), std::stoi(address.substr(colon + 1))};
}

}  // namespace

void Gnb::connect(const std::string& address) {
    auto [host, port] = split_address(address);
    try {
        nf::InstanceId id = cluster_.resolve_service(host, port);
        const nf::NfInstance* instance = core_.instance(id);
        if (!instance || instance->type != nf::NfType::amf) {
            throw SimError(Err::amf_unreachable, address + " is not an AMF");
        }
    } catch (const SimError& e) {
        if (e.code() == Err::amf_unreachable) throw;
        throw SimError(Err::amf_unreachable, address);
    }
    config_.amf_address = address;
}

UeContext Gnb::ue_attach(nf::UeId ue) {
    if (!connected()) {
        throw SimError(Err::not_connected, "gNB has no NGAP association");
    }
    auto [host, port] = split_address(config_.amf_address);
    try {
        cluster_.resolve_service(host, port);
    } catch (const SimError&) {
        throw SimError(Err::amf_unreachable, config_.amf_address);
    }
    if (attached(ue)) {
        throw SimError(Err::already_attached, "ue " + std::to_string(ue));
    }
    auto registration = core_.amf_register_ue(ue);

    UeRuntime& runtime = ues_[ue];
    runtime.context.ue = ue;
    runtime.context.snr_ref_db = config_.default_snr_ref_db;
    runtime.context.attached = true;
    if (const nf::PduSession* session = core_.active_session(ue)) {
        runtime.context.ue_ip = session->ue_ip;
    }
    compute_link_now(runtime);
    return runtime.context;
}

bool Gnb::attached(nf::UeId ue) const {
    auto it = ues_.find(ue);
    return it != ues_.end() && core_.active_session(ue) != nullptr;
}

void Gnb::set_rx_gain_offset(double offset_db) {
    config_.rx_gain_offset_db = offset_db;
}

RadioLinkState Gnb::compute_link_now(UeRuntime& runtime) {
    double noise = 0;
    if (config_.snr_noise_std_db > 0) {
        if (!runtime.link_valid || runtime.link_tick != kernel_.now().ticks) {
            runtime.noise_db = kernel_.rng().normal(0.0, config_.snr_noise_std_db);
        }
        noise = runtime.noise_db;
    }
    double snr = runtime.context.snr_ref_db + config_.rx_gain_offset_db + noise;
    runtime.link = link_state_for_snr(config_.tables, snr, config_.bandwidth_hz,
                                      config_.overhead_factor);
    runtime.link_tick = kernel_.now().ticks;
    runtime.link_valid = true;
    return runtime.link;
}

RadioLinkState Gnb::compute_link(nf::UeId ue) {
    auto it = ues_.find(ue);
    if (it == ues_.end() || !attached(ue)) {
        throw SimError(Err::not_attached, "ue " + std::to_string(ue));
    }
    return compute_link_now(it->second);
}

std::map<std::string, double> Gnb::schedule_cell(const std::vector<FlowDemand>& demands) {
    std::map<std::string, double> allocations;
    // per (ue, direction) demand totals
    std::map<std::pair<nf::UeId, nf::Direction>, double> totals;
    for (const auto& demand : demands) {
        totals[{demand.ue, demand.direction}] += demand.offered_bps;
    }
    for (const auto& demand : demands) {
        auto it = ues_.find(demand.ue);
        if (it == ues_.end() || !attached(demand.ue)) {
            allocations[demand.flow] = 0;
            continue;
        }
        double capacity = it->second.link.capacity_bps;
        double total = totals[{demand.ue, demand.direction}];
        double share = total <= capacity ? demand.offered_bps
                                         : demand.offered_bps * capacity / total;
        allocations[demand.flow] = share;
    }
    return allocations;
}

void Gnb::record_delivery(nf::UeId ue, nf::Direction direction, double bytes) {
    auto it = ues_.find(ue);
    if (it == ues_.end()) {
        return;
    }
    if (direction == nf::Direction::downlink) {
        it->second.dl_tick_bytes += bytes;
    } else {
        it->second.ul_tick_bytes += bytes;
    }
}

double Gnb::window_bitrate(const std::deque<double>& window) const {
    double bytes = std::accumulate(window.begin(), window.end(), 0.0);
    return bytes * 8.0;  // window spans exactly one second
}

void Gnb::on_tick_links(sim::SimTime) {
    for (auto& [ue, runtime] : ues_) {
        if (attached(ue)) {
            compute_link_now(runtime);
        }
    }
}

void Gnb::on_tick_stats(sim::SimTime) {
    stats_snapshot_.clear();
    for (auto& [ue, runtime] : ues_) {
        runtime.dl_window.push_back(runtime.dl_tick_bytes);
        runtime.ul_window.push_back(runtime.ul_tick_bytes);
        runtime.dl_tick_bytes = 0;
        runtime.ul_tick_bytes = 0;
        while (runtime.dl_window.size() > window_ticks) runtime.dl_window.pop_front();
        while (runtime.ul_window.size() > window_ticks) runtime.ul_window.pop_front();
        if (!attached(ue)) {
            continue;
        }
        if (const nf::PduSession* session = core_.active_session(ue)) {
            runtime.context.ue_ip = session->ue_ip;
        }
        UeStats stats;
        stats.ue = ue;
        stats.cell_id = config_.cell_id;
        stats.dl_bitrate_bps = window_bitrate(runtime.dl_window);
        stats.ul_bitrate_bps = window_bitrate(runtime.ul_window);
        stats.mcs_dl = runtime.link.mcs;
        stats.mcs_ul = runtime.link.mcs;
        stats.cqi = runtime.link.cqi;
        stats.snr_db = runtime.link.snr_db;
        stats_snapshot_.push_back(stats);
    }
}

}  // namespace mecsim::ran
