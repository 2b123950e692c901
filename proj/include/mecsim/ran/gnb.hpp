#pragma once

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mecsim/cluster/cluster.hpp"
#include "mecsim/nf/core.hpp"
#include "mecsim/ran/link_tables.hpp"
#include "mecsim/sim/kernel.hpp"

namespace mecsim::ran {

struct GnbConfig {
    int cell_id = 1;
    std::string amf_address;  // filled by connect()
    double bandwidth_hz = 50e6;
    double overhead_factor = 0.9;
    double rx_gain_offset_db = 0;
    double snr_noise_std_db = 0;
    double default_snr_ref_db = 20;
    LinkTables tables;
};

struct UeContext {
    nf::UeId ue = 0;
    double snr_ref_db = 20;
    bool attached = false;
    std::string ue_ip;
};

struct UeStats {
    nf::UeId ue = 0;
    int cell_id = 1;
    double dl_bitrate_bps = 0;  // trailing 1 s window
    double ul_bitrate_bps = 0;
    int mcs_dl = 0;
    int mcs_ul = 0;
    int cqi = 0;
    double snr_db = 0;
};

struct FlowDemand {
    std::string flow;
    nf::UeId ue = 0;
    nf::Direction direction = nf::Direction::downlink;
    double offered_bps = 0;
};

/// gNB plus its attached UEs: NGAP-lite association through the exposed AMF
/// service, the gain -> SNR -> CQI -> MCS -> capacity chain, a per-UE cell
/// scheduler, and the stats snapshot backing the remote API.
class Gnb {
public:
    Gnb(sim::Kernel& kernel, cluster::Cluster& cluster, nf::CoreNetwork& core,
        GnbConfig config = {});

    /// Establish the NGAP-lite association via the service exposed at
    /// `address` ("ip:port"). Throws AmfUnreachable if nothing resolves.
    void connect(const std::string& address);
    bool connected() const { return !config_.amf_address.empty(); }

    UeContext ue_attach(nf::UeId ue);
    bool attached(nf::UeId ue) const;

    void set_rx_gain_offset(double offset_db);
    double rx_gain_offset() const { return config_.rx_gain_offset_db; }

    RadioLinkState compute_link(nf::UeId ue);

    /// Demand-proportional allocation capped by each UE's per-direction
    /// capacity; flows of one UE in one direction never exceed it in sum.
    std::map<std::string, double> schedule_cell(const std::vector<FlowDemand>& demands);

    void record_delivery(nf::UeId ue, nf::Direction direction, double bytes);

    std::vector<UeStats> ran_stats() const { return stats_snapshot_; }

    /// Per-tick refresh: link states first (pre-delivery), then after traffic
    /// has delivered, the measurement windows and the stats snapshot.
    void on_tick_links(sim::SimTime t);
    void on_tick_stats(sim::SimTime t);

    const GnbConfig& config() const { return config_; }
    GnbConfig& config_mut() { return config_; }

private:
    struct UeRuntime {
        UeContext context;
        RadioLinkState link;
        std::uint64_t link_tick = 0;
        bool link_valid = false;
        double noise_db = 0;  // one draw per tick, reused by repeat computes
        std::deque<double> dl_window;  // per-tick delivered bytes, most recent last
        std::deque<double> ul_window;
        double dl_tick_bytes = 0;
        double ul_tick_bytes = 0;
    };

    RadioLinkState compute_link_now(UeRuntime& runtime);
    double window_bitrate(const std::deque<double>& window) const;

    sim::Kernel& kernel_;
    cluster::Cluster& cluster_;
    nf::CoreNetwork& core_;
    GnbConfig config_;
    std::map<nf::UeId, UeRuntime> ues_;
    std::vector<UeStats> stats_snapshot_;

    static constexpr std::size_t window_ticks = sim::SimTime::ticks_per_second;
};

}  // namespace mecsim::ran
