#pragma once

#include <map>
#include <string>
#include <vector>

#include "mecsim/cluster/cluster.hpp"
#include "mecsim/nf/core.hpp"
#include "mecsim/ran/gnb.hpp"
#include "mecsim/sim/kernel.hpp"

namespace mecsim::traffic {

using FlowId = std::string;

struct FlowSpec {
    FlowId id;
    nf::UeId ue = 0;
    nf::Direction direction = nf::Direction::downlink;
    double rate_bps = 0;
    std::string server_node;  // must host an IPERF-SERVER workload
};

enum class FlowState { running, stopped };

struct FlowRuntime {
    FlowSpec spec;
    FlowState state = FlowState::running;
    sim::SimTime started_at;
    sim::SimTime stopped_at;
    double delivered_bytes_total = 0;
    std::string stop_reason;
    std::uint64_t start_seq = 0;
};

/// iperf-like constant-bitrate UDP flows. Delivery happens once per tick
/// through the cell scheduler and the UE's session anchor; a flow started at
/// tick t delivers its first bytes in tick t's delivery pass.
class Traffic {
public:
    Traffic(sim::Kernel& kernel, cluster::Cluster& cluster, nf::CoreNetwork& core, ran::Gnb& gnb);

    FlowId start_flow(const FlowSpec& spec);
    FlowRuntime stop_flow(const FlowId& id);
    const FlowRuntime& flow(const FlowId& id) const;
    bool has_active_flows(nf::UeId ue) const;

    /// Deliver dt_ticks worth of every running flow; returns bytes per flow.
    /// Flows whose session vanished are auto-stopped with a recorded reason.
    std::map<FlowId, double> tick_deliver(sim::SimTime t, std::uint64_t dt_ticks = 1);

private:
    sim::Kernel& kernel_;
    cluster::Cluster& cluster_;
    nf::CoreNetwork& core_;
    ran::Gnb& gnb_;
    std::map<FlowId, FlowRuntime> flows_;
    std::uint64_t next_start_seq_ = 0;
};

}  // namespace mecsim::traffic
