#include "mecsim/traffic/traffic.hpp"

#include <algorithm>

namespace mecsim::traffic {

Traffic::Traffic(sim::Kernel& kernel, cluster::Cluster& cluster, nf::CoreNetwork& core,
                 ran::Gnb& gnb)
    : kernel_(kernel), cluster_(cluster), core_(core), gnb_(gnb) {
    core_.set_flow_guard([this](nf::UeId ue) { return has_active_flows(ue); });
}

FlowId Traffic::start_flow(const FlowSpec& spec) {
    if (spec.rate_bps <= 0) {
        throw SimError(Err::schema_error, "flow rate must be positive");
    }
    if (flows_.contains(spec.id)) {
        throw SimError(Err::duplicate_flow_id, spec.id);
    }
    if (!core_.active_session(spec.ue)) {
        throw SimError(Err::no_session, "ue " + std::to_string(spec.ue));
    }
    if (!cluster_.has_installed(nf::NfType::iperf_server, spec.server_node)) {
        throw SimError(Err::no_server, "no iperf server on node " + spec.server_node);
    }
    FlowRuntime runtime;
    runtime.spec = spec;
    runtime.state = FlowState::running;
    runtime.started_at = kernel_.now();
    runtime.start_seq = next_start_seq_++;
    flows_.emplace(spec.id, std::move(runtime));
    return spec.id;
}

FlowRuntime Traffic::stop_flow(const FlowId& id) {
    auto it = flows_.find(id);
    if (it == flows_.end()) {
        throw SimError(Err::no_such_flow, id);
    }
    if (it->second.state == FlowState::stopped) {
        throw SimError(Err::already_stopped, id);
    }
    it->second.state = FlowState::stopped;
    it->second.stopped_at = kernel_.now();
    it->second.stop_reason = "stopped";
    return it->second;
}

const FlowRuntime& Traffic::flow(const FlowId& id) const {
    auto it = flows_.find(id);
    if (it == flows_.end()) {
        throw SimError(Err::no_such_flow, id);
    }
    return it->second;
}

bool Traffic::has_active_flows(nf::UeId ue) const {
    return std::any_of(flows_.begin(), flows_.end(), [ue](const auto& entry) {
        return entry.second.state == FlowState::running && entry.second.spec.ue == ue;
    });
}

std::map<FlowId, double> Traffic::tick_deliver(sim::SimTime t, std::uint64_t dt_ticks) {
    std::map<FlowId, double> delivered;

    // running flows in start order; drop the ones whose anchor went away
    std::vector<FlowRuntime*> running;
    for (auto& [id, runtime] : flows_) {
        if (runtime.state != FlowState::running) {
            continue;
        }
        if (!core_.active_session(runtime.spec.ue) ||
            !cluster_.has_installed(nf::NfType::iperf_server, runtime.spec.server_node)) {
            runtime.state = FlowState::stopped;
            runtime.stopped_at = t;
            runtime.stop_reason = "session or server vanished";
            continue;
        }
        running.push_back(&runtime);
    }
    std::sort(running.begin(), running.end(),
              [](const FlowRuntime* a, const FlowRuntime* b) { return a->start_seq < b->start_seq; });

    std::vector<ran::FlowDemand> demands;
    demands.reserve(running.size());
    for (const FlowRuntime* runtime : running) {
        demands.push_back(ran::FlowDemand{runtime->spec.id, runtime->spec.ue,
                                          runtime->spec.direction, runtime->spec.rate_bps});
    }
    auto allocations = gnb_.schedule_cell(demands);

    const double dt_seconds = static_cast<double>(dt_ticks) / sim::SimTime::ticks_per_second;
    for (FlowRuntime* runtime : running) {
        double allocated_bps = allocations[runtime->spec.id];
        double bytes = allocated_bps * dt_seconds / 8.0;
        const nf::PduSession* session = core_.active_session(runtime->spec.ue);
        core_.upf_forward(session->id, bytes, runtime->spec.direction);
        gnb_.record_delivery(runtime->spec.ue, runtime->spec.direction, bytes);
        runtime->delivered_bytes_total += bytes;
        delivered[runtime->spec.id] = bytes;
    }
    return delivered;
}

}  // namespace mecsim::traffic
