#include "mecsim/cluster/cluster.hpp"

#include <algorithm>

#include "mecsim/nf/core.hpp"

namespace mecsim::cluster {

Cluster::Cluster(sim::Kernel& kernel, ClusterParams params)
    : kernel_(kernel), params_(params) {
    const std::pair<const char*, const char*> layout[] = {
        {"master", "192.168.1.10"},
        {"core", "192.168.1.11"},
        {"edge", "192.168.1.12"},
        {"monitoring", "192.168.1.13"},
    };
    for (const auto& [name, address] : layout) {
        NodeState node;
        node.name = name;
        node.address = address;
        node.cpu_base = params_.node_cpu_base;
        nodes_.emplace(name, std::move(node));
        tick_bytes_[name] = 0;
        forwarded_gbps_[name] = 0;
    }
}

const NodeState& Cluster::node(const std::string& name) const {
    auto it = nodes_.find(name);
    if (it == nodes_.end()) {
        throw SimError(Err::unknown_node, name);
    }
    return it->second;
}

NodeState& Cluster::node_mut(const std::string& name) {
    auto it = nodes_.find(name);
    if (it == nodes_.end()) {
        throw SimError(Err::unknown_node, name);
    }
    return it->second;
}

std::vector<std::string> Cluster::node_names() const {
    return {"master", "core", "edge", "monitoring"};
}

const std::string& Cluster::master_address() const {
    return nodes_.at("master").address;
}

DeploymentHandle Cluster::install_chart(const Chart& chart) {
    auto existing = deployments_.find(chart.name);
    if (existing != deployments_.end() && existing->second.state == DeploymentState::installed) {
        throw SimError(Err::duplicate_chart, chart.name);
    }
    for (const auto& workload : chart.workloads) {
        if (!nodes_.contains(workload.node)) {
            throw SimError(Err::unknown_node, workload.node);
        }
    }
    if (!core_) {
        throw SimError(Err::internal, "cluster not wired to a core network");
    }

    DeploymentHandle handle;
    handle.chart = chart.name;
    std::set<std::string> touched;
    for (const auto& workload : chart.workloads) {
        nf::InstanceId id = core_->create_instance(workload.type, workload.node);
        node_mut(workload.node).hosted.insert(id);
        workload_cpu_[id] = workload.cpu_base;
        if (nf::registers_with_nrf(workload.type)) {
            std::optional<nf::Locality> locality;
            if (workload.type == nf::NfType::upf) {
                locality = nf::locality_from_string(workload.node);
                if (!locality) {
                    locality = nf::Locality::core;
                }
            }
            core_->nrf_register(id, locality);
        }
        handle.instances.push_back(id);
        touched.insert(workload.node);
        // the NGAP entry point; mirrors the fixed service in front of the AMF pod
        if (workload.type == nf::NfType::amf && !exposures_.contains("amf-ngap")) {
            expose_service("amf-ngap", id, 38412);
        }
    }
    for (const auto& name : touched) {
        transients_.push_back(CpuTransient{name, kernel_.now(), params_.transient_duration_s,
                                           params_.transient_height});
    }
    deployments_[chart.name] = handle;
    return handle;
}

std::size_t Cluster::uninstall_chart(const std::string& chart_name) {
    auto it = deployments_.find(chart_name);
    if (it == deployments_.end()) {
        throw SimError(Err::no_such_instance, "chart " + chart_name);
    }
    DeploymentHandle& handle = it->second;
    if (handle.state != DeploymentState::installed) {
        throw SimError(Err::already_removed, chart_name);
    }
    handle.state = DeploymentState::terminating;
    std::set<std::string> touched;
    for (nf::InstanceId id : handle.instances) {
        const nf::NfInstance* instance = core_->instance(id);
        if (instance && instance->installed) {
            touched.insert(instance->node);
            node_mut(instance->node).hosted.erase(id);
            workload_cpu_.erase(id);
            core_->remove_instance(id);
        }
    }
    for (const auto& name : touched) {
        transients_.push_back(CpuTransient{name, kernel_.now(), params_.transient_duration_s,
                                           params_.transient_height});
    }
    handle.state = DeploymentState::removed;
    return handle.instances.size();
}

const DeploymentHandle* Cluster::deployment(const std::string& chart_name) const {
    auto it = deployments_.find(chart_name);
    return it == deployments_.end() ? nullptr : &it->second;
}

ServiceExposure Cluster::expose_service(const std::string& name, nf::InstanceId instance,
                                        int port) {
    if (!core_ || !core_->installed(instance)) {
        throw SimError(Err::no_such_instance, "instance " + std::to_string(instance));
    }
    for (const auto& [existing_name, exposure] : exposures_) {
        if (exposure.port == port) {
            throw SimError(Err::port_in_use, std::to_string(port));
        }
    }
    ServiceExposure exposure{name, instance, master_address(), port};
    exposures_[name] = exposure;
    return exposure;
}

nf::InstanceId Cluster::resolve_service(const std::string& name) const {
    auto it = exposures_.find(name);
    if (it == exposures_.end()) {
        throw SimError(Err::no_such_instance, "service " + name);
    }
    if (!core_ || !core_->installed(it->second.instance)) {
        throw SimError(Err::no_such_instance, "service " + name + " backing instance removed");
    }
    return it->second.instance;
}

nf::InstanceId Cluster::resolve_service(const std::string& address, int port) const {
    for (const auto& [name, exposure] : exposures_) {
        if (exposure.address == address && exposure.port == port) {
            return resolve_service(name);
        }
    }
    throw SimError(Err::no_such_instance, address + ":" + std::to_string(port));
}

const ServiceExposure* Cluster::exposure(const std::string& name) const {
    auto it = exposures_.find(name);
    return it == exposures_.end() ? nullptr : &it->second;
}

std::optional<nf::InstanceId> Cluster::find_exposed(nf::NfType type) const {
    for (const auto& [name, exposure] : exposures_) {
        const nf::NfInstance* instance = core_ ? core_->instance(exposure.instance) : nullptr;
        if (instance && instance->installed && instance->type == type) {
            return exposure.instance;
        }
    }
    return std::nullopt;
}

double Cluster::node_cpu_util(const std::string& name, sim::SimTime t) const {
    const NodeState& state = node(name);
    double util = state.cpu_base;
    for (nf::InstanceId id : state.hosted) {
        auto it = workload_cpu_.find(id);
        if (it != workload_cpu_.end()) {
            util += it->second;
        }
    }
    for (const auto& transient : transients_) {
        if (transient.node == name && transient.active_at(t)) {
            util += transient.height;
        }
    }
    util += params_.cpu_per_gbps * forwarded_gbps_.at(name);
    return std::clamp(util, 0.0, 1.0);
}

double Cluster::node_memory_bytes(const std::string& name) const {
    const NodeState& state = node(name);
    return params_.memory_base_bytes +
           params_.memory_per_instance_bytes * static_cast<double>(state.hosted.size());
}

void Cluster::account_traffic(const std::string& name, double tx_bytes, double rx_bytes) {
    if (tx_bytes < 0 || rx_bytes < 0) {
        throw SimError(Err::internal, "negative traffic accounting");
    }
    NodeState& state = node_mut(name);
    state.tx_bytes_total += tx_bytes;
    state.rx_bytes_total += rx_bytes;
    tick_bytes_[name] += tx_bytes + rx_bytes;
}

bool Cluster::has_installed(nf::NfType type, const std::string& name) const {
    const NodeState& state = node(name);
    for (nf::InstanceId id : state.hosted) {
        const nf::NfInstance* instance = core_ ? core_->instance(id) : nullptr;
        if (instance && instance->installed && instance->type == type) {
            return true;
        }
    }
    return false;
}

std::map<std::string, int> Cluster::installed_by_type(const std::string& name) const {
    std::map<std::string, int> counts;
    const NodeState& state = node(name);
    for (nf::InstanceId id : state.hosted) {
        const nf::NfInstance* instance = core_ ? core_->instance(id) : nullptr;
        if (instance && instance->installed) {
            ++counts[nf::to_string(instance->type)];
        }
    }
    return counts;
}

void Cluster::on_tick(sim::SimTime) {
    constexpr double tick_seconds = 1.0 / sim::SimTime::ticks_per_second;
    for (auto& [name, bytes] : tick_bytes_) {
        forwarded_gbps_[name] = bytes * 8.0 / tick_seconds / 1e9;
        bytes = 0;
    }
}

double Cluster::forwarded_gbps(const std::string& name) const {
    auto it = forwarded_gbps_.find(name);
    if (it == forwarded_gbps_.end()) {
        throw SimError(Err::unknown_node, name);
    }
    return it->second;
}

}  // namespace mecsim::cluster
