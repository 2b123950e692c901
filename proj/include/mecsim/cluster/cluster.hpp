#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mecsim/cluster/chart.hpp"
#include "mecsim/errors.hpp"
#include "mecsim/nf/types.hpp"
#include "mecsim/sim/kernel.hpp"

namespace mecsim::nf {
class CoreNetwork;
}

namespace mecsim::cluster {

struct ClusterParams {
    double node_cpu_base = 0.05;
    double transient_height = 0.3;
    double transient_duration_s = 5.0;
    double cpu_per_gbps = 0.15;
    double memory_base_bytes = 1073741824.0;        // 1 GiB
    double memory_per_instance_bytes = 134217728.0;  // 128 MiB per hosted workload
};

struct NodeState {
    std::string name;
    std::string address;
    double cpu_base = 0.05;
    double tx_bytes_total = 0;
    double rx_bytes_total = 0;
    std::set<nf::InstanceId> hosted;
};

enum class DeploymentState { installed, terminating, removed };

struct DeploymentHandle {
    std::string chart;
    std::vector<nf::InstanceId> instances;
    DeploymentState state = DeploymentState::installed;
};

struct ServiceExposure {
    std::string name;
    nf::InstanceId instance = 0;
    std::string address;  // cluster entry point: the master node
    int port = 0;
};

struct CpuTransient {
    std::string node;
    sim::SimTime start;
    double duration_s = 5.0;
    double height = 0.3;

    bool active_at(sim::SimTime t) const {
        auto end = start.ticks + static_cast<std::uint64_t>(duration_s * sim::SimTime::ticks_per_second);
        return t.ticks >= start.ticks && t.ticks < end;
    }
};

/// The four-node testbed: master, core, edge, monitoring. Owns chart
/// deployments, service exposures, and the per-node CPU/network model.
class Cluster {
public:
    Cluster(sim::Kernel& kernel, ClusterParams params = {});

    void wire(nf::CoreNetwork* core) { core_ = core; }

    const NodeState& node(const std::string& name) const;
    bool has_node(const std::string& name) const { return nodes_.contains(name); }
    std::vector<std::string> node_names() const;
    const std::string& master_address() const;

    DeploymentHandle install_chart(const Chart& chart);
    std::size_t uninstall_chart(const std::string& chart_name);
    const DeploymentHandle* deployment(const std::string& chart_name) const;

    ServiceExposure expose_service(const std::string& name, nf::InstanceId instance, int port);
    /// Both resolvers fail (NoSuchInstance) once the backing instance is gone.
    nf::InstanceId resolve_service(const std::string& name) const;
    nf::InstanceId resolve_service(const std::string& address, int port) const;
    const ServiceExposure* exposure(const std::string& name) const;
    /// First exposure whose backing instance is an installed NF of this type.
    std::optional<nf::InstanceId> find_exposed(nf::NfType type) const;

    double node_cpu_util(const std::string& name, sim::SimTime t) const;
    double node_memory_bytes(const std::string& name) const;
    void account_traffic(const std::string& name, double tx_bytes, double rx_bytes);

    bool has_installed(nf::NfType type, const std::string& node) const;
    std::map<std::string, int> installed_by_type(const std::string& node) const;

    /// Closes the current tick's forwarded-byte window; call once per tick
    /// after traffic delivery so the CPU model sees this tick's rate.
    void on_tick(sim::SimTime t);
    double forwarded_gbps(const std::string& name) const;

    const std::vector<CpuTransient>& transients() const { return transients_; }
    const ClusterParams& params() const { return params_; }

private:
    NodeState& node_mut(const std::string& name);

    sim::Kernel& kernel_;
    ClusterParams params_;
    std::map<std::string, NodeState> nodes_;
    std::map<std::string, DeploymentHandle> deployments_;
    std::map<std::string, ServiceExposure> exposures_;
    std::map<nf::InstanceId, double> workload_cpu_;
    std::vector<CpuTransient> transients_;
    std::map<std::string, double> tick_bytes_;
    std::map<std::string, double> forwarded_gbps_;
    nf::CoreNetwork* core_ = nullptr;
};

}  // namespace mecsim::cluster
