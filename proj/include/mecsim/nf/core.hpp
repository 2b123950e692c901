#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mecsim/errors.hpp"
#include "mecsim/nf/types.hpp"
#include "mecsim/sim/kernel.hpp"

namespace mecsim::cluster {
class Cluster;
}

namespace mecsim::nf {

struct NfInstance {
    InstanceId id = 0;
    NfType type = NfType::nrf;
    std::string node;
    std::string sbi_address;
    bool installed = false;
    bool registered = false;
    std::optional<Locality> locality;
    std::uint64_t reg_seq = 0;
};

struct PduSession {
    SessionId id = 0;
    UeId ue = 0;
    InstanceId upf = 0;
    Locality locality = Locality::core;
    std::string ue_ip;
    bool active = false;
    sim::SimTime established_at;
    std::optional<sim::SimTime> released_at;
};

/// Per-UPF anchor state. IPs are handed out sequentially from host .2 and
/// never reused within a run.
struct UpfState {
    InstanceId instance = 0;
    Locality locality = Locality::core;
    std::uint32_t pool_base = 0;  // network byte order host part zeroed
    std::uint32_t next_host = 2;
    double forwarded_bytes = 0;
    std::vector<SessionId> anchored;
};

struct UeRegistration {
    UeId ue = 0;
    InstanceId amf = 0;
    std::optional<SessionId> session;
};

/// One request over the in-simulator service-based interface bus.
struct SbiExchange {
    std::uint64_t correlation = 0;
    InstanceId requester = 0;
    NfType target_type = NfType::nrf;
    InstanceId target = 0;
    std::string verb;
    std::string path;
    nlohmann::json request;
    int status = 0;
    nlohmann::json response;
};

std::string ipv4_to_string(std::uint32_t address);
constexpr std::uint32_t core_pool_base = (10u << 24) | (45u << 16);  // 10.45.0.0/16
constexpr std::uint32_t edge_pool_base = (10u << 24) | (46u << 16);  // 10.46.0.0/16

/// Control and user plane of the simulated 5G core: NRF registry, UE
/// registration through the AMF, SMF session management with UPF selection
/// and re-selection, and per-UPF packet anchors.
class CoreNetwork {
public:
    explicit CoreNetwork(sim::Kernel& kernel) : kernel_(kernel) {}

    void wire(cluster::Cluster* cluster) { cluster_ = cluster; }
    void set_flow_guard(std::function<bool(UeId)> guard) { has_active_flows_ = std::move(guard); }

    // -- instance lifecycle (driven by chart installs) --
    InstanceId create_instance(NfType type, const std::string& node);
    void remove_instance(InstanceId id);
    const NfInstance* instance(InstanceId id) const;
    bool installed(InstanceId id) const;

    // -- NRF --
    void nrf_register(InstanceId id, std::optional<Locality> locality = {});
    void nrf_deregister(InstanceId id);
    std::vector<NfInstance> nrf_discover(NfType type, std::optional<Locality> locality = {}) const;

    // -- control plane --
    UeRegistration amf_register_ue(UeId ue);
    bool ue_registered(UeId ue) const { return registrations_.contains(ue); }
    PduSession smf_establish_session(UeId ue, Locality locality);
    PduSession smf_reassign_upf(UeId ue, Locality target);

    // -- user plane --
    double upf_forward(SessionId session, double bytes, Direction direction);

    // -- views --
    const PduSession* active_session(UeId ue) const;
    const PduSession* session(SessionId id) const;
    std::vector<PduSession> session_table() const;
    const UpfState* upf_state(InstanceId id) const;
    const std::vector<SbiExchange>& sbi_log() const { return sbi_log_; }

private:
    /// Routed request between registered instances; responses are paired by
    /// correlation id. Throws NotRegistered when either side is missing.
    SbiExchange sbi_request(InstanceId requester, NfType target_type,
                            std::optional<Locality> target_locality, const std::string& verb,
                            const std::string& path, nlohmann::json body);
    nlohmann::json handle_smf(const std::string& verb, const std::string& path,
                              const nlohmann::json& body);
    nlohmann::json handle_upf(InstanceId upf, const std::string& verb, const std::string& path,
                              const nlohmann::json& body);

    PduSession establish_via_smf(InstanceId smf, UeId ue, Locality locality);
    InstanceId find_registered(NfType type, std::optional<Locality> locality) const;

    sim::Kernel& kernel_;
    cluster::Cluster* cluster_ = nullptr;
    std::function<bool(UeId)> has_active_flows_;

    InstanceId next_instance_ = 1;
    SessionId next_session_ = 1;
    std::uint64_t next_reg_seq_ = 1;
    std::uint64_t next_correlation_ = 1;

    std::map<InstanceId, NfInstance> instances_;
    std::map<InstanceId, UpfState> upfs_;
    std::map<UeId, UeRegistration> registrations_;
    std::map<SessionId, PduSession> sessions_;
    std::map<UeId, SessionId> active_by_ue_;
    std::vector<SbiExchange> sbi_log_;
};

}  // namespace mecsim::nf
