#include "mecsim/nf/core.hpp"

#include <algorithm>

#include "mecsim/cluster/cluster.hpp"

namespace mecsim::nf {

std::string ipv4_to_string(std::uint32_t address) {
    return std::to_string((address >> 24) & 0xff) + "." + std::to_string((address >> 16) & 0xff) +
           "." + std::to_string((address >> 8) & 0xff) + "." + std::to_string(address & 0xff);
}

InstanceId CoreNetwork::create_instance(NfType type, const std::string& node) {
    InstanceId id = next_instance_++;
    NfInstance instance;
    instance.id = id;
    instance.type = type;
    instance.node = node;
    instance.sbi_address = "10.32.0." + std::to_string(id);
    instance.installed = true;
    instances_.emplace(id, std::move(instance));
    return id;
}

void CoreNetwork::remove_instance(InstanceId id) {
    auto it = instances_.find(id);
    if (it == instances_.end() || !it->second.installed) {
        throw SimError(Err::no_such_instance, std::to_string(id));
    }
    NfInstance& instance = it->second;
    if (instance.registered) {
        nrf_deregister(id);
    }
    instance.installed = false;
    if (instance.type == NfType::upf) {
        auto upf_it = upfs_.find(id);
        if (upf_it != upfs_.end()) {
            for (SessionId session_id : upf_it->second.anchored) {
                auto& session = sessions_.at(session_id);
                if (session.active) {
                    session.active = false;
                    session.released_at = kernel_.now();
                    active_by_ue_.erase(session.ue);
                    auto reg = registrations_.find(session.ue);
                    if (reg != registrations_.end()) {
                        reg->second.session.reset();
                    }
                }
            }
            upf_it->second.anchored.clear();
        }
    }
    if (instance.type == NfType::amf) {
        std::erase_if(registrations_, [id](const auto& entry) { return entry.second.amf == id; });
    }
}

const NfInstance* CoreNetwork::instance(InstanceId id) const {
    auto it = instances_.find(id);
    return it == instances_.end() ? nullptr : &it->second;
}

bool CoreNetwork::installed(InstanceId id) const {
    const NfInstance* inst = instance(id);
    return inst && inst->installed;
}

void CoreNetwork::nrf_register(InstanceId id, std::optional<Locality> locality) {
    auto it = instances_.find(id);
    if (it == instances_.end() || !it->second.installed) {
        throw SimError(Err::no_such_instance, std::to_string(id));
    }
    NfInstance& instance = it->second;
    if (instance.registered) {
        throw SimError(Err::duplicate_registration, std::to_string(id));
    }
    instance.registered = true;
    instance.reg_seq = next_reg_seq_++;
    instance.locality = locality;
    if (instance.type == NfType::upf && !upfs_.contains(id)) {
        UpfState upf;
        upf.instance = id;
        upf.locality = locality.value_or(Locality::core);
        upf.pool_base = upf.locality == Locality::core ? core_pool_base : edge_pool_base;
        upfs_.emplace(id, std::move(upf));
    }
}

void CoreNetwork::nrf_deregister(InstanceId id) {
    auto it = instances_.find(id);
    if (it == instances_.end() || !it->second.registered) {
        throw SimError(Err::not_registered, std::to_string(id));
    }
    it->second.registered = false;
}

std::vector<NfInstance> CoreNetwork::nrf_discover(NfType type,
                                                  std::optional<Locality> locality) const {
    std::vector<NfInstance> out;
    for (const auto& [id, instance] : instances_) {
        if (!instance.registered || instance.type != type) {
            continue;
        }
        if (locality && instance.locality != locality) {
            continue;
        }
        out.push_back(instance);
    }
    std::sort(out.begin(), out.end(),
              [](const NfInstance& a, const NfInstance& b) { return a.reg_seq < b.reg_seq; });
    return out;
}

InstanceId CoreNetwork::find_registered(NfType type, std::optional<Locality> locality) const {
    auto matches = nrf_discover(type, locality);
    if (matches.empty()) {
        throw SimError(Err::not_registered, std::string("no registered ") + to_string(type));
    }
    return matches.front().id;
}

UeRegistration CoreNetwork::amf_register_ue(UeId ue) {
    InstanceId amf = 0;
    if (cluster_) {
        auto exposed = cluster_->find_exposed(NfType::amf);
        if (!exposed) {
            throw SimError(Err::no_amf, "no AMF exposed");
        }
        amf = *exposed;
    } else {
        auto amfs = nrf_discover(NfType::amf);
        if (amfs.empty()) {
            throw SimError(Err::no_amf, "no AMF registered");
        }
        amf = amfs.front().id;
    }
    if (registrations_.contains(ue)) {
        throw SimError(Err::already_registered, "ue " + std::to_string(ue));
    }
    registrations_[ue] = UeRegistration{ue, amf, std::nullopt};
    auto exchange =
        sbi_request(amf, NfType::smf, std::nullopt, "POST", "/nsmf-pdusession/v1/sm-contexts",
                    {{"ue", ue}, {"locality", "core"}});
    UeRegistration& registration = registrations_[ue];
    registration.session = exchange.response.at("session_id").get<SessionId>();
    return registration;
}

PduSession CoreNetwork::smf_establish_session(UeId ue, Locality locality) {
    if (!registrations_.contains(ue)) {
        throw SimError(Err::not_registered, "ue " + std::to_string(ue));
    }
    InstanceId smf = find_registered(NfType::smf, std::nullopt);
    return establish_via_smf(smf, ue, locality);
}

PduSession CoreNetwork::establish_via_smf(InstanceId smf, UeId ue, Locality locality) {
    if (active_by_ue_.contains(ue)) {
        throw SimError(Err::session_exists, "ue " + std::to_string(ue));
    }
    auto upfs = nrf_discover(NfType::upf, locality);
    if (upfs.empty()) {
        throw SimError(Err::no_upf, std::string("no registered UPF at ") + to_string(locality));
    }
    InstanceId upf = upfs.front().id;

    SessionId session_id = next_session_++;
    auto exchange = sbi_request(smf, NfType::upf, locality, "POST", "/nupf/v1/sessions",
                                {{"session_id", session_id}, {"ue", ue}});

    PduSession session;
    session.id = session_id;
    session.ue = ue;
    session.upf = upf;
    session.locality = locality;
    session.ue_ip = exchange.response.at("ue_ip").get<std::string>();
    session.active = true;
    session.established_at = kernel_.now();
    sessions_.emplace(session_id, session);
    active_by_ue_[ue] = session_id;
    auto reg = registrations_.find(ue);
    if (reg != registrations_.end()) {
        reg->second.session = session_id;
    }
    return session;
}

PduSession CoreNetwork::smf_reassign_upf(UeId ue, Locality target) {
    auto active = active_by_ue_.find(ue);
    if (active == active_by_ue_.end()) {
        throw SimError(Err::no_such_session, "ue " + std::to_string(ue));
    }
    if (has_active_flows_ && has_active_flows_(ue)) {
        throw SimError(Err::flows_still_active, "ue " + std::to_string(ue));
    }
    if (nrf_discover(NfType::upf, target).empty()) {
        throw SimError(Err::no_upf, std::string("no registered UPF at ") + to_string(target));
    }
    InstanceId smf = find_registered(NfType::smf, std::nullopt);

    PduSession& old_session = sessions_.at(active->second);
    sbi_request(smf, NfType::upf, old_session.locality, "DELETE",
                "/nupf/v1/sessions/" + std::to_string(old_session.id),
                {{"session_id", old_session.id}});
    old_session.active = false;
    old_session.released_at = kernel_.now();
    active_by_ue_.erase(active);

    return establish_via_smf(smf, ue, target);
}

double CoreNetwork::upf_forward(SessionId session_id, double bytes, Direction direction) {
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) {
        throw SimError(Err::no_such_session, std::to_string(session_id));
    }
    PduSession& session = it->second;
    if (!session.active) {
        throw SimError(Err::session_released, std::to_string(session_id));
    }
    const NfInstance* upf = instance(session.upf);
    if (!upf || !upf->installed) {
        throw SimError(Err::upf_gone, std::to_string(session.upf));
    }
    upfs_.at(session.upf).forwarded_bytes += bytes;
    if (cluster_) {
        if (direction == Direction::downlink) {
            cluster_->account_traffic(upf->node, bytes, 0);
        } else {
            cluster_->account_traffic(upf->node, 0, bytes);
        }
    }
    return bytes;
}

const PduSession* CoreNetwork::active_session(UeId ue) const {
    auto it = active_by_ue_.find(ue);
    if (it == active_by_ue_.end()) {
        return nullptr;
    }
    return &sessions_.at(it->second);
}

const PduSession* CoreNetwork::session(SessionId id) const {
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : &it->second;
}

std::vector<PduSession> CoreNetwork::session_table() const {
    std::vector<PduSession> out;
    out.reserve(sessions_.size());
    for (const auto& [id, session] : sessions_) {
        out.push_back(session);
    }
    return out;
}

const UpfState* CoreNetwork::upf_state(InstanceId id) const {
    auto it = upfs_.find(id);
    return it == upfs_.end() ? nullptr : &it->second;
}

SbiExchange CoreNetwork::sbi_request(InstanceId requester, NfType target_type,
                                     std::optional<Locality> target_locality,
                                     const std::string& verb, const std::string& path,
                                     nlohmann::json body) {
    const NfInstance* from = instance(requester);
    if (!from || !from->registered) {
        throw SimError(Err::not_registered, "requester " + std::to_string(requester));
    }
    InstanceId target = find_registered(target_type, target_locality);

    SbiExchange exchange;
    exchange.correlation = next_correlation_++;
    exchange.requester = requester;
    exchange.target_type = target_type;
    exchange.target = target;
    exchange.verb = verb;
    exchange.path = path;
    exchange.request = std::move(body);

    switch (target_type) {
        case NfType::smf:
            exchange.response = handle_smf(verb, path, exchange.request);
            exchange.status = 201;
            break;
        case NfType::upf:
            exchange.response = handle_upf(target, verb, path, exchange.request);
            exchange.status = verb == "DELETE" ? 204 : 201;
            break;
        default:
            exchange.status = 501;
            exchange.response = {{"error", "no handler"}};
            break;
    }
    sbi_log_.push_back(exchange);
    return exchange;
}

nlohmann::json CoreNetwork::handle_smf(const std::string& verb, const std::string&,
                                       const nlohmann::json& body) {
    if (verb != "POST") {
        throw SimError(Err::internal, "unsupported SMF verb " + verb);
    }
    InstanceId smf = find_registered(NfType::smf, std::nullopt);
    UeId ue = body.at("ue").get<UeId>();
    auto locality = locality_from_string(body.at("locality").get<std::string>());
    PduSession session = establish_via_smf(smf, ue, locality.value_or(Locality::core));
    return {{"session_id", session.id}, {"ue_ip", session.ue_ip}};
}

nlohmann::json CoreNetwork::handle_upf(InstanceId upf_id, const std::string& verb,
                                       const std::string&, const nlohmann::json& body) {
    UpfState& upf = upfs_.at(upf_id);
    if (verb == "POST") {
        SessionId session_id = body.at("session_id").get<SessionId>();
        std::uint32_t address = upf.pool_base | upf.next_host++;
        upf.anchored.push_back(session_id);
        return {{"ue_ip", ipv4_to_string(address)}};
    }
    if (verb == "DELETE") {
        SessionId session_id = body.at("session_id").get<SessionId>();
        std::erase(upf.anchored, session_id);
        return nlohmann::json::object();
    }
    throw SimError(Err::internal, "unsupported UPF verb " + verb);
}

}  // namespace mecsim::nf
