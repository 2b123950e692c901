#include "mecsim/nf/types.hpp"

#include <array>
#include <utility>

namespace mecsim::nf {

namespace {

constexpr std::array<std::pair<NfType, const char*>, 13> nf_names{{
    {NfType::nrf, "NRF"},
    {NfType::amf, "AMF"},
    {NfType::smf, "SMF"},
    {NfType::upf, "UPF"},
    {NfType::udm, "UDM"},
    {NfType::ausf, "AUSF"},
    {NfType::pcf, "PCF"},
    {NfType::udr, "UDR"},
    {NfType::bsf, "BSF"},
    {NfType::nssf, "NSSF"},
    {NfType::scp, "SCP"},
    {NfType::sampler, "SAMPLER"},
    {NfType::iperf_server, "IPERF-SERVER"},
}};

}  // namespace

const char* to_string(NfType type) {
    for (const auto& [value, name] : nf_names) {
        if (value == type) return name;
    }
    return "?";
}

const char* to_string(Locality locality) {
    return locality == Locality::core ? "core" : "edge";
}

const char* to_string(Direction direction) {
    return direction == Direction::downlink ? "downlink" : "uplink";
}

std::optional<NfType> nf_type_from_string(const std::string& s) {
    for (const auto& [value, name] : nf_names) {
        if (s == name) return value;
    }
    return std::nullopt;
}

std::optional<Locality> locality_from_string(const std::string& s) {
    if (s == "core") return Locality::core;
    if (s == "edge") return Locality::edge;
    return std::nullopt;
}

std::optional<Direction> direction_from_string(const std::string& s) {
    if (s == "downlink") return Direction::downlink;
    if (s == "uplink") return Direction::uplink;
    return std::nullopt;
}

bool registers_with_nrf(NfType type) {
    return type != NfType::sampler && type != NfType::iperf_server;
}

}  // namespace mecsim::nf
