#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace mecsim::nf {

using InstanceId = std::uint64_t;
using UeId = int;
using SessionId = std::uint64_t;

enum class NfType {
    nrf,
    amf,
    smf,
    upf,
    udm,
    ausf,
    pcf,
    udr,
    bsf,
    nssf,
    scp,
    sampler,
    iperf_server,
};

enum class Locality { core, edge };

enum class Direction { downlink, uplink };

const char* to_string(NfType type);
const char* to_string(Locality locality);
const char* to_string(Direction direction);

std::optional<NfType> nf_type_from_string(const std::string& s);
std::optional<Locality> locality_from_string(const std::string& s);
std::optional<Direction> direction_from_string(const std::string& s);

/// True for the 5GC functions that register with the NRF; the sampler and
/// iperf server workloads are plain containers.
bool registers_with_nrf(NfType type);

}  // namespace mecsim::nf
