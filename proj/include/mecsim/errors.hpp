#pragma once

#include <stdexcept>
#include <string>

namespace mecsim {

enum class Err {
    scheduling_in_past,
    duplicate_chart,
    unknown_node,
    already_removed,
    port_in_use,
    no_such_instance,
    duplicate_registration,
    not_registered,
    no_amf,
    already_registered,
    no_upf,
    session_exists,
    flows_still_active,
    no_such_session,
    session_released,
    upf_gone,
    amf_unreachable,
    not_connected,
    already_attached,
    not_attached,
    no_session,
    no_server,
    duplicate_flow_id,
    no_such_flow,
    already_stopped,
    parse_error,
    target_down,
    ran_api_down,
    schema_error,
    missing_series,
    empty_selection,
    io_error,
    internal,
};

const char* to_string(Err code);

class SimError : public std::runtime_error {
public:
    SimError(Err code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Err code() const { return code_; }

private:
    Err code_;
};

}  // namespace mecsim
