#include "mecsim/errors.hpp"

namespace mecsim {

const char* to_string(Err code) {
    switch (code) {
        case Err::scheduling_in_past: return "SchedulingInPast";
        case Err::duplicate_chart: return "DuplicateChart";
        case Err::unknown_node: return "UnknownNode";
        case Err::already_removed: return "AlreadyRemoved";
        case Err::port_in_use: return "PortInUse";
        case Err::no_such_instance: return "NoSuchInstance";
        case Err::duplicate_registration: return "DuplicateRegistration";
        case Err::not_registered: return "NotRegistered";
        case Err::no_amf: return "NoAmf";
        case Err::already_registered: return "AlreadyRegistered";
        case Err::no_upf: return "NoUpf";
        case Err::session_exists: return "SessionExists";
        case Err::flows_still_active: return "FlowsStillActive";
        case Err::no_such_session: return "NoSuchSession";
        case Err::session_released: return "SessionReleased";
        case Err::upf_gone: return "UpfGone";
        case Err::amf_unreachable: return "AmfUnreachable";
        case Err::not_connected: return "NotConnected";
        case Err::already_attached: return "AlreadyAttached";
        case Err::not_attached: return "NotAttached";
        case Err::no_session: return "NoSession";
        case Err::no_server: return "NoServer";
        case Err::duplicate_flow_id: return "DuplicateFlowId";
        case Err::no_such_flow: return "NoSuchFlow";
        case Err::already_stopped: return "AlreadyStopped";
        case Err::parse_error: return "ParseError";
        case Err::target_down: return "TargetDown";
        case Err::ran_api_down: return "RanApiDown";
        case Err::schema_error: return "SchemaError";
        case Err::missing_series: return "MissingSeries";
        case Err::empty_selection: return "EmptySelection";
        case Err::io_error: return "IoError";
        case Err::internal: return "InternalError";
    }
    return "UnknownError";
}

}  // namespace mecsim
