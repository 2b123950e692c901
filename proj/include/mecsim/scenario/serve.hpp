#pragma once

#include "mecsim/scenario/runner.hpp"

namespace mecsim::scenario {

/// Real-time run: paces the kernel at ms_per_tick per tick while serving the
/// exporter /metrics endpoints over HTTP (node exporters on
/// exporter_base_port.., the sampler on sampler_port) and the gNB
/// stats/control API over WebSocket on ran_api_port.
///
/// Endpoints serve the text of the most recent internal scrape together with
/// an X-Sim-Time-Ticks header, so an external scrape can be matched against
/// the dump at that tick. Control messages received over the WebSocket are
/// enqueued as kernel events for the next tick, never applied directly.
void serve_loop(Simulation& sim, sim::SimTime end, const ServeOptions& options);

}  // namespace mecsim::scenario
