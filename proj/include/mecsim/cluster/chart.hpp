#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mecsim/nf/types.hpp"

namespace mecsim::cluster {

struct ChartWorkload {
    nf::NfType type;
    std::string node;
    double cpu_base = 0.005;
};

/// Declarative bundle of workloads installed and removed as one unit.
struct Chart {
    std::string name;
    std::vector<ChartWorkload> workloads;
};

Chart chart_from_json(const nlohmann::json& doc);
nlohmann::json chart_to_json(const Chart& chart);

/// The bundled charts: the 5GC functions plus the iperf servers, and the
/// RAN sampler. Mirrors charts/open5gs-core.json and charts/monitoring.json.
Chart default_core_chart();
Chart default_monitoring_chart();

}  // namespace mecsim::cluster
