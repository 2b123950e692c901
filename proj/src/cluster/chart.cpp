#include "mecsim/cluster/chart.hpp"

#include "mecsim/errors.hpp"

namespace mecsim::cluster {

Chart chart_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("name") || !doc["name"].is_string()) {
        throw SimError(Err::schema_error, "chart: missing string field 'name'");
    }
    Chart chart;
    chart.name = doc["name"].get<std::string>();
    if (!doc.contains("workloads") || !doc["workloads"].is_array()) {
        throw SimError(Err::schema_error, "chart '" + chart.name + "': missing array 'workloads'");
    }
    std::size_t index = 0;
    for (const auto& entry : doc["workloads"]) {
        auto where = "chart '" + chart.name + "' workloads[" + std::to_string(index) + "]";
        if (!entry.is_object() || !entry.contains("nf_type") || !entry.contains("node")) {
            throw SimError(Err::schema_error, where + ": needs nf_type and node");
        }
        ChartWorkload workload;
        auto type = nf::nf_type_from_string(entry["nf_type"].get<std::string>());
        if (!type) {
            throw SimError(Err::schema_error,
                           where + ": unknown nf_type '" + entry["nf_type"].get<std::string>() + "'");
        }
        workload.type = *type;
        workload.node = entry["node"].get<std::string>();
        if (entry.contains("cpu_base")) {
            if (!entry["cpu_base"].is_number()) {
                throw SimError(Err::schema_error, where + ": cpu_base must be a number");
            }
            workload.cpu_base = entry["cpu_base"].get<double>();
        }
        chart.workloads.push_back(std::move(workload));
        ++index;
    }
    return chart;
}

nlohmann::json chart_to_json(const Chart& chart) {
    nlohmann::json doc;
    doc["name"] = chart.name;
    doc["workloads"] = nlohmann::json::array();
    for (const auto& workload : chart.workloads) {
        doc["workloads"].push_back({{"nf_type", nf::to_string(workload.type)},
                                    {"node", workload.node}});
    }
    return doc;
}

Chart default_core_chart() {
    Chart chart;
    chart.name = "open5gs-core";
    using nf::NfType;
    for (NfType type : {NfType::nrf, NfType::amf, NfType::smf, NfType::upf, NfType::udm,
                        NfType::ausf, NfType::pcf, NfType::udr, NfType::bsf, NfType::nssf,
                        NfType::scp, NfType::iperf_server}) {
        chart.workloads.push_back({type, "core"});
    }
    chart.workloads.push_back({NfType::upf, "edge"});
    chart.workloads.push_back({NfType::iperf_server, "edge"});
    return chart;
}

Chart default_monitoring_chart() {
    Chart chart;
    chart.name = "monitoring";
    chart.workloads.push_back({nf::NfType::sampler, "monitoring"});
    return chart;
}

}  // namespace mecsim::cluster
