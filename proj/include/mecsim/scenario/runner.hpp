#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mecsim/cluster/cluster.hpp"
#include "mecsim/mon/export.hpp"
#include "mecsim/mon/scraper.hpp"
#include "mecsim/mon/store.hpp"
#include "mecsim/nf/core.hpp"
#include "mecsim/ran/gnb.hpp"
#include "mecsim/ran/stats_api.hpp"
#include "mecsim/scenario/checks.hpp"
#include "mecsim/scenario/scenario.hpp"
#include "mecsim/sim/kernel.hpp"
#include "mecsim/traffic/traffic.hpp"

namespace mecsim::scenario {

enum class Mode { fast, serve };

struct ServeOptions {
    std::string host = "127.0.0.1";
    int exporter_base_port = 9101;  // 9101..9104 for master/core/edge/monitoring
    int sampler_port = 9110;
    int ran_api_port = 9999;
    double ms_per_tick = 100.0;
};

struct SimulationParams {
    cluster::ClusterParams cluster;
    ran::GnbConfig radio;
    double scrape_interval_s = 1.0;
};

SimulationParams params_from_overrides(const std::map<std::string, double>& overrides);

/// One assembled testbed: kernel, cluster, core network, gNB, traffic and the
/// monitoring plane, with the per-tick hook chain wired in delivery order.
class Simulation {
public:
    Simulation(std::uint64_t seed, const SimulationParams& params);
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    /// Enqueue every scenario event; failures at dispatch time land in
    /// errors() instead of unwinding the run.
    void schedule_scenario(const Scenario& scenario);
    void apply_action(const ScenarioEvent& event);

    sim::Kernel kernel;
    cluster::Cluster cluster;
    nf::CoreNetwork core;
    ran::Gnb gnb;
    traffic::Traffic traffic;
    mon::SeriesStore store;
    ran::StatsApi stats_api;
    std::vector<std::unique_ptr<mon::NodeExporter>> node_exporters;
    std::unique_ptr<mon::RanSampler> sampler;
    mon::Scraper scraper;

    const std::vector<std::string>& errors() const { return errors_; }

private:
    cluster::Chart resolve_chart(const nlohmann::json& args) const;

    std::vector<std::string> errors_;
};

struct RunOptions {
    Mode mode = Mode::fast;
    std::string out_dir;  // empty: no artifacts written
    ServeOptions serve;
};

struct RunResult {
    mon::TsdbDump dump;
    std::vector<SessionRow> sessions;
    std::vector<AssertionResult> assertions;  // filled for the built-in experiments
    std::vector<std::string> errors;
    nlohmann::json report;
    std::vector<std::string> artifact_paths;
    double wall_ms = 0;  // reported on the console, never in the report file
};

RunResult run_scenario(const Scenario& scenario, std::uint64_t seed, const RunOptions& options);

std::vector<SessionRow> session_rows(const nf::CoreNetwork& core);

}  // namespace mecsim::scenario
