#include "mecsim/scenario/runner.hpp"

#include <chrono>
#include <filesystem>

#include "mecsim/scenario/serve.hpp"
#include "mecsim/util/doc.hpp"

namespace mecsim::scenario {

SimulationParams params_from_overrides(const std::map<std::string, double>& overrides) {
    SimulationParams params;
    for (const auto& [key, value] : overrides) {
        if (key == "radio.bandwidth_hz") params.radio.bandwidth_hz = value;
        else if (key == "radio.overhead_factor") params.radio.overhead_factor = value;
        else if (key == "radio.rx_gain_offset_db") params.radio.rx_gain_offset_db = value;
        else if (key == "radio.snr_noise_std_db") params.radio.snr_noise_std_db = value;
        else if (key == "radio.snr_ref_db") params.radio.default_snr_ref_db = value;
        else if (key == "cluster.node_cpu_base") params.cluster.node_cpu_base = value;
        else if (key == "cluster.transient_height") params.cluster.transient_height = value;
        else if (key == "cluster.transient_duration_s") params.cluster.transient_duration_s = value;
        else if (key == "cluster.cpu_per_gbps") params.cluster.cpu_per_gbps = value;
        else if (key == "cluster.memory_base_bytes") params.cluster.memory_base_bytes = value;
        else if (key == "cluster.memory_per_instance_bytes")
            params.cluster.memory_per_instance_bytes = value;
        else if (key == "monitoring.scrape_interval_s") params.scrape_interval_s = value;
        else throw SimError(Err::schema_error, "unknown override '" + key + "'");
    }
    return params;
}

Simulation::Simulation(std::uint64_t seed, const SimulationParams& params)
    : kernel(seed),
      cluster(kernel, params.cluster),
      core(kernel),
      gnb(kernel, cluster, core, params.radio),
      traffic(kernel, cluster, core, gnb),
      stats_api([this] { return std::make_pair(kernel.now().seconds(), gnb.ran_stats()); },
                [this](double offset_db) { gnb.set_rx_gain_offset(offset_db); }),
      scraper(store) {
    cluster.wire(&core);
    core.wire(&cluster);

    for (const auto& node : cluster.node_names()) {
        node_exporters.push_back(std::make_unique<mon::NodeExporter>(cluster, node));
    }
    sampler = std::make_unique<mon::RanSampler>(cluster, stats_api);
    for (auto& exporter : node_exporters) {
        scraper.add_target(*exporter, params.scrape_interval_s);
    }
    scraper.add_target(*sampler, params.scrape_interval_s);

    // hook order is the per-tick pipeline: link adaptation, delivery,
    // measurement, node rate accounting, then collection
    kernel.add_tick_hook("ran-links", [this](sim::SimTime t) { gnb.on_tick_links(t); });
    kernel.add_tick_hook("traffic", [this](sim::SimTime t) { traffic.tick_deliver(t); });
    kernel.add_tick_hook("ran-stats", [this](sim::SimTime t) { gnb.on_tick_stats(t); });
    kernel.add_tick_hook("cluster", [this](sim::SimTime t) { cluster.on_tick(t); });
    kernel.add_tick_hook("scrape", [this](sim::SimTime t) { scraper.on_tick(t); });
}

cluster::Chart Simulation::resolve_chart(const nlohmann::json& args) const {
    if (args.contains("file")) {
        return cluster::chart_from_json(util::load_document(args["file"].get<std::string>()));
    }
    const std::string name = args["chart"].get<std::string>();
    if (name == "open5gs-core") {
        return cluster::default_core_chart();
    }
    if (name == "monitoring") {
        return cluster::default_monitoring_chart();
    }
    throw SimError(Err::schema_error, "unknown chart '" + name + "' (use 'file' for custom charts)");
}

void Simulation::apply_action(const ScenarioEvent& event) {
    switch (event.action) {
        case ActionType::install_chart:
            cluster.install_chart(resolve_chart(event.args));
            break;
        case ActionType::uninstall_chart:
            cluster.uninstall_chart(event.args["chart"].get<std::string>());
            break;
        case ActionType::gnb_connect: {
            std::string address;
            if (event.args.contains("address")) {
                address = event.args["address"].get<std::string>();
            } else {
                const auto* exposure = cluster.exposure(event.args["service"].get<std::string>());
                if (!exposure) {
                    throw SimError(Err::amf_unreachable,
                                   "service " + event.args["service"].get<std::string>());
                }
                address = exposure->address + ":" + std::to_string(exposure->port);
            }
            gnb.connect(address);
            break;
        }
        case ActionType::ue_attach:
            gnb.ue_attach(event.args["ue"].get<nf::UeId>());
            break;
        case ActionType::start_flow: {
            traffic::FlowSpec spec;
            spec.id = event.args["flow"].get<std::string>();
            spec.ue = event.args["ue"].get<nf::UeId>();
            spec.direction = *nf::direction_from_string(event.args["direction"].get<std::string>());
            spec.rate_bps = event.args["rate_bps"].get<double>();
            spec.server_node = event.args["server"].get<std::string>();
            traffic.start_flow(spec);
            break;
        }
        case ActionType::stop_flow:
            traffic.stop_flow(event.args["flow"].get<std::string>());
            break;
        case ActionType::reassign_upf:
            core.smf_reassign_upf(event.args["ue"].get<nf::UeId>(),
                                  *nf::locality_from_string(event.args["target"].get<std::string>()));
            break;
        case ActionType::set_rx_gain_offset:
            gnb.set_rx_gain_offset(event.args["offset_db"].get<double>());
            break;
    }
}

void Simulation::schedule_scenario(const Scenario& scenario) {
    for (const auto& event : scenario.events) {
        kernel.schedule(sim::SimTime::from_seconds(event.at_s), [this, event] {
            try {
                apply_action(event);
            } catch (const std::exception& e) {
                errors_.push_back("t=" + mon::format_value(event.at_s) + " " +
                                  to_string(event.action) + ": " + e.what());
            }
        });
    }
}

std::vector<SessionRow> session_rows(const nf::CoreNetwork& core) {
    std::vector<SessionRow> rows;
    for (const auto& session : core.session_table()) {
        SessionRow row;
        row.ue = session.ue;
        row.locality = nf::to_string(session.locality);
        row.ip = session.ue_ip;
        row.established_at_s = session.established_at.seconds();
        if (session.released_at) {
            row.released_at_s = session.released_at->seconds();
        }
        row.active = session.active;
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

nlohmann::json sessions_to_json(const std::vector<SessionRow>& sessions) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : sessions) {
        nlohmann::json entry;
        entry["ue"] = row.ue;
        entry["locality"] = row.locality;
        entry["ue_ip"] = row.ip;
        entry["established_at_s"] = row.established_at_s;
        if (row.released_at_s) {
            entry["released_at_s"] = *row.released_at_s;
        } else {
            entry["released_at_s"] = nullptr;
        }
        entry["active"] = row.active;
        out.push_back(std::move(entry));
    }
    return out;
}

void write_experiment_panels(const RunResult& result, const std::string& out_dir,
                             const std::string& name, std::vector<std::string>& artifacts) {
    namespace fs = std::filesystem;
    auto svg_path = [&](const std::string& file) { return (fs::path(out_dir) / file).string(); };
    const auto& store = result.dump.store;

    auto emit = [&](const std::string& file, const std::vector<mon::PanelSeries>& panel,
                    const std::string& title) {
        mon::render_panel_svg(store, panel, title, svg_path(file));
        artifacts.push_back(file);
    };

    if (name == "experiment1") {
        emit("cpu_nodes.svg",
             {{{"node_cpu_utilization_ratio", {{"node", "core"}}}, false},
              {{"node_cpu_utilization_ratio", {{"node", "edge"}}}, false}},
             "Node CPU utilization");
        emit("net_transmit_rate.svg",
             {{{"node_network_transmit_bytes_total", {{"node", "core"}}}, true},
              {{"node_network_transmit_bytes_total", {{"node", "edge"}}}, true}},
             "Node network transmit rate (B/s)");
        emit("ue_dl_bitrate.svg",
             {{{"ran_ue_downlink_bitrate_bps", {}}, false}},
             "UE downlink bitrate (bps)");
    } else if (name == "experiment2") {
        emit("ue1_snr.svg", {{{"ran_ue_snr_db", {{"ue", "1"}}}, false}}, "UE1 SNR (dB)");
        emit("ue1_link.svg",
             {{{"ran_ue_mcs_ul", {{"ue", "1"}}}, false}, {{"ran_ue_cqi", {{"ue", "1"}}}, false}},
             "UE1 uplink MCS and CQI");
        emit("ue1_ul_bitrate.svg", {{{"ran_ue_uplink_bitrate_bps", {{"ue", "1"}}}, false}},
             "UE1 uplink bitrate (bps)");
    }
}

}  // namespace

RunResult run_scenario(const Scenario& scenario, std::uint64_t seed, const RunOptions& options) {
    auto wall_start = std::chrono::steady_clock::now();

    SimulationParams params = params_from_overrides(scenario.overrides);
    Simulation sim(seed, params);
    sim.schedule_scenario(scenario);

    auto end = sim::SimTime::from_seconds(scenario.duration_s);
    if (options.mode == Mode::fast) {
        sim.kernel.run_until(end);
    } else {
        serve_loop(sim, end, options.serve);
    }

    RunResult result;
    result.dump.scenario = scenario.name;
    result.dump.seed = seed;
    result.dump.duration_s = scenario.duration_s;
    result.dump.store = sim.store;
    result.sessions = session_rows(sim.core);
    result.errors = sim.errors();

    if (scenario.name == "experiment1") {
        result.assertions = check_experiment1(result.dump, &result.sessions);
    } else if (scenario.name == "experiment2") {
        CheckOptions check;
        auto noise = scenario.overrides.find("radio.snr_noise_std_db");
        if (noise != scenario.overrides.end() && noise->second > 0) {
            check.snr_step_tol_db = 1.5;
        }
        result.assertions = check_experiment2(result.dump, check);
    }

    nlohmann::json report;
    report["scenario"] = scenario.name;
    report["seed"] = seed;
    report["mode"] = options.mode == Mode::fast ? "fast" : "serve";
    report["duration_s"] = scenario.duration_s;
    report["assertions"] = nlohmann::json::array();
    for (const auto& assertion : result.assertions) {
        report["assertions"].push_back(assertion_to_json(assertion));
    }
    report["sessions"] = sessions_to_json(result.sessions);
    report["errors"] = result.errors;

    if (!options.out_dir.empty()) {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(options.out_dir, ec);
        if (ec) {
            throw SimError(Err::io_error, "cannot create " + options.out_dir);
        }
        result.dump.write_file((fs::path(options.out_dir) / "tsdb.json").string());
        result.artifact_paths.push_back("tsdb.json");
        auto rows = mon::export_csv(result.dump.store, {},
                                    (fs::path(options.out_dir) / "series.csv").string());
        (void)rows;
        result.artifact_paths.push_back("series.csv");
        write_experiment_panels(result, options.out_dir, scenario.name, result.artifact_paths);

        report["artifacts"] = result.artifact_paths;
        util::write_file((fs::path(options.out_dir) / "report.json").string(),
                         report.dump(2) + "\n");
    } else {
        report["artifacts"] = nlohmann::json::array();
    }
    result.report = std::move(report);

    auto wall_end = std::chrono::steady_clock::now();
    result.wall_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(wall_end - wall_start)
            .count();
    return result;
}

}  // namespace mecsim::scenario
