#include "mecsim/scenario/serve.hpp"

#include <chrono>
#include <mutex>
#include <shared_mutex>
#include <thread>

#include <httplib.h>

#include "mecsim/net/ws.hpp"

namespace mecsim::scenario {

namespace {

struct EndpointSnapshot {
    bool valid = false;
    bool up = false;
    std::uint64_t tick = 0;
    std::string text;
};

struct RanSnapshot {
    double time_s = 0;
    std::vector<ran::UeStats> stats;
};

}  // namespace

void serve_loop(Simulation& sim, sim::SimTime end, const ServeOptions& options) {
    std::shared_mutex snapshots_mutex;
    std::map<std::string, EndpointSnapshot> snapshots;

    std::shared_mutex ran_mutex;
    RanSnapshot ran_snapshot;

    std::mutex inject_mutex;
    std::vector<std::function<void()>> injected;

    sim.scraper.set_observer([&](const std::string& target_id, sim::SimTime t, bool up,
                                 const std::string& text) {
        std::unique_lock lock(snapshots_mutex);
        snapshots[target_id] = EndpointSnapshot{true, up, t.ticks, text};
    });
    sim.kernel.add_tick_hook("serve-publish", [&](sim::SimTime t) {
        std::unique_lock lock(ran_mutex);
        ran_snapshot.time_s = t.seconds();
        ran_snapshot.stats = sim.gnb.ran_stats();
    });

    // external config changes ride the kernel loop, one tick later
    ran::StatsApi ws_api(
        [&] {
            std::shared_lock lock(ran_mutex);
            return std::make_pair(ran_snapshot.time_s, ran_snapshot.stats);
        },
        [&](double offset_db) {
            std::lock_guard lock(inject_mutex);
            injected.push_back([&sim, offset_db] { sim.gnb.set_rx_gain_offset(offset_db); });
        });

    // exposition endpoints: node exporters then the sampler
    std::vector<std::pair<std::string, int>> endpoints;
    {
        auto nodes = sim.cluster.node_names();
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            endpoints.emplace_back("node-exporter-" + nodes[i],
                                   options.exporter_base_port + static_cast<int>(i));
        }
        endpoints.emplace_back("ran-sampler", options.sampler_port);
    }

    std::vector<std::unique_ptr<httplib::Server>> servers;
    std::vector<std::thread> server_threads;
    for (const auto& [target_id, port] : endpoints) {
        auto server = std::make_unique<httplib::Server>();
        std::string id = target_id;
        server->Get("/metrics", [&, id](const httplib::Request&, httplib::Response& res) {
            std::shared_lock lock(snapshots_mutex);
            auto it = snapshots.find(id);
            if (it == snapshots.end() || !it->second.valid || !it->second.up) {
                res.status = 503;
                res.set_content("target down\n", "text/plain");
                return;
            }
            res.set_header("X-Sim-Time-Ticks", std::to_string(it->second.tick));
            res.set_content(it->second.text, "text/plain; version=0.0.4");
        });
        httplib::Server* raw = server.get();
        servers.push_back(std::move(server));
        server_threads.emplace_back([raw, host = options.host, port = port] {
            raw->listen(host, port);
        });
    }
    for (auto& server : servers) {
        server->wait_until_ready();
    }

    net::WsServer ws_server;
    ws_server.start(options.host, options.ran_api_port, [&ws_api](const std::string& payload) {
        nlohmann::json request;
        try {
            request = nlohmann::json::parse(payload);
        } catch (const nlohmann::json::exception&) {
            return nlohmann::json{{"error", "unknown_message"}, {"message_id", ""}}.dump();
        }
        return ws_api.handle(request).dump();
    });

    const auto tick_duration = std::chrono::duration<double, std::milli>(options.ms_per_tick);
    const auto wall_start = std::chrono::steady_clock::now();
    const std::uint64_t first_tick = sim.kernel.now().ticks;
    for (std::uint64_t tick = first_tick; tick <= end.ticks; ++tick) {
        {
            std::lock_guard lock(inject_mutex);
            for (auto& action : injected) {
                sim.kernel.schedule(sim::SimTime(tick), std::move(action));
            }
            injected.clear();
        }
        sim.kernel.run_until(sim::SimTime(tick));
        auto deadline = wall_start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            tick_duration * static_cast<double>(tick - first_tick + 1));
        std::this_thread::sleep_until(deadline);
    }

    ws_server.stop();
    for (auto& server : servers) {
        server->stop();
    }
    for (auto& thread : server_threads) {
        thread.join();
    }
    sim.scraper.set_observer(nullptr);
}

}  // namespace mecsim::scenario
