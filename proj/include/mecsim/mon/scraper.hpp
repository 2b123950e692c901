#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mecsim/cluster/cluster.hpp"
#include "mecsim/mon/metrics.hpp"
#include "mecsim/mon/store.hpp"
#include "mecsim/ran/stats_api.hpp"

namespace mecsim::mon {

/// Anything the scraper can pull exposition text from.
class Exporter {
public:
    virtual ~Exporter() = default;
    virtual const std::string& id() const = 0;
    /// Refresh and render; throws (TargetDown, RanApiDown) when unreachable.
    virtual std::string collect(sim::SimTime t) = 0;
};

/// Node-exporter analog: CPU, memory, tx/rx counters, and a gauge per hosted
/// NF type. One per node, always reachable.
class NodeExporter : public Exporter {
public:
    NodeExporter(cluster::Cluster& cluster, std::string node);

    const std::string& id() const override { return id_; }
    std::string collect(sim::SimTime t) override;
    const MetricRegistry& registry() const { return registry_; }

private:
    cluster::Cluster& cluster_;
    std::string node_;
    std::string id_;
    MetricRegistry registry_;
    std::set<std::string> seen_nf_types_;
};

/// Sampler CNF analog: polls the gNB stats API and exposes the RAN metric
/// gauges. Down until the monitoring chart installs the SAMPLER workload.
class RanSampler : public Exporter {
public:
    RanSampler(cluster::Cluster& cluster, const ran::StatsApi& api);

    const std::string& id() const override { return id_; }

    /// Issue one stats request and refresh the gauges; returns the number of
    /// updated metric values. Throws RanApiDown when the sampler workload is
    /// not installed or the API errors.
    std::size_t poll(sim::SimTime t);
    std::string collect(sim::SimTime t) override;
    const MetricRegistry& registry() const { return registry_; }

private:
    cluster::Cluster& cluster_;
    const ran::StatsApi& api_;
    std::string id_;
    MetricRegistry registry_;
    std::uint64_t poll_count_ = 0;
};

struct ScrapeTarget {
    std::string id;
    Exporter* exporter = nullptr;
    double interval_s = 1.0;
};

/// Pull loop writing into the series store. Failures are recorded as
/// up{target=...} 0 samples, never propagated.
class Scraper {
public:
    /// Called after every scrape attempt with the exposition text that was
    /// ingested (empty when the target was down). Serve mode publishes these
    /// snapshots on the HTTP endpoints.
    using Observer = std::function<void(const std::string& target_id, sim::SimTime t, bool up,
                                        const std::string& text)>;

    explicit Scraper(SeriesStore& store) : store_(store) {}

    void add_target(Exporter& exporter, double interval_s = 1.0);
    void set_observer(Observer observer) { observer_ = std::move(observer); }
    std::size_t scrape(const std::string& target_id, sim::SimTime t);

    /// Scrapes every target due at t; targets fire at whole multiples of
    /// their interval, starting one interval into the run.
    void on_tick(sim::SimTime t);

    const std::vector<ScrapeTarget>& targets() const { return targets_; }

private:
    std::size_t scrape_target(ScrapeTarget& target, sim::SimTime t);

    SeriesStore& store_;
    std::vector<ScrapeTarget> targets_;
    Observer observer_;
};

}  // namespace mecsim::mon
