#pragma once

#include <string>
#include <vector>

#include "mecsim/mon/store.hpp"

namespace mecsim::mon {

/// Serialize labels as `k=v;k=v` with keys sorted.
std::string labels_csv(const Labels& labels);

/// Write `timestamp_s,name,labels,value` rows, globally time-ordered.
/// Returns the number of data rows. An empty selection selects everything.
std::size_t export_csv(const SeriesStore& store, const std::vector<SeriesSelector>& selection,
                       const std::string& path);

struct PanelSeries {
    SeriesSelector selector;
    bool as_rate = false;  // plot per-second deltas instead of raw values
};

/// Standalone SVG line chart: one polyline per matched series, linear axes,
/// a legend of label sets. Throws EmptySelection when nothing matches.
void render_panel_svg(const SeriesStore& store, const std::vector<PanelSeries>& panel,
                      const std::string& title, const std::string& path);

/// Per-second deltas of a (counter) series: points at each sample after the
/// first, valued delta/dt. Used for the rate panels.
std::vector<Point> rate_series(const std::vector<Point>& points);

}  // namespace mecsim::mon
