#include "mecsim/scenario/checks.hpp"

#include <algorithm>
#include <cmath>

#include "mecsim/mon/metrics.hpp"

namespace mecsim::scenario {

nlohmann::json assertion_to_json(const AssertionResult& result) {
    nlohmann::json doc;
    doc["id"] = result.id;
    doc["pass"] = result.pass;
    if (result.measured) {
        doc["measured"] = *result.measured;
    } else {
        doc["measured"] = nullptr;
    }
    doc["bound"] = result.bound;
    doc["detail"] = result.detail;
    return doc;
}

bool all_passed(const std::vector<AssertionResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const AssertionResult& r) { return r.pass; });
}

std::vector<SessionRow> sessions_from_report(const nlohmann::json& report) {
    std::vector<SessionRow> rows;
    if (!report.is_object() || !report.contains("sessions") || !report["sessions"].is_array()) {
        return rows;
    }
    for (const auto& entry : report["sessions"]) {
        SessionRow row;
        row.ue = entry.value("ue", 0);
        row.locality = entry.value("locality", "");
        row.ip = entry.value("ue_ip", "");
        row.established_at_s = entry.value("established_at_s", 0.0);
        if (entry.contains("released_at_s") && entry["released_at_s"].is_number()) {
            row.released_at_s = entry["released_at_s"].get<double>();
        }
        row.active = entry.value("active", false);
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

using mon::Labels;
using mon::Point;
using mon::SeriesSlice;
using mon::TsdbDump;

void require_series(const TsdbDump& dump, const std::string& name) {
    if (!dump.store.has_series(name)) {
        throw SimError(Err::missing_series, name);
    }
}

std::vector<Point> single_series(const TsdbDump& dump, const std::string& name,
                                 const Labels& filter, double t0_s, double t1_s) {
    auto slices = dump.store.query_range(name, filter, sim::SimTime::from_seconds(t0_s),
                                         sim::SimTime::from_seconds(t1_s));
    std::vector<Point> points;
    for (const auto& slice : slices) {
        points.insert(points.end(), slice.points.begin(), slice.points.end());
    }
    std::sort(points.begin(), points.end(),
              [](const Point& a, const Point& b) { return a.t < b.t; });
    return points;
}

std::optional<double> mean_value(const std::vector<Point>& points) {
    if (points.empty()) {
        return std::nullopt;
    }
    double sum = 0;
    for (const auto& point : points) {
        sum += point.value;
    }
    return sum / static_cast<double>(points.size());
}

std::optional<double> median_value(std::vector<double> values) {
    if (values.empty()) {
        return std::nullopt;
    }
    std::sort(values.begin(), values.end());
    std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) {
        return values[mid];
    }
    return 0.5 * (values[mid - 1] + values[mid]);
}

/// Average transmit rate in bps over a counter window, from first and last
/// samples inside [t0, t1].
std::optional<double> counter_rate_bps(const TsdbDump& dump, const std::string& name,
                                       const Labels& filter, double t0_s, double t1_s) {
    auto points = single_series(dump, name, filter, t0_s, t1_s);
    if (points.size() < 2) {
        return std::nullopt;
    }
    double dt = points.back().t.seconds() - points.front().t.seconds();
    if (dt <= 0) {
        return std::nullopt;
    }
    return (points.back().value - points.front().value) * 8.0 / dt;
}

std::string within_pct_bound(double nominal, double pct) {
    return "[" + mon::format_value(nominal * (1 - pct)) + ", " +
           mon::format_value(nominal * (1 + pct)) + "]";
}

AssertionResult check_within_pct(const std::string& id, std::optional<double> measured,
                                 double nominal, double pct, const std::string& what) {
    AssertionResult result;
    result.id = id;
    result.measured = measured;
    result.bound = within_pct_bound(nominal, pct);
    if (!measured) {
        result.pass = false;
        result.detail = what + ": no samples in window";
        return result;
    }
    result.pass = *measured >= nominal * (1 - pct) && *measured <= nominal * (1 + pct);
    result.detail = what;
    return result;
}

AssertionResult check_at_most(const std::string& id, std::optional<double> measured, double limit,
                              const std::string& what) {
    AssertionResult result;
    result.id = id;
    result.measured = measured;
    result.bound = "<= " + mon::format_value(limit);
    if (!measured) {
        result.pass = false;
        result.detail = what + ": no samples in window";
        return result;
    }
    result.pass = *measured <= limit;
    result.detail = what;
    return result;
}

const Labels core_node{{"node", "core"}};
const Labels edge_node{{"node", "edge"}};
const Labels ue1{{"ue", "1"}};
const Labels ue2{{"ue", "2"}};

}  // namespace

std::vector<AssertionResult> check_experiment1(const TsdbDump& dump,
                                               const std::vector<SessionRow>* sessions) {
    require_series(dump, "node_network_transmit_bytes_total");
    require_series(dump, "node_cpu_utilization_ratio");
    require_series(dump, "ran_ue_downlink_bitrate_bps");

    std::vector<AssertionResult> results;
    const std::string tx = "node_network_transmit_bytes_total";

    // (a) only UE1 downlink, anchored at the core UPF
    results.push_back(check_within_pct("exp1.a.core_tx_rate",
                                       counter_rate_bps(dump, tx, core_node, 35, 55), 100e6, 0.05,
                                       "core transmit rate in [35,55] s"));
    results.push_back(check_at_most("exp1.a.edge_tx_rate",
                                    counter_rate_bps(dump, tx, edge_node, 35, 55), 1e6,
                                    "edge transmit rate in [35,55] s"));

    // (b) both UEs via the core UPF
    results.push_back(check_within_pct("exp1.b.core_tx_rate",
                                       counter_rate_bps(dump, tx, core_node, 65, 85), 200e6, 0.05,
                                       "core transmit rate in [65,85] s"));
    results.push_back(check_within_pct(
        "exp1.b.ue1_dl_bitrate",
        mean_value(single_series(dump, "ran_ue_downlink_bitrate_bps", ue1, 65, 85)), 100e6, 0.05,
        "UE1 downlink bitrate in [65,85] s"));
    results.push_back(check_within_pct(
        "exp1.b.ue2_dl_bitrate",
        mean_value(single_series(dump, "ran_ue_downlink_bitrate_bps", ue2, 65, 85)), 100e6, 0.05,
        "UE2 downlink bitrate in [65,85] s"));

    // (c) traffic shared between core and edge after re-selection
    results.push_back(check_within_pct("exp1.c.core_tx_rate",
                                       counter_rate_bps(dump, tx, core_node, 105, 125), 100e6,
                                       0.05, "core transmit rate in [105,125] s"));
    results.push_back(check_within_pct("exp1.c.edge_tx_rate",
                                       counter_rate_bps(dump, tx, edge_node, 105, 125), 100e6,
                                       0.05, "edge transmit rate in [105,125] s"));

    // (d) UE2 session IP transition, exact
    {
        AssertionResult result;
        result.id = "exp1.d.ue2_ip_transition";
        result.bound = "10.45.0.3 -> 10.46.0.2";
        if (!sessions) {
            result.pass = false;
            result.detail = "session table unavailable";
        } else {
            std::vector<SessionRow> ue2_rows;
            for (const auto& row : *sessions) {
                if (row.ue == 2) {
                    ue2_rows.push_back(row);
                }
            }
            std::sort(ue2_rows.begin(), ue2_rows.end(),
                      [](const SessionRow& a, const SessionRow& b) {
                          return a.established_at_s < b.established_at_s;
                      });
            if (ue2_rows.size() != 2) {
                result.pass = false;
                result.detail = "expected 2 UE2 sessions, found " +
                                std::to_string(ue2_rows.size());
            } else {
                bool ips_ok = ue2_rows[0].ip == "10.45.0.3" && ue2_rows[1].ip == "10.46.0.2";
                bool handover_ok = ue2_rows[0].released_at_s &&
                                   *ue2_rows[0].released_at_s == ue2_rows[1].established_at_s;
                result.pass = ips_ok && handover_ok;
                result.detail = ue2_rows[0].ip + " -> " + ue2_rows[1].ip + " at " +
                                mon::format_value(ue2_rows[1].established_at_s) + " s";
            }
        }
        results.push_back(std::move(result));
    }

    // (e) install and termination CPU transients on the core node
    {
        auto baseline = mean_value(single_series(dump, "node_cpu_utilization_ratio", core_node, 1, 9));
        auto check_peak = [&](const std::string& id, double t0, double t1,
                              const std::string& what) {
            AssertionResult result;
            result.id = id;
            auto points = single_series(dump, "node_cpu_utilization_ratio", core_node, t0, t1);
            if (!baseline || points.empty()) {
                result.pass = false;
                result.detail = what + ": missing samples";
                result.bound = "> baseline+0.2";
                return result;
            }
            double peak = 0;
            for (const auto& point : points) {
                peak = std::max(peak, point.value);
            }
            result.measured = peak;
            result.bound = "> " + mon::format_value(*baseline + 0.2);
            result.pass = peak > *baseline + 0.2;
            result.detail = what;
            return result;
        };
        results.push_back(check_peak("exp1.e.install_cpu_peak", 10, 15,
                                     "core CPU peak in [10,15] s vs pre-install baseline"));
        results.push_back(check_peak("exp1.e.terminate_cpu_peak", 140, 145,
                                     "core CPU peak in [140,145] s vs pre-install baseline"));
    }
    return results;
}

std::vector<AssertionResult> check_experiment2(const TsdbDump& dump,
                                               const CheckOptions& options) {
    require_series(dump, "ran_ue_snr_db");
    require_series(dump, "ran_ue_mcs_ul");
    require_series(dump, "ran_ue_cqi");
    require_series(dump, "ran_ue_uplink_bitrate_bps");

    std::vector<AssertionResult> results;

    // (a) -4 dB steps at each gain event
    for (double event_s : {40.0, 70.0, 100.0}) {
        AssertionResult result;
        result.id = "exp2.a.snr_step_" + mon::format_value(event_s);
        result.bound = "-4 ± " + mon::format_value(options.snr_step_tol_db);
        auto before = single_series(dump, "ran_ue_snr_db", ue1, event_s - 10, event_s - 1);
        auto after = single_series(dump, "ran_ue_snr_db", ue1, event_s, event_s + 9);
        std::vector<double> before_values, after_values;
        for (const auto& p : before) before_values.push_back(p.value);
        for (const auto& p : after) after_values.push_back(p.value);
        auto med_before = median_value(before_values);
        auto med_after = median_value(after_values);
        if (!med_before || !med_after) {
            result.pass = false;
            result.detail = "missing snr samples around " + mon::format_value(event_s) + " s";
        } else {
            double step = *med_after - *med_before;
            result.measured = step;
            result.pass = std::abs(step - (-4.0)) <= options.snr_step_tol_db;
            result.detail = "snr step at " + mon::format_value(event_s) + " s";
        }
        results.push_back(std::move(result));
    }

    // (b) link adaptation indices only degrade
    auto non_increasing = [&](const std::string& id, const std::string& name) {
        AssertionResult result;
        result.id = id;
        result.bound = "non-increasing";
        auto points = single_series(dump, name, ue1, 0, dump.duration_s);
        if (points.empty()) {
            result.pass = false;
            result.detail = "no samples";
            return result;
        }
        result.pass = true;
        for (std::size_t i = 1; i < points.size(); ++i) {
            if (points[i].value > points[i - 1].value + 1e-9) {
                result.pass = false;
                result.measured = points[i].value - points[i - 1].value;
                result.detail = name + " increases at " + mon::format_value(points[i].t.seconds()) +
                                " s";
                return result;
            }
        }
        result.detail = name + " non-increasing over the run";
        return result;
    };
    results.push_back(non_increasing("exp2.b.mcs_non_increasing", "ran_ue_mcs_ul"));
    results.push_back(non_increasing("exp2.b.cqi_non_increasing", "ran_ue_cqi"));

    auto strictly_lower = [&](const std::string& id, const std::string& name) {
        AssertionResult result;
        result.id = id;
        result.bound = "after(-12 dB) < before(first step)";
        std::vector<double> before, after;
        for (const auto& p : single_series(dump, name, ue1, 1, 39)) before.push_back(p.value);
        for (const auto& p : single_series(dump, name, ue1, 101, dump.duration_s)) {
            after.push_back(p.value);
        }
        auto med_before = median_value(before);
        auto med_after = median_value(after);
        if (!med_before || !med_after) {
            result.pass = false;
            result.detail = "missing samples";
            return result;
        }
        result.measured = *med_after;
        result.pass = *med_after < *med_before;
        result.detail = name + ": " + mon::format_value(*med_before) + " before, " +
                        mon::format_value(*med_after) + " after";
        return result;
    };
    results.push_back(strictly_lower("exp2.b.mcs_lower_after", "ran_ue_mcs_ul"));
    results.push_back(strictly_lower("exp2.b.cqi_lower_after", "ran_ue_cqi"));

    // (c) uplink bitrate plateaus and the capacity collapse
    const std::string ul = "ran_ue_uplink_bitrate_bps";
    results.push_back(check_within_pct("exp2.c.ul_bitrate_before",
                                       mean_value(single_series(dump, ul, ue1, 90, 99)), 120e6,
                                       0.05, "uplink bitrate in [90,99] s"));
    results.push_back(check_within_pct("exp2.c.ul_bitrate_after",
                                       mean_value(single_series(dump, ul, ue1, 105,
                                                                dump.duration_s)),
                                       66.447e6, 0.05, "uplink bitrate after the -12 dB step"));
    {
        AssertionResult result;
        result.id = "exp2.c.ul_non_increasing";
        result.bound = "non-increasing from 12 s";
        auto points = single_series(dump, ul, ue1, 12, dump.duration_s);
        result.pass = !points.empty();
        if (points.empty()) {
            result.detail = "no samples";
        } else {
            result.detail = "uplink bitrate monotone after the start-up ramp";
            for (std::size_t i = 1; i < points.size(); ++i) {
                if (points[i].value > points[i - 1].value + 1e-3) {
                    result.pass = false;
                    result.detail = "uplink bitrate increases at " +
                                    mon::format_value(points[i].t.seconds()) + " s";
                    break;
                }
            }
        }
        results.push_back(std::move(result));
    }
    return results;
}

}  // namespace mecsim::scenario
