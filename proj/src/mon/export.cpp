#include "mecsim/mon/export.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <tuple>

namespace mecsim::mon {

std::string labels_csv(const Labels& labels) {
    std::string out;
    for (const auto& [k, v] : labels) {
        if (!out.empty()) out += ";";
        out += k + "=" + v;
    }
    return out;
}

std::size_t export_csv(const SeriesStore& store, const std::vector<SeriesSelector>& selection,
                       const std::string& path) {
    auto slices = store.select(selection);

    struct Row {
        sim::SimTime t;
        std::string name;
        std::string labels;
        double value;
    };
    std::vector<Row> rows;
    for (const auto& slice : slices) {
        std::string labels = labels_csv(slice.key.labels);
        for (const auto& point : slice.points) {
            rows.push_back(Row{point.t, slice.key.name, labels, point.value});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.t, a.name, a.labels) < std::tie(b.t, b.name, b.labels);
    });

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw SimError(Err::io_error, "cannot write " + path);
    }
    out << "timestamp_s,name,labels,value\n";
    for (const auto& row : rows) {
        out << format_value(row.t.seconds()) << "," << row.name << "," << row.labels << ","
            << format_value(row.value) << "\n";
    }
    if (!out) {
        throw SimError(Err::io_error, "short write to " + path);
    }
    return rows.size();
}

std::vector<Point> rate_series(const std::vector<Point>& points) {
    std::vector<Point> out;
    for (std::size_t i = 1; i < points.size(); ++i) {
        double dt = points[i].t.seconds() - points[i - 1].t.seconds();
        if (dt <= 0) {
            continue;
        }
        out.push_back(Point{points[i].t, (points[i].value - points[i - 1].value) / dt});
    }
    return out;
}

namespace {

constexpr int view_width = 960;
constexpr int view_height = 480;
constexpr int margin_left = 70;
constexpr int margin_right = 20;
constexpr int margin_top = 40;
constexpr int margin_bottom = 50;

const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                         "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void render_panel_svg(const SeriesStore& store, const std::vector<PanelSeries>& panel,
                      const std::string& title, const std::string& path) {
    struct Drawn {
        std::string legend;
        std::vector<Point> points;
    };
    std::vector<Drawn> drawn;
    for (const auto& entry : panel) {
        auto slices = store.select({entry.selector});
        for (auto& slice : slices) {
            std::string legend = slice.key.name + render_label_set(slice.key.labels);
            if (entry.as_rate) {
                legend = "rate(" + legend + ")";
                drawn.push_back(Drawn{legend, rate_series(slice.points)});
            } else {
                drawn.push_back(Drawn{legend, std::move(slice.points)});
            }
        }
    }
    std::erase_if(drawn, [](const Drawn& d) { return d.points.empty(); });
    if (drawn.empty()) {
        throw SimError(Err::empty_selection, "panel '" + title + "' matched no series");
    }

    double t_min = drawn[0].points.front().t.seconds();
    double t_max = t_min;
    double v_min = drawn[0].points.front().value;
    double v_max = v_min;
    for (const auto& d : drawn) {
        for (const auto& p : d.points) {
            t_min = std::min(t_min, p.t.seconds());
            t_max = std::max(t_max, p.t.seconds());
            v_min = std::min(v_min, p.value);
            v_max = std::max(v_max, p.value);
        }
    }
    if (t_max == t_min) t_max = t_min + 1;
    if (v_max == v_min) v_max = v_min + 1;
    // include zero so flat plateaus read against a baseline
    if (v_min > 0 && v_min < 0.5 * v_max) v_min = 0;

    const double plot_w = view_width - margin_left - margin_right;
    const double plot_h = view_height - margin_top - margin_bottom;
    auto x_of = [&](double t) { return margin_left + (t - t_min) / (t_max - t_min) * plot_w; };
    auto y_of = [&](double v) {
        return margin_top + plot_h - (v - v_min) / (v_max - v_min) * plot_h;
    };

    std::string svg;
    int legend_height = 18 * static_cast<int>(drawn.size());
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(view_width) +
           "\" height=\"" + std::to_string(view_height + legend_height) + "\" viewBox=\"0 0 " +
           std::to_string(view_width) + " " + std::to_string(view_height + legend_height) +
           "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + std::to_string(view_width / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" + xml_escape(title) + "</text>\n";

    // axes with five labelled ticks each
    svg += "<g stroke=\"#333\" stroke-width=\"1\">\n";
    svg += "<line x1=\"" + std::to_string(margin_left) + "\" y1=\"" + std::to_string(margin_top) +
           "\" x2=\"" + std::to_string(margin_left) + "\" y2=\"" +
           std::to_string(margin_top + static_cast<int>(plot_h)) + "\"/>\n";
    svg += "<line x1=\"" + std::to_string(margin_left) + "\" y1=\"" +
           std::to_string(margin_top + static_cast<int>(plot_h)) + "\" x2=\"" +
           std::to_string(margin_left + static_cast<int>(plot_w)) + "\" y2=\"" +
           std::to_string(margin_top + static_cast<int>(plot_h)) + "\"/>\n";
    svg += "</g>\n";
    for (int i = 0; i <= 4; ++i) {
        double t = t_min + (t_max - t_min) * i / 4.0;
        double v = v_min + (v_max - v_min) * i / 4.0;
        svg += "<text x=\"" + format_value(x_of(t)) + "\" y=\"" +
               std::to_string(view_height - margin_bottom + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               format_value(t) + "</text>\n";
        svg += "<text x=\"" + std::to_string(margin_left - 8) + "\" y=\"" +
               format_value(y_of(v) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               format_value(v) + "</text>\n";
    }
    svg += "<text x=\"" + std::to_string(view_width / 2) + "\" y=\"" +
           std::to_string(view_height - 8) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">time (s)"
           "</text>\n";

    for (std::size_t i = 0; i < drawn.size(); ++i) {
        const char* color = palette[i % std::size(palette)];
        std::string points_attr;
        for (const auto& p : drawn[i].points) {
            points_attr += format_value(x_of(p.t.seconds())) + "," + format_value(y_of(p.value)) + " ";
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + points_attr + "\"/>\n";
        int ly = view_height + 14 + 18 * static_cast<int>(i);
        svg += "<rect x=\"" + std::to_string(margin_left) + "\" y=\"" + std::to_string(ly - 9) +
               "\" width=\"12\" height=\"4\" fill=\"" + color + "\"/>\n";
        svg += "<text x=\"" + std::to_string(margin_left + 18) + "\" y=\"" + std::to_string(ly) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + xml_escape(drawn[i].legend) +
               "</text>\n";
    }
    svg += "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw SimError(Err::io_error, "cannot write " + path);
    }
    out << svg;
    if (!out) {
        throw SimError(Err::io_error, "short write to " + path);
    }
}

}  // namespace mecsim::mon
