#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "mecsim/mon/export.hpp"
#include "mecsim/scenario/runner.hpp"
#include "mecsim/util/doc.hpp"

namespace {

using namespace mecsim;

scenario::Scenario load_scenario(const std::string& path) {
    if (path == "experiment1") return scenario::builtin_experiment1();
    if (path == "experiment2") return scenario::builtin_experiment2();
    return scenario::load_scenario_file(path);
}

// "name" or "name{k=v,k2=v2}"
mon::SeriesSelector parse_selector(const std::string& text) {
    mon::SeriesSelector selector;
    auto brace = text.find('{');
    if (brace == std::string::npos) {
        selector.name = text;
        return selector;
    }
    selector.name = text.substr(0, brace);
    if (text.back() != '}') {
        throw SimError(Err::schema_error, "bad selector '" + text + "'");
    }
    std::string body = text.substr(brace + 1, text.size() - brace - 2);
    std::size_t pos = 0;
    while (pos < body.size()) {
        auto comma = body.find(',', pos);
        std::string pair = body.substr(pos, comma == std::string::npos ? std::string::npos
                                                                       : comma - pos);
        auto eq = pair.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw SimError(Err::schema_error, "bad selector label '" + pair + "'");
        }
        selector.filter[pair.substr(0, eq)] = pair.substr(eq + 1);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return selector;
}

// "Title|selector|rate(selector)|..."
std::pair<std::string, std::vector<mon::PanelSeries>> parse_panel(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        auto bar = text.find('|', pos);
        parts.push_back(text.substr(pos, bar == std::string::npos ? std::string::npos : bar - pos));
        if (bar == std::string::npos) break;
        pos = bar + 1;
    }
    if (parts.size() < 2) {
        throw SimError(Err::schema_error, "panel spec needs 'title|selector[|selector...]'");
    }
    std::vector<mon::PanelSeries> panel;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        mon::PanelSeries entry;
        std::string item = parts[i];
        if (item.rfind("rate(", 0) == 0 && item.back() == ')') {
            entry.as_rate = true;
            item = item.substr(5, item.size() - 6);
        }
        entry.selector = parse_selector(item);
        panel.push_back(std::move(entry));
    }
    return {parts[0], panel};
}

void print_assertions(const std::vector<scenario::AssertionResult>& assertions) {
    for (const auto& assertion : assertions) {
        std::cout << (assertion.pass ? "PASS " : "FAIL ") << assertion.id;
        if (assertion.measured) {
            std::cout << "  measured=" << mon::format_value(*assertion.measured);
        }
        std::cout << "  bound=" << assertion.bound;
        if (!assertion.detail.empty()) {
            std::cout << "  (" << assertion.detail << ")";
        }
        std::cout << "\n";
    }
}

int cmd_run(const std::string& scenario_path, std::uint64_t seed, const std::string& mode,
            std::string out_dir, const std::vector<std::string>& overrides,
            const scenario::ServeOptions& serve) {
    scenario::Scenario scn = load_scenario(scenario_path);
    for (const auto& text : overrides) {
        auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw SimError(Err::schema_error, "override must be key=value: '" + text + "'");
        }
        std::string key = text.substr(0, eq);
        const auto& known = scenario::known_override_keys();
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw SimError(Err::schema_error, "unknown override '" + key + "'");
        }
        scn.overrides[key] = std::stod(text.substr(eq + 1));
    }
    if (out_dir.empty()) {
        if (const char* env = std::getenv("SIM_OUT_DIR")) {
            out_dir = env;
        } else {
            out_dir = "out";
        }
    }

    scenario::RunOptions options;
    options.mode = mode == "serve" ? scenario::Mode::serve : scenario::Mode::fast;
    options.out_dir = out_dir;
    options.serve = serve;

    auto result = scenario::run_scenario(scn, seed, options);

    print_assertions(result.assertions);
    for (const auto& error : result.errors) {
        std::cerr << "event error: " << error << "\n";
    }
    std::cout << "scenario " << scn.name << " seed " << seed << ": wrote "
              << result.artifact_paths.size() + 1 << " artifacts to " << out_dir << " ("
              << mon::format_value(result.wall_ms) << " ms)\n";
    return scenario::all_passed(result.assertions) ? 0 : 1;
}

int cmd_check(int experiment, const std::string& tsdb_path, std::string report_path,
              double snr_step_tol) {
    auto dump = mon::TsdbDump::load_file(tsdb_path);
    std::vector<scenario::AssertionResult> assertions;
    if (experiment == 1) {
        std::vector<scenario::SessionRow> sessions;
        bool have_sessions = false;
        if (report_path.empty()) {
            auto slash = tsdb_path.find_last_of('/');
            report_path = (slash == std::string::npos ? std::string()
                                                      : tsdb_path.substr(0, slash + 1)) +
                          "report.json";
        }
        try {
            sessions = scenario::sessions_from_report(
                util::parse_json(util::read_file(report_path), report_path));
            have_sessions = true;
        } catch (const SimError&) {
            std::cerr << "warning: no session table at " << report_path
                      << "; the IP transition check will fail\n";
        }
        assertions = scenario::check_experiment1(dump, have_sessions ? &sessions : nullptr);
    } else {
        scenario::CheckOptions options;
        options.snr_step_tol_db = snr_step_tol;
        assertions = scenario::check_experiment2(dump, options);
    }
    print_assertions(assertions);
    return scenario::all_passed(assertions) ? 0 : 1;
}

int cmd_export(const std::string& tsdb_path, const std::string& csv_path,
               const std::vector<std::string>& selectors) {
    auto dump = mon::TsdbDump::load_file(tsdb_path);
    std::vector<mon::SeriesSelector> selection;
    for (const auto& text : selectors) {
        selection.push_back(parse_selector(text));
    }
    auto rows = mon::export_csv(dump.store, selection, csv_path);
    std::cout << "wrote " << rows << " rows to " << csv_path << "\n";
    return 0;
}

int cmd_plot(const std::string& tsdb_path, const std::string& panel_spec,
             const std::string& out_path) {
    auto dump = mon::TsdbDump::load_file(tsdb_path);
    auto [title, panel] = parse_panel(panel_spec);
    mon::render_panel_svg(dump.store, panel, title, out_path);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MEC-enabled 5G testbed simulator with end-to-end monitoring"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run a scenario and write its artifacts");
    std::string scenario_path;
    std::uint64_t seed = 42;
    std::string mode = "fast";
    std::string out_dir;
    std::vector<std::string> overrides;
    scenario::ServeOptions serve;
    run->add_option("--scenario", scenario_path,
                    "scenario file (or builtin: experiment1, experiment2)")
        ->required();
    run->add_option("--seed", seed, "random seed");
    run->add_option("--mode", mode, "fast or serve")->check(CLI::IsMember({"fast", "serve"}));
    run->add_option("--out", out_dir, "output directory (default $SIM_OUT_DIR or ./out)");
    run->add_option("--override", overrides, "parameter override key=value (repeatable)");
    run->add_option("--exporter-port-base", serve.exporter_base_port,
                    "serve mode: first node exporter port");
    run->add_option("--sampler-port", serve.sampler_port, "serve mode: sampler exporter port");
    run->add_option("--ran-api-port", serve.ran_api_port, "serve mode: RAN stats WebSocket port");

    // check
    auto* check = app.add_subcommand("check", "evaluate experiment assertions against a dump");
    int experiment = 1;
    std::string tsdb_path;
    std::string report_path;
    double snr_step_tol = 0.1;
    check->add_option("--experiment", experiment, "1 or 2")->required()->check(CLI::Range(1, 2));
    check->add_option("--tsdb", tsdb_path, "tsdb dump path")->required();
    check->add_option("--report", report_path, "run report path (default: next to the dump)");
    check->add_option("--snr-step-tol", snr_step_tol, "SNR step tolerance in dB (experiment 2)");

    // export
    auto* exp = app.add_subcommand("export", "export series to CSV");
    std::string csv_path;
    std::vector<std::string> selectors;
    exp->add_option("--tsdb", tsdb_path, "tsdb dump path")->required();
    exp->add_option("--csv", csv_path, "output CSV path")->required();
    exp->add_option("--series", selectors, "series selector name{k=v,...} (repeatable)");

    // plot
    auto* plot = app.add_subcommand("plot", "render a panel SVG from a dump");
    std::string panel_spec;
    std::string svg_path;
    plot->add_option("--tsdb", tsdb_path, "tsdb dump path")->required();
    plot->add_option("--panel", panel_spec, "panel spec: 'title|selector[|rate(selector)...]'")
        ->required();
    plot->add_option("--out", svg_path, "output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) {
            return cmd_run(scenario_path, seed, mode, out_dir, overrides, serve);
        }
        if (check->parsed()) {
            return cmd_check(experiment, tsdb_path, report_path, snr_step_tol);
        }
        if (exp->parsed()) {
            return cmd_export(tsdb_path, csv_path, selectors);
        }
        if (plot->parsed()) {
            return cmd_plot(tsdb_path, panel_spec, svg_path);
        }
    } catch (const SimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        Err code = e.code();
        if (code == Err::schema_error || code == Err::parse_error || code == Err::io_error) {
            return 2;
        }
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
