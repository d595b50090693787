#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "disperse/errors.hpp"
#include "disperse/experiments.hpp"

using nlohmann::json;

namespace {

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw disperse::ArgumentError("cannot open config file: " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::parse_error& e) {
        throw disperse::ArgumentError(std::string("config parse error: ") + e.what());
    }
    return cfg;
}

// --set key=value; the value is parsed as JSON when possible, else kept as
// a string, so --set m=2 and --set u0=quartic both work
void apply_overrides(json& cfg, const std::vector<std::string>& sets) {
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw disperse::ArgumentError("--set expects key=value, got: " + kv);
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        json parsed = json::parse(val, nullptr, false);
        cfg[key] = parsed.is_discarded() ? json(val) : parsed;
    }
}

std::vector<json> parse_values(const std::string& csv) {
    std::vector<json> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        json parsed = json::parse(item, nullptr, false);
        out.push_back(parsed.is_discarded() ? json(item) : parsed);
    }
    if (out.empty()) throw disperse::ArgumentError("--values produced no entries");
    return out;
}

void write_report(const json& report, const json& cfg) {
    std::cout << report.dump(2) << std::endl;
    if (cfg.contains("output_path")) {
        const std::string path = cfg.at("output_path").get<std::string>();
        std::ofstream out(path);
        if (!out) throw disperse::ArgumentError("cannot write report to " + path);
        out << report.dump(2) << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical verification experiments for a 1-D higher-order "
                 "dispersive model: kernel decay, weighted convexity, Carleman "
                 "quotients, multiplier uniformity. Reports are JSON with sorted "
                 "keys; sweep CSVs carry one row per run plus a min/max summary."};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    auto* run = app.add_subcommand("run", "run one experiment from a JSON config");
    run->add_option("--config", config_path, "path to the JSON config")->required();
    run->add_option("--set", sets, "key=value overrides applied on top of the config");

    std::string sweep_config, axis, values_csv;
    std::vector<std::string> sweep_sets;
    auto* sweep = app.add_subcommand("sweep", "run the config once per axis value");
    sweep->add_option("--config", sweep_config, "path to the JSON config template")->required();
    sweep->add_option("--axis", axis, "config key to vary")->required();
    sweep->add_option("--values", values_csv, "comma separated values for the axis")->required();
    sweep->add_option("--set", sweep_sets, "key=value overrides applied on top of the config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) {
            json cfg = load_config(config_path);
            apply_overrides(cfg, sets);
            const json report = disperse::run_experiment(cfg);
            write_report(report, cfg);
            return report.at("pass").get<bool>() ? 0 : 1;
        }
        json cfg = load_config(sweep_config);
        apply_overrides(cfg, sweep_sets);
        const json result = disperse::run_sweep(cfg, axis, parse_values(values_csv));
        write_report(result, cfg);
        if (cfg.contains("csv_path")) {
            std::ofstream out(cfg.at("csv_path").get<std::string>());
            out << result.at("csv").get<std::string>();
        }
        if (result.at("summary").at("errors").get<bool>()) return 3;
        for (const auto& row : result.at("rows"))
            if (!row.at("pass").get<bool>()) return 1;
        return 0;
    } catch (const disperse::ArgumentError& e) {
        std::cerr << "config error: " << e.what() << std::endl;
        return 2;
    } catch (const disperse::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << std::endl;
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 3;
    }
}
