// SPDX-License-Identifier: Apache-2.0
#include "latsched/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

using latsched::cli::RunConfig;

// One string option per config key; only flags actually given override the file.
struct KeyFlags {
    std::map<std::string, std::string> values;

    void add_to(CLI::App& app) {
        for (const auto& key : latsched::cli::setting_keys()) {
            app.add_option("--" + key, values[key], "set " + key);
        }
    }

    void apply(const CLI::App& app, RunConfig& config) const {
        for (const auto& key : latsched::cli::setting_keys()) {
            if (app.count("--" + key) > 0) latsched::cli::apply_setting(config, key, values.at(key));
        }
    }
};

RunConfig resolve(const CLI::App& app, const std::string& config_file, const KeyFlags& flags) {
    RunConfig config;
    if (!config_file.empty()) latsched::cli::apply_config_file(config, config_file);
    latsched::cli::apply_env(config);
    flags.apply(app, config);
    latsched::cli::validate(config);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lattice-surgery scheduling simulator"};
    app.require_subcommand(1);

    std::string run_config_file;
    KeyFlags run_flags;
    auto* run = app.add_subcommand("run", "simulate every (circuit, scheme, seed) of a config");
    run->add_option("--config", run_config_file, "key = value config file")->check(CLI::ExistingFile);
    run_flags.add_to(*run);

    std::string sweep_config_file;
    KeyFlags sweep_flags;
    std::vector<std::string> axes;
    auto* sweep = app.add_subcommand("sweep", "Cartesian product of parameter axes");
    sweep->add_option("--config", sweep_config_file, "key = value config file")->check(CLI::ExistingFile);
    sweep->add_option("--axis", axes, "key=v1,v2,... (repeatable)");
    sweep_flags.add_to(*sweep);

    std::vector<std::string> csvs;
    std::string report_dir = "report";
    auto* report = app.add_subcommand("report", "plot data and speedup summary from result CSVs");
    report->add_option("csv", csvs, "summary.csv / sweep.csv files")->required();
    report->add_option("--out", report_dir, "directory for plot data files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run) {
            const RunConfig config = resolve(*run, run_config_file, run_flags);
            const auto outcome = latsched::cli::cmd_run(config, std::cerr);
            std::size_t failed = 0;
            for (const auto& r : outcome.records) failed += r.audit_ok ? 0 : 1;
            std::cout << outcome.records.size() << " runs written to " << config.output_dir << "\n";
            if (failed > 0) {
                std::cerr << "error: " << failed << " runs failed their audit\n";
                return 2;
            }
        } else if (*sweep) {
            const RunConfig config = resolve(*sweep, sweep_config_file, sweep_flags);
            std::vector<latsched::cli::SweepAxis> parsed;
            for (const auto& a : axes) parsed.push_back(latsched::cli::parse_axis(a));
            const auto outcome = latsched::cli::cmd_sweep(config, parsed, std::cerr);
            std::size_t failed = 0;
            for (const auto& r : outcome.records) failed += r.audit_ok ? 0 : 1;
            std::cout << outcome.records.size() << " rows written to " << config.output_dir << "/sweep.csv\n";
            if (failed > 0) {
                std::cerr << "error: " << failed << " runs failed their audit\n";
                return 2;
            }
        } else if (*report) {
            latsched::cli::cmd_report(csvs, report_dir, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
