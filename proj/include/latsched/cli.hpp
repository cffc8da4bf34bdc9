// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "latsched/engine.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace latsched::cli {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Everything a run or sweep needs. Settings are addressed by key (the same
/// keys are accepted in config files, on the command line and as sweep axes).
struct RunConfig {
    std::vector<Scheme> schemes{Scheme::Dynamic};
    std::vector<std::string> circuits{"qft:18"};
    EngineConfig engine;
    double compression = 0.0;
    std::uint64_t compression_seed = 1;
    std::vector<std::uint64_t> seeds{1};
    std::string output_dir = "results";
    bool traces = false;
    int jobs = 1;
};

inline constexpr const char* kOutputDirEnv = "LATSCHED_OUTPUT_DIR";

/// Keys accepted by apply_setting, in documentation order.
const std::vector<std::string>& setting_keys();

/// Sets one key. Throws ConfigError on an unknown key or a bad value.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// key = value lines; '#' starts a comment; blank lines are ignored.
void apply_config_text(RunConfig& config, std::string_view text, const std::string& origin);
void apply_config_file(RunConfig& config, const std::string& path);

/// Output directory from the environment, if set.
void apply_env(RunConfig& config);

/// Range and value checks beyond per-key parsing.
void validate(const RunConfig& config);

/// "N" is seeds 1..N, "a..b" an inclusive range, "a,b,c" a list.
std::vector<std::uint64_t> parse_seeds(std::string_view text);

/// Resolved settings as key = value lines (round-trips through
/// apply_config_text).
std::string to_config_text(const RunConfig& config);

struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

/// "key=v1,v2,..." with at least one value and a known key.
SweepAxis parse_axis(std::string_view text);

/// One finished simulation with the settings that produced it.
struct RunRecord {
    std::string circuit;
    Scheme scheme = Scheme::Dynamic;
    double compression = 0.0;
    std::uint64_t compression_seed = 1;
    MetricsRecord metrics;
    bool audit_ok = true;
};

/// Column order of summary.csv and sweep.csv.
const std::vector<std::string>& csv_columns();
std::string csv_header();
std::string csv_row(const RunRecord& record);

struct RunOutcome {
    std::vector<RunRecord> records;  // circuit, scheme, seed order
};

/// Runs every (circuit, scheme, seed) of the config, writing per-run files
/// under output_dir and summary.csv. Failed audits are reported in the
/// records, not thrown.
RunOutcome cmd_run(const RunConfig& config, std::ostream& log);

/// Cartesian product of the axes over cmd_run's task list; writes
/// sweep.csv under output_dir.
RunOutcome cmd_sweep(const RunConfig& config, const std::vector<SweepAxis>& axes, std::ostream& log);

/// Reads result CSVs and writes plot data files (normalized.csv,
/// histograms.csv, samples.csv) to out_dir, printing a summary to `out`.
void cmd_report(const std::vector<std::string>& csv_paths, const std::string& out_dir, std::ostream& out);

/// Parsed CSV row keyed by column name. Throws ConfigError on a schema
/// mismatch (unknown or missing columns, wrong field count).
std::vector<std::map<std::string, std::string>> read_results_csv(const std::string& path);

}  // namespace latsched::cli
