#pragma once

// Resolved settings for one CLI run. Values come from built-in defaults, then
// an optional INI-style config file, then command-line flags.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dqpt/chain.hpp"
#include "dqpt/echo.hpp"
#include "dqpt/quench.hpp"

namespace dqpt::cli {

enum class Command { rate_function, heatmap, otoc, spectra, oracle_compare, pulse_schedule };
enum class OutputFormat { csv, json };
enum class OracleMode { matched, literal };

std::string to_string(Command c);
Command parse_command(const std::string& text);
std::string to_string(OutputFormat f);
OutputFormat parse_format(const std::string& text);
std::string to_string(OracleMode m);
OracleMode parse_oracle_mode(const std::string& text);

struct RunConfig {
    Command command = Command::rate_function;

    // [quench]
    double g_i = 0.0;
    std::optional<std::vector<double>> g_f;
    std::optional<int> n_spins;
    std::optional<GridMode> grid;

    // [echo]
    std::optional<int> n_phi;
    Aggregation aggregation = Aggregation::mean;
    TimeAxis time_axis = TimeAxis::absolute;
    int m_max = 2;
    double dw_threshold = kDefaultWellThreshold;

    // [time]
    std::optional<double> t_max;
    std::optional<int> steps;

    // [oracle]
    OracleMode oracle_mode = OracleMode::matched;
    Boundary bc = Boundary::periodic;
    double tolerance = 1e-6;

    // [pulse]
    double pulse_constant = 1.0;
    int n_t = 100;

    // [outputs]
    std::filesystem::path out_dir = "out";
    OutputFormat format = OutputFormat::csv;

    // [run]
    int threads = 0;  // 0: OpenMP default
    std::uint64_t seed = 0;
};

/// Reads `[section]` / `key = value` text into cfg. Lists are comma separated;
/// `#` and `;` start comments. Unknown sections or keys raise ConfigError.
void apply_config_text(RunConfig& cfg, const std::string& text);
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Sets one `section.key` field from its text form.
void set_field(RunConfig& cfg, const std::string& field, const std::string& value);

/// Fills command-specific defaults for every unset optional field.
RunConfig resolve(const RunConfig& cfg);

/// Checks a resolved config against module preconditions. Throws ConfigError
/// naming the offending field; nothing has been computed or written yet.
void validate(const RunConfig& cfg);

nlohmann::json to_json(const RunConfig& resolved);

}  // namespace dqpt::cli
