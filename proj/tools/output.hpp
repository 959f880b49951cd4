#pragma once

// Deterministic table serialization, atomic file writes and checksums.

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "run_config.hpp"

namespace dqpt::cli {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
    std::string to_csv() const;
    /// Array of row objects; numbers use the same text as the CSV.
    std::string to_json() const;
};

std::string sha256_hex(const std::string& bytes);

/// Writes to a hidden temporary in the same directory, then renames over path.
void write_atomic(const std::filesystem::path& path, const std::string& bytes);

struct OutputFile {
    std::string name;
    std::string bytes;
};

/// Collects outputs in memory; nothing touches disk until commit().
class OutputSet {
public:
    void add_table(const std::string& stem, const Table& table, OutputFormat format);
    void add_text(const std::string& name, std::string bytes);
    const std::vector<OutputFile>& files() const { return files_; }

    /// Writes every file plus manifest.json and the timing.json sidecar.
    void commit(const std::filesystem::path& dir, const nlohmann::json& config,
                double wall_seconds) const;

private:
    std::vector<OutputFile> files_;
};

inline constexpr const char* kArtifactVersion = "1.0.0";

}  // namespace dqpt::cli
