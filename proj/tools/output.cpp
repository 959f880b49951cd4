#include "output.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unistd.h>

#include "dqpt/errors.hpp"

namespace dqpt::cli {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return {buf.data(), ptr};
}

namespace {

std::string cell_text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

std::string json_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) {
        // JSON has no literal for non-finite values.
        return std::isfinite(*d) ? format_double(*d) : "null";
    }
    if (std::holds_alternative<long long>(c)) return cell_text(c);
    return nlohmann::json(std::get<std::string>(c)).dump();
}

}  // namespace

void Table::add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("Table::add: column count mismatch");
    rows.push_back(std::move(row));
}

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += cell_text(row[c]);
        }
        out += '\n';
    }
    return out;
}

std::string Table::to_json() const {
    std::string out = "[\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out += "  {";
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out += ", ";
            out += nlohmann::json(columns[c]).dump() + ": " + json_cell(rows[r][c]);
        }
        out += r + 1 < rows.size() ? "},\n" : "}\n";
    }
    out += "]\n";
    return out;
}

std::string sha256_hex(const std::string& bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex += kHex[digest[i] >> 4];
        hex += kHex[digest[i] & 0xf];
    }
    return hex;
}

void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
    const auto tmp = path.parent_path() /
                     ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw std::runtime_error("write to '" + tmp.string() + "' failed");
        }
    }
    std::filesystem::rename(tmp, path);
}

void OutputSet::add_table(const std::string& stem, const Table& table, OutputFormat format) {
    if (format == OutputFormat::csv)
        files_.push_back({stem + ".csv", table.to_csv()});
    else
        files_.push_back({stem + ".json", table.to_json()});
}

void OutputSet::add_text(const std::string& name, std::string bytes) {
    files_.push_back({name, std::move(bytes)});
}

void OutputSet::commit(const std::filesystem::path& dir, const nlohmann::json& config,
                       double wall_seconds) const {
    std::filesystem::create_directories(dir);
    nlohmann::json manifest;
    manifest["artifact"] = "dqpt";
    manifest["version"] = kArtifactVersion;
    manifest["config"] = config;
    manifest["outputs"] = nlohmann::json::array();
    for (const auto& f : files_) {
        write_atomic(dir / f.name, f.bytes);
        manifest["outputs"].push_back(
            {{"file", f.name}, {"sha256", sha256_hex(f.bytes)}, {"bytes", f.bytes.size()}});
    }
    write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
    // Wall-clock time varies run to run, so it lives outside the manifest.
    const nlohmann::json timing = {{"wall_seconds", wall_seconds}};
    write_atomic(dir / "timing.json", timing.dump(2) + "\n");
}

}  // namespace dqpt::cli
