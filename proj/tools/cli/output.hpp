#pragma once

// CSV files and the JSON run manifest.

#include "config.hpp"

#include <hardedge/version.hpp>

#include <json.hpp>

#include <array>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hecli {

inline constexpr const char* manifest_schema = "hardedge-manifest/1";

/// Shortest decimal that reads back to the same double; never locale dependent.
inline std::string format_double(double v)
{
    std::array<char, 32> buf{};
    const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), r.ptr);
}

inline std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4)
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
    return s;
}

/// Buffered CSV with a fixed header. Rows are checked against the header
/// width; fields with commas, quotes or newlines are quoted.
class CsvTable {
public:
    using Cell = std::variant<long, double, std::string>;

    CsvTable(std::string file, std::string schema, std::vector<std::string> columns)
        : file_(std::move(file)), schema_(std::move(schema)), columns_(std::move(columns))
    {
        write_row_strings(columns_);
    }

    void row(const std::vector<Cell>& cells)
    {
        if (cells.size() != columns_.size())
            throw std::logic_error("CsvTable: row width does not match header of " + file_);
        std::vector<std::string> s;
        s.reserve(cells.size());
        for (const Cell& c : cells) {
            if (const auto* l = std::get_if<long>(&c))
                s.push_back(std::to_string(*l));
            else if (const auto* d = std::get_if<double>(&c))
                s.push_back(format_double(*d));
            else
                s.push_back(std::get<std::string>(c));
        }
        write_row_strings(s);
        ++rows_;
    }

    /// Writes the file under dir and returns its manifest entry.
    nlohmann::json save(const std::filesystem::path& dir) const
    {
        const auto path = dir / file_;
        std::ofstream out(path, std::ios::binary);
        out << text_;
        if (!out)
            throw ConfigError(path.string(), "--out", "cannot write file");
        return {{"file", file_}, {"schema", schema_}, {"columns", columns_}, {"rows", rows_},
                {"fnv1a64", hex64(fnv1a64(text_))}};
    }

    [[nodiscard]] const std::string& text() const noexcept { return text_; }

private:
    void write_row_strings(const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i)
                text_ += ',';
            const std::string& c = cells[i];
            if (c.find_first_of(",\"\n\r") == std::string::npos) {
                text_ += c;
                continue;
            }
            text_ += '"';
            for (char ch : c) {
                if (ch == '"')
                    text_ += '"';
                text_ += ch;
            }
            text_ += '"';
        }
        text_ += '\n';
    }

    std::string file_;
    std::string schema_;
    std::vector<std::string> columns_;
    std::string text_;
    long rows_ = 0;
};

/// Creates dir and checks that a file can be written there before any work starts.
inline void prepare_output_dir(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw ConfigError(dir.string(), "--out", "cannot create directory: " + ec.message());
    const auto probe = dir / ".hardedge-write-probe";
    {
        std::ofstream out(probe);
        if (!(out << "ok"))
            throw ConfigError(dir.string(), "--out", "directory is not writable");
    }
    std::filesystem::remove(probe, ec);
}

inline std::string utc_timestamp(std::chrono::system_clock::time_point t)
{
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Everything needed to rerun a command: config echo, command name and the
/// outputs' checksums, plus timing that is informational only.
struct RunManifest {
    std::string command;
    RunConfig config;
    nlohmann::json records = nlohmann::json::array();
    nlohmann::json extra = nlohmann::json::object();
    nlohmann::json outputs = nlohmann::json::array();
    std::chrono::system_clock::time_point started = std::chrono::system_clock::now();
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    [[nodiscard]] nlohmann::json to_json(unsigned threads) const
    {
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return {{"schema", manifest_schema},
                {"command", command},
                {"library_version", hardedge::version},
                {"config", config},
                {"started_utc", utc_timestamp(started)},
                {"wall_clock_seconds", wall},
                {"threads", threads},
                {"records", records},
                {"results", extra},
                {"outputs", outputs}};
    }

    void save(const std::filesystem::path& dir, unsigned threads) const
    {
        const auto path = dir / (command + ".manifest.json");
        std::ofstream out(path);
        out << to_json(threads).dump(2) << '\n';
        if (!out)
            throw ConfigError(path.string(), "--out", "cannot write manifest");
    }
};

/// Reads a manifest back into a command name and its config.
inline std::pair<std::string, RunConfig> load_manifest(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path, "manifest", "cannot open file");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
        if (j.at("schema").get<std::string>() != manifest_schema)
            throw ConfigError(path, "schema", "unsupported manifest schema '" + j.at("schema").get<std::string>() + "'");
        return {j.at("command").get<std::string>(), j.at("config").get<RunConfig>()};
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path, "manifest", e.what());
    }
}

}  // namespace hecli
