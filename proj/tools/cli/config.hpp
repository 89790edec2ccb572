#pragma once

// Run configuration: a sectioned key = value file, environment overrides and
// command-line flags, in increasing order of precedence.

#include <hardedge/model.hpp>

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hecli {

/// Bad input. Carries "where" (file:line or flag name) and the field.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& where, const std::string& field, const std::string& what)
        : std::runtime_error(where + ": " + field + ": " + what)
    {
    }
};

struct RunConfig {
    hardedge::ModelParams model;
    hardedge::ObservableGrid grid{1, {1.0, 1.0}, {0.5, -0.3}};
    std::vector<long> n_list;
    std::uint64_t seed = 1;
    long samples = 0;
    unsigned threads = 0;  // 0: hardware concurrency
    std::string out = "out";
    bool points = false;
    double tolerance_scale = 1.0;
    // file:line of each section header, for diagnostics that span a section
    std::map<std::string, std::string> origin;
};

inline void to_json(nlohmann::json& j, const RunConfig& c)
{
    j = {{"model", {{"b", c.model.b}, {"alpha", c.model.alpha}, {"rho1", c.model.rho1}, {"rho2", c.model.rho2}}},
         {"grid", {{"m", c.grid.m}, {"t", c.grid.t}, {"u", c.grid.u}}},
         {"run", {{"n_list", c.n_list}, {"seed", c.seed}, {"samples", c.samples}, {"points", c.points}}},
         {"selftest", {{"tolerance_scale", c.tolerance_scale}}}};
}

inline void from_json(const nlohmann::json& j, RunConfig& c)
{
    const auto& m = j.at("model");
    c.model = {m.at("b").get<double>(), m.at("alpha").get<double>(), m.at("rho1").get<double>(),
               m.at("rho2").get<double>()};
    const auto& g = j.at("grid");
    c.grid = {g.at("m").get<int>(), g.at("t").get<std::vector<double>>(), g.at("u").get<std::vector<double>>()};
    const auto& r = j.at("run");
    c.n_list = r.at("n_list").get<std::vector<long>>();
    c.seed = r.at("seed").get<std::uint64_t>();
    c.samples = r.at("samples").get<long>();
    c.points = r.at("points").get<bool>();
    c.tolerance_scale = j.at("selftest").at("tolerance_scale").get<double>();
}

namespace detail {

inline std::string trim(std::string s)
{
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string::npos)
        return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(trim(item));
    return out;
}

template <class T>
std::optional<T> parse_number(const std::string& s)
{
    T v{};
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || s.empty())
        return std::nullopt;
    if constexpr (std::is_floating_point_v<T>)
        if (!std::isfinite(v))
            return std::nullopt;
    return v;
}

}  // namespace detail

/// Positive, strictly increasing.
inline std::vector<long> parse_n_list(const std::string& text, const std::string& where)
{
    std::vector<long> out;
    for (const std::string& item : detail::split_list(text)) {
        const auto v = detail::parse_number<long>(item);
        if (!v)
            throw ConfigError(where, "n_list", "expected an integer, got '" + item + "'");
        if (*v < 1)
            throw ConfigError(where, "n_list", "entries must be positive, got " + item);
        if (!out.empty() && *v <= out.back())
            throw ConfigError(where, "n_list", "entries must be strictly increasing");
        out.push_back(*v);
    }
    if (out.empty())
        throw ConfigError(where, "n_list", "empty list");
    return out;
}

/// Parses the sectioned file. Unknown sections or keys and duplicate keys are
/// errors, so a typo never falls back silently to a default.
inline RunConfig load_config(std::istream& in, const std::string& name, RunConfig cfg = {})
{
    using detail::parse_number;
    std::map<std::string, int> seen;
    bool relative = false;
    int relative_line = 0;
    std::string section;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos)
            line.erase(hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        const std::string where = name + ":" + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(where, line, "unterminated section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section != "model" && section != "grid" && section != "run" && section != "selftest")
                throw ConfigError(where, "[" + section + "]", "unknown section");
            cfg.origin.emplace(section, where);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where, line, "expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError(where, key, "key outside any section");
        const std::string field = section + "." + key;
        if (auto [it, fresh] = seen.emplace(field, lineno); !fresh)
            throw ConfigError(where, field, "duplicate key (first set on line " + std::to_string(it->second) + ")");

        auto real = [&]() {
            const auto v = parse_number<double>(value);
            if (!v)
                throw ConfigError(where, field, "expected a finite number, got '" + value + "'");
            return *v;
        };
        auto integer = [&]() {
            const auto v = parse_number<long>(value);
            if (!v)
                throw ConfigError(where, field, "expected an integer, got '" + value + "'");
            return *v;
        };
        auto boolean = [&]() {
            if (value == "true" || value == "1" || value == "yes")
                return true;
            if (value == "false" || value == "0" || value == "no")
                return false;
            throw ConfigError(where, field, "expected true or false, got '" + value + "'");
        };
        auto reals = [&]() {
            std::vector<double> out;
            for (const std::string& item : detail::split_list(value)) {
                const auto v = parse_number<double>(item);
                if (!v)
                    throw ConfigError(where, field, "expected finite numbers, got '" + item + "'");
                out.push_back(*v);
            }
            return out;
        };

        if (field == "model.b")
            cfg.model.b = real();
        else if (field == "model.alpha")
            cfg.model.alpha = real();
        else if (field == "model.rho1")
            cfg.model.rho1 = real();
        else if (field == "model.rho2")
            cfg.model.rho2 = real();
        else if (field == "model.relative_radii") {
            relative = boolean();
            relative_line = lineno;
        } else if (field == "grid.m") {
            const long m = integer();
            if (m < 1 || m > 64)
                throw ConfigError(where, field, "must lie in 1..64");
            cfg.grid.m = static_cast<int>(m);
        } else if (field == "grid.t")
            cfg.grid.t = reals();
        else if (field == "grid.u")
            cfg.grid.u = reals();
        else if (field == "run.n_list")
            cfg.n_list = parse_n_list(value, where);
        else if (field == "run.seed") {
            const auto v = parse_number<std::uint64_t>(value);
            if (!v)
                throw ConfigError(where, field, "expected a nonnegative integer, got '" + value + "'");
            cfg.seed = *v;
        } else if (field == "run.samples") {
            cfg.samples = integer();
            if (cfg.samples < 0)
                throw ConfigError(where, field, "must be nonnegative");
        } else if (field == "run.threads") {
            const long t = integer();
            if (t < 0 || t > 4096)
                throw ConfigError(where, field, "must lie in 0..4096");
            cfg.threads = static_cast<unsigned>(t);
        } else if (field == "run.out")
            cfg.out = value;
        else if (field == "run.points")
            cfg.points = boolean();
        else if (field == "selftest.tolerance_scale") {
            cfg.tolerance_scale = real();
            if (cfg.tolerance_scale < 0.0)
                throw ConfigError(where, field, "must be nonnegative");
        } else
            throw ConfigError(where, field, "unknown key");
    }
    if (relative) {
        // rho1, rho2 given as fractions of the droplet radius b^{-1/(2b)}
        const double r = cfg.model.droplet_radius();
        if (!std::isfinite(r))
            throw ConfigError(name + ":" + std::to_string(relative_line), "model.relative_radii",
                              "droplet radius is not finite");
        cfg.model.rho1 *= r;
        cfg.model.rho2 *= r;
    }
    return cfg;
}

inline RunConfig load_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path, "--config", "cannot open file");
    return load_config(in, path);
}

/// Model and grid validation, reported against the section that holds them.
inline void validate(const RunConfig& cfg, bool need_n_list)
{
    auto where = [&](const std::string& section) {
        const auto it = cfg.origin.find(section);
        return it == cfg.origin.end() ? std::string("defaults") : it->second;
    };
    try {
        cfg.model.validate();
    } catch (const hardedge::DomainError& e) {
        throw ConfigError(where("model"), "[model]", e.what());
    }
    try {
        cfg.grid.validate();
    } catch (const hardedge::DomainError& e) {
        throw ConfigError(where("grid"), "[grid]", e.what());
    }
    if (need_n_list && cfg.n_list.empty())
        throw ConfigError("config", "run.n_list", "required (set it in [run], HARDEDGE_N_LIST or --n-list)");
}

}  // namespace hecli
