#pragma once

#include "tplcnn/errors.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

namespace tplcnn {

/// Key-value scenario file: one `key=value` per line, `#` comments,
/// mandatory `schema=1` versioning field and a `kind` selecting the
/// subcommand. Every key must be consumed; unknown keys are rejected
/// before any simulation starts.
class Scenario {
public:
    static Scenario load(const std::string& path)
    {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open scenario file: " + path);
        return parse(in, path);
    }

    static Scenario parse(std::istream& in, const std::string& name = "<scenario>")
    {
        Scenario s;
        s.name_ = name;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ConfigError(name + ":" + std::to_string(lineno) +
                                  ": expected key=value, got '" + line + "'");
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) {
                throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");
            }
            if (!s.values_.emplace(key, value).second) {
                throw ConfigError(name + ": duplicate key '" + key + "'");
            }
        }
        if (s.get<int>("schema") != 1) {
            throw ConfigError(name + ": unsupported schema version");
        }
        return s;
    }

    const std::string& name() const { return name_; }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    template <typename T>
    T get(const std::string& key) const
    {
        auto it = values_.find(key);
        if (it == values_.end()) {
            throw ConfigError(name_ + ": missing required key '" + key + "'");
        }
        consumed_.insert(key);
        return convert<T>(key, it->second);
    }

    template <typename T>
    T get_or(const std::string& key, T fallback) const
    {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        consumed_.insert(key);
        return convert<T>(key, it->second);
    }

    template <typename T>
    std::optional<T> get_optional(const std::string& key) const
    {
        auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        consumed_.insert(key);
        return convert<T>(key, it->second);
    }

    /// Comma-separated list value.
    std::vector<double> get_list(const std::string& key) const
    {
        const std::string raw = get<std::string>(key);
        std::vector<double> out;
        std::istringstream ss(raw);
        std::string item;
        while (std::getline(ss, item, ',')) {
            out.push_back(convert<double>(key, trim(item)));
        }
        if (out.empty()) throw ConfigError(name_ + ": empty list for '" + key + "'");
        return out;
    }

    /// Rejects keys the caller never consumed.
    void finish() const
    {
        for (const auto& [key, value] : values_) {
            if (!consumed_.count(key)) {
                throw ConfigError(name_ + ": unknown key '" + key + "'");
            }
        }
    }

private:
    static std::string trim(const std::string& s)
    {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return {};
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    }

    template <typename T>
    static T convert(const std::string& key, const std::string& raw)
    {
        if constexpr (std::is_same_v<T, std::string>) {
            return raw;
        } else {
            std::istringstream ss(raw);
            T out;
            if (!(ss >> out) || !(ss >> std::ws).eof()) {
                throw ConfigError("bad value for '" + key + "': '" + raw + "'");
            }
            return out;
        }
    }

    std::string name_;
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> consumed_;
};

} // namespace tplcnn
