#pragma once

// Plain-text key-value configuration files: one `name = value` per line,
// `#` starts a comment, blank lines ignored.  Unknown keys are rejected by
// the consumer (the CLI) against its declared key set, so typos fail loudly
// instead of silently using defaults.

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qpm {

class Config {
  public:
    Config() = default;

    // Parses `name = value` lines.  Throws std::runtime_error on I/O or
    // syntax errors (missing '=', empty key).
    static Config from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) {
            throw std::runtime_error("config: cannot open file: " + path);
        }
        Config cfg;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) {
                line = line.substr(0, hash);
            }
            if (trim(line).empty()) {
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw std::runtime_error("config: missing '=' at " + path +
                                         ":" + std::to_string(lineno));
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) {
                throw std::runtime_error("config: empty key at " + path + ":" +
                                         std::to_string(lineno));
            }
            cfg.values_[key] = value;
        }
        return cfg;
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    double get_double(const std::string& key, double fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) {
            return fallback;
        }
        return parse_double(key, it->second);
    }

    // Verifies every present key belongs to `allowed`; throws on the first
    // unknown key.
    void require_known_keys(const std::set<std::string>& allowed) const {
        for (const auto& [key, value] : values_) {
            (void)value;
            if (allowed.count(key) == 0) {
                throw std::runtime_error("config: unknown key: " + key);
            }
        }
    }

    const std::map<std::string, std::string>& entries() const {
        return values_;
    }

  private:
    static std::string trim(const std::string& text) {
        std::size_t begin = 0;
        std::size_t end = text.size();
        while (begin < end &&
               std::isspace(static_cast<unsigned char>(text[begin]))) {
            ++begin;
        }
        while (end > begin &&
               std::isspace(static_cast<unsigned char>(text[end - 1]))) {
            --end;
        }
        return text.substr(begin, end - begin);
    }

    static double parse_double(const std::string& key,
                               const std::string& text) {
        std::size_t consumed = 0;
        double parsed = 0.0;
        try {
            parsed = std::stod(text, &consumed);
        } catch (const std::exception&) {
            throw std::runtime_error("config: key '" + key +
                                     "' has non-numeric value '" + text + "'");
        }
        if (consumed != text.size()) {
            throw std::runtime_error("config: key '" + key +
                                     "' has trailing junk in value '" + text +
                                     "'");
        }
        return parsed;
    }

    std::map<std::string, std::string> values_;
};

} // namespace qpm
