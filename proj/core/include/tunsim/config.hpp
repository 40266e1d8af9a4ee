#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tunsim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sectioned key/value files:
//   [section.name]
//   key = value        # comment
// Unknown sections/keys are surfaced by the consumers; diagnostics carry
// file and line.
class ConfigFile {
public:
    struct Entry {
        std::string value;
        int line = 0;
    };

    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has_section(const std::string& name) const;
    bool has_key(const std::string& section, const std::string& key) const;
    std::vector<std::string> section_names() const;
    std::vector<std::string> keys(const std::string& section) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int64_t get_int(const std::string& section, const std::string& key) const;
    int64_t get_int(const std::string& section, const std::string& key, int64_t fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

    // Applies "section.key=value" strings, as given on the command line.
    void apply_override(const std::string& assignment);

    const std::string& origin() const { return origin_; }

    // FNV-1a over the parsed content; stable across runs.
    uint64_t content_hash() const;

private:
    const Entry* find(const std::string& section, const std::string& key) const;
    [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& why) const;

    std::string origin_;
    // insertion-ordered sections and keys
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, Entry>>>> sections_;
};

}  // namespace tunsim
