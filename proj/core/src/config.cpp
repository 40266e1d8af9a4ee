#include "tunsim/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace tunsim {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& s) {
    bool saw_space = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if ((s[i] == '#' || s[i] == ';') && (i == 0 || saw_space)) return s.substr(0, i);
        saw_space = (s[i] == ' ' || s[i] == '\t');
    }
    return s;
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    cfg.origin_ = origin;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    std::string section;
    std::vector<std::pair<std::string, Entry>>* bucket = nullptr;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            cfg.sections_.emplace_back(section, std::vector<std::pair<std::string, Entry>>{});
            bucket = &cfg.sections_.back().second;
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (!bucket)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": key outside any section");
        bucket->emplace_back(key, Entry{value, lineno});
    }
    return cfg;
}

bool ConfigFile::has_section(const std::string& name) const {
    for (const auto& [s, _] : sections_)
        if (s == name) return true;
    return false;
}

bool ConfigFile::has_key(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

std::vector<std::string> ConfigFile::section_names() const {
    std::vector<std::string> names;
    for (const auto& [s, _] : sections_) names.push_back(s);
    return names;
}

std::vector<std::string> ConfigFile::keys(const std::string& section) const {
    std::vector<std::string> out;
    for (const auto& [s, entries] : sections_)
        if (s == section)
            for (const auto& [k, _] : entries) out.push_back(k);
    return out;
}

const ConfigFile::Entry* ConfigFile::find(const std::string& section, const std::string& key) const {
    const Entry* found = nullptr;  // later entries win, so overrides stack
    for (const auto& [s, entries] : sections_) {
        if (s != section) continue;
        for (const auto& [k, e] : entries)
            if (k == key) found = &e;
    }
    return found;
}

void ConfigFile::fail(const std::string& section, const std::string& key, const std::string& why) const {
    throw ConfigError(origin_ + ": [" + section + "] " + key + ": " + why);
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) fail(section, key, "required key missing");
    return e->value;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
    const Entry* e = find(section, key);
    return e ? e->value : fallback;
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) fail(section, key, "required key missing");
    char* end = nullptr;
    double v = std::strtod(e->value.c_str(), &end);
    if (end == e->value.c_str() || *end != '\0')
        fail(section, key, "not a number (line " + std::to_string(e->line) + ")");
    return v;
}

double ConfigFile::get_double(const std::string& section, const std::string& key, double fallback) const {
    return has_key(section, key) ? get_double(section, key) : fallback;
}

int64_t ConfigFile::get_int(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) fail(section, key, "required key missing");
    char* end = nullptr;
    long long v = std::strtoll(e->value.c_str(), &end, 10);
    if (end == e->value.c_str() || *end != '\0')
        fail(section, key, "not an integer (line " + std::to_string(e->line) + ")");
    return v;
}

int64_t ConfigFile::get_int(const std::string& section, const std::string& key, int64_t fallback) const {
    return has_key(section, key) ? get_int(section, key) : fallback;
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key, bool fallback) const {
    const Entry* e = find(section, key);
    if (!e) return fallback;
    if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
    if (e->value == "false" || e->value == "0" || e->value == "no") return false;
    fail(section, key, "not a boolean (line " + std::to_string(e->line) + ")");
    return fallback;
}

void ConfigFile::apply_override(const std::string& assignment) {
    std::size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must look like section.key=value: " + assignment);
    std::string lhs = trim(assignment.substr(0, eq));
    std::string value = trim(assignment.substr(eq + 1));
    std::size_t dot = lhs.rfind('.');
    if (dot == std::string::npos)
        throw ConfigError("override key needs a section prefix: " + assignment);
    std::string section = lhs.substr(0, dot);
    std::string key = lhs.substr(dot + 1);

    for (auto& [s, entries] : sections_) {
        if (s != section) continue;
        entries.emplace_back(key, Entry{value, 0});
        return;
    }
    sections_.emplace_back(section, std::vector<std::pair<std::string, Entry>>{{key, Entry{value, 0}}});
}

uint64_t ConfigFile::content_hash() const {
    uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        h ^= 0x1f;
        h *= 0x100000001b3ull;
    };
    for (const auto& [s, entries] : sections_) {
        mix(s);
        for (const auto& [k, e] : entries) {
            mix(k);
            mix(e.value);
        }
    }
    return h;
}

}  // namespace tunsim
