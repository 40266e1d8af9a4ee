#include "tunsim/addr.hpp"

#include <cstdio>
#include <cstdlib>
#include <vector>

namespace tunsim {

std::string to_string(V4Addr a) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%u.%u.%u.%u", a.octet(0), a.octet(1), a.octet(2), a.octet(3));
    return buf;
}

std::optional<V4Addr> parse_v4(std::string_view text) {
    uint32_t value = 0;
    int parts = 0;
    uint32_t cur = 0;
    bool have_digit = false;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '.') {
            if (!have_digit || cur > 255 || parts == 4) return std::nullopt;
            value = (value << 8) | cur;
            ++parts;
            cur = 0;
            have_digit = false;
        } else if (text[i] >= '0' && text[i] <= '9') {
            cur = cur * 10 + uint32_t(text[i] - '0');
            if (cur > 255) return std::nullopt;
            have_digit = true;
        } else {
            return std::nullopt;
        }
    }
    if (parts != 4) return std::nullopt;
    return V4Addr{value};
}

V6Addr V6Addr::from_groups(const std::array<uint16_t, 8>& groups) {
    V6Addr a;
    for (int i = 0; i < 8; ++i) a.set_group(i, groups[i]);
    return a;
}

bool V6Addr::is_zero() const {
    for (uint8_t b : bytes)
        if (b != 0) return false;
    return true;
}

bool V6Addr::has_prefix(const V6Addr& prefix, int bits) const {
    int full = bits / 8;
    for (int i = 0; i < full; ++i)
        if (bytes[i] != prefix.bytes[i]) return false;
    int rem = bits % 8;
    if (rem != 0) {
        uint8_t mask = uint8_t(0xff << (8 - rem));
        if ((bytes[full] & mask) != (prefix.bytes[full] & mask)) return false;
    }
    return true;
}

std::string to_string(const V6Addr& a) {
    // Longest run of two or more zero groups is compressed; leftmost wins
    // ties; a single zero group is written out.
    int best_start = -1, best_len = 0;
    int run_start = -1, run_len = 0;
    for (int i = 0; i < 8; ++i) {
        if (a.group(i) == 0) {
            if (run_start < 0) run_start = i;
            ++run_len;
            if (run_len > best_len) {
                best_len = run_len;
                best_start = run_start;
            }
        } else {
            run_start = -1;
            run_len = 0;
        }
    }
    if (best_len < 2) best_start = -1;

    std::string out;
    char buf[8];
    int i = 0;
    while (i < 8) {
        if (i == best_start) {
            out += "::";
            i += best_len;
            continue;
        }
        std::snprintf(buf, sizeof buf, "%x", a.group(i));
        out += buf;
        ++i;
        if (i < 8 && i != best_start) out += ":";
    }
    if (out.empty()) out = "::";
    return out;
}

namespace {

std::optional<uint16_t> parse_group(std::string_view s) {
    if (s.empty() || s.size() > 4) return std::nullopt;
    uint32_t v = 0;
    for (char c : s) {
        uint32_t d;
        if (c >= '0' && c <= '9') d = uint32_t(c - '0');
        else if (c >= 'a' && c <= 'f') d = uint32_t(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F') d = uint32_t(c - 'A' + 10);
        else return std::nullopt;
        v = (v << 4) | d;
    }
    return uint16_t(v);
}

}  // namespace

std::optional<V6Addr> parse_v6(std::string_view text) {
    // Split on "::" first, then parse each side's colon-separated groups.
    std::size_t gap = text.find("::");
    std::vector<std::string_view> head, tail;

    auto split_groups = [](std::string_view part, std::vector<std::string_view>& out) -> bool {
        if (part.empty()) return true;
        std::size_t start = 0;
        while (true) {
            std::size_t colon = part.find(':', start);
            if (colon == std::string_view::npos) {
                out.push_back(part.substr(start));
                return true;
            }
            if (colon == start) return false;  // empty group
            out.push_back(part.substr(start, colon - start));
            start = colon + 1;
            if (start > part.size()) return false;
        }
    };

    if (gap != std::string_view::npos) {
        if (text.find("::", gap + 1) != std::string_view::npos) return std::nullopt;
        if (!split_groups(text.substr(0, gap), head)) return std::nullopt;
        if (!split_groups(text.substr(gap + 2), tail)) return std::nullopt;
        if (head.size() + tail.size() > 7) return std::nullopt;
    } else {
        if (!split_groups(text, head)) return std::nullopt;
        if (head.size() != 8) return std::nullopt;
    }

    std::array<uint16_t, 8> groups{};
    for (std::size_t i = 0; i < head.size(); ++i) {
        auto g = parse_group(head[i]);
        if (!g) return std::nullopt;
        groups[i] = *g;
    }
    for (std::size_t i = 0; i < tail.size(); ++i) {
        auto g = parse_group(tail[i]);
        if (!g) return std::nullopt;
        groups[8 - tail.size() + i] = *g;
    }
    return V6Addr::from_groups(groups);
}

V6Addr with_interface_id(V6Addr addr, uint64_t iface_id) {
    for (int i = 0; i < 8; ++i)
        addr.bytes[8 + i] = uint8_t(iface_id >> (56 - 8 * i));
    return addr;
}

}  // namespace tunsim
