#include "tunsim/addressing.hpp"

namespace tunsim {

V6Addr teredo_default_prefix() {
    V6Addr p;
    p.set_group(0, 0x2001);
    return p;
}

V6Addr synth_6to4(V4Addr v4) {
    V6Addr a;
    a.set_group(0, k6to4Prefix);
    a.bytes[2] = uint8_t(v4.value >> 24);
    a.bytes[3] = uint8_t(v4.value >> 16);
    a.bytes[4] = uint8_t(v4.value >> 8);
    a.bytes[5] = uint8_t(v4.value);
    return a;
}

std::optional<V4Addr> parse_6to4(const V6Addr& a) {
    if (a.group(0) != k6to4Prefix) return std::nullopt;
    uint32_t v = (uint32_t(a.bytes[2]) << 24) | (uint32_t(a.bytes[3]) << 16) |
                 (uint32_t(a.bytes[4]) << 8) | a.bytes[5];
    return V4Addr{v};
}

V6Addr synth_isatap(const V6Addr& prefix64, V4Addr v4) {
    V6Addr a = prefix64;
    a.set_group(4, 0x0000);
    a.set_group(5, 0x5efe);
    a.bytes[12] = uint8_t(v4.value >> 24);
    a.bytes[13] = uint8_t(v4.value >> 16);
    a.bytes[14] = uint8_t(v4.value >> 8);
    a.bytes[15] = uint8_t(v4.value);
    return a;
}

std::optional<V4Addr> parse_isatap(const V6Addr& a) {
    if (a.group(4) != 0x0000 || a.group(5) != 0x5efe) return std::nullopt;
    uint32_t v = (uint32_t(a.bytes[12]) << 24) | (uint32_t(a.bytes[13]) << 16) |
                 (uint32_t(a.bytes[14]) << 8) | a.bytes[15];
    return V4Addr{v};
}

V6Addr synth_teredo(const TeredoFields& f, const V6Addr& prefix32) {
    V6Addr a;
    a.bytes[0] = prefix32.bytes[0];
    a.bytes[1] = prefix32.bytes[1];
    a.bytes[2] = prefix32.bytes[2];
    a.bytes[3] = prefix32.bytes[3];
    a.bytes[4] = uint8_t(f.server_v4.value >> 24);
    a.bytes[5] = uint8_t(f.server_v4.value >> 16);
    a.bytes[6] = uint8_t(f.server_v4.value >> 8);
    a.bytes[7] = uint8_t(f.server_v4.value);
    a.set_group(4, f.flags);
    a.set_group(5, uint16_t(f.mapped_port ^ 0xffff));
    uint32_t obf = f.mapped_v4.value ^ 0xffffffffu;
    a.bytes[12] = uint8_t(obf >> 24);
    a.bytes[13] = uint8_t(obf >> 16);
    a.bytes[14] = uint8_t(obf >> 8);
    a.bytes[15] = uint8_t(obf);
    return a;
}

std::optional<TeredoFields> parse_teredo(const V6Addr& a, const V6Addr& prefix32) {
    if (!a.has_prefix(prefix32, 32)) return std::nullopt;
    TeredoFields f;
    f.server_v4.value = (uint32_t(a.bytes[4]) << 24) | (uint32_t(a.bytes[5]) << 16) |
                        (uint32_t(a.bytes[6]) << 8) | a.bytes[7];
    f.flags = a.group(4);
    f.mapped_port = uint16_t(a.group(5) ^ 0xffff);
    uint32_t obf = (uint32_t(a.bytes[12]) << 24) | (uint32_t(a.bytes[13]) << 16) |
                   (uint32_t(a.bytes[14]) << 8) | a.bytes[15];
    f.mapped_v4.value = obf ^ 0xffffffffu;
    return f;
}

}  // namespace tunsim
