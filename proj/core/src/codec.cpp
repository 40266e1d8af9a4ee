#include "tunsim/codec.hpp"

#include "tunsim/checksum.hpp"

namespace tunsim {

const char* to_string(CodecErrorKind k) {
    switch (k) {
        case CodecErrorKind::truncated: return "truncated";
        case CodecErrorKind::bad_checksum: return "bad_checksum";
        case CodecErrorKind::unknown_protocol: return "unknown_protocol";
        case CodecErrorKind::bad_version: return "bad_version";
        case CodecErrorKind::inconsistent_length: return "inconsistent_length";
        case CodecErrorKind::bad_layering: return "bad_layering";
    }
    return "?";
}

namespace {

[[noreturn]] void raise(CodecErrorKind k, const std::string& what) {
    throw CodecError(k, std::string(to_string(k)) + ": " + what);
}

struct Writer {
    std::vector<uint8_t> out;
    void u8(uint8_t v) { out.push_back(v); }
    void u16(uint16_t v) {
        out.push_back(uint8_t(v >> 8));
        out.push_back(uint8_t(v));
    }
    void u32(uint32_t v) {
        out.push_back(uint8_t(v >> 24));
        out.push_back(uint8_t(v >> 16));
        out.push_back(uint8_t(v >> 8));
        out.push_back(uint8_t(v));
    }
    void raw(std::span<const uint8_t> d) { out.insert(out.end(), d.begin(), d.end()); }
};

struct Reader {
    std::span<const uint8_t> in;
    std::size_t pos = 0;

    std::size_t remaining() const { return in.size() - pos; }
    void need(std::size_t n, const char* what) {
        if (remaining() < n) raise(CodecErrorKind::truncated, what);
    }
    uint8_t u8() { return in[pos++]; }
    uint16_t u16() {
        uint16_t v = uint16_t((uint16_t(in[pos]) << 8) | in[pos + 1]);
        pos += 2;
        return v;
    }
    uint32_t u32() {
        uint32_t v = (uint32_t(in[pos]) << 24) | (uint32_t(in[pos + 1]) << 16) |
                     (uint32_t(in[pos + 2]) << 8) | in[pos + 3];
        pos += 4;
        return v;
    }
};

// Section of the stack from layer `i` to the end, in bytes.
std::size_t tail_size(const Packet& p, std::size_t i) {
    std::size_t n = p.payload.size();
    for (std::size_t k = i; k < p.layers.size(); ++k) {
        if (std::holds_alternative<Ipv4Header>(p.layers[k])) n += kIpv4HeaderBytes;
        else if (std::holds_alternative<Ipv6Header>(p.layers[k])) n += kIpv6HeaderBytes;
        else n += kUdpHeaderBytes;
    }
    return n;
}

void check_layering(const Packet& p) {
    // Allowed stacks: [IPv6] [IPv4(41),IPv6] [IPv4(17),UDP,IPv6]
    //                 [IPv4(1)] [IPv4(17),UDP]
    const auto& L = p.layers;
    auto is4 = [&](std::size_t i) { return std::holds_alternative<Ipv4Header>(L[i]); };
    auto is6 = [&](std::size_t i) { return std::holds_alternative<Ipv6Header>(L[i]); };
    auto isu = [&](std::size_t i) { return std::holds_alternative<UdpHeader>(L[i]); };

    if (L.size() == 1 && (is6(0) || (is4(0) && std::get<Ipv4Header>(L[0]).protocol == proto::echo)))
        return;
    if (L.size() == 2 && is4(0) && is6(1) &&
        std::get<Ipv4Header>(L[0]).protocol == proto::ipv6_in_ipv4)
        return;
    if (L.size() == 2 && is4(0) && isu(1) && std::get<Ipv4Header>(L[0]).protocol == proto::udp)
        return;
    if (L.size() == 3 && is4(0) && isu(1) && is6(2) &&
        std::get<Ipv4Header>(L[0]).protocol == proto::udp)
        return;
    raise(CodecErrorKind::bad_layering, "unsupported header stack");
}

}  // namespace

std::size_t encoded_size(const Packet& p) {
    return tail_size(p, 0);
}

std::vector<uint8_t> encode(const Packet& p) {
    if (p.layers.empty()) raise(CodecErrorKind::bad_layering, "no headers");
    check_layering(p);

    Writer w;
    for (std::size_t i = 0; i < p.layers.size(); ++i) {
        std::size_t below = tail_size(p, i + 1);
        if (auto* ip = std::get_if<Ipv4Header>(&p.layers[i])) {
            if (ip->total_len != kIpv4HeaderBytes + below)
                raise(CodecErrorKind::inconsistent_length, "ipv4 total_len");
            std::size_t start = w.out.size();
            w.u8(0x45);
            w.u8(0x00);
            w.u16(ip->total_len);
            w.u16(ip->identification);
            w.u16(0x0000);
            w.u8(ip->ttl);
            w.u8(ip->protocol);
            w.u16(0);  // checksum slot
            w.u32(ip->src.value);
            w.u32(ip->dst.value);
            uint16_t sum = internet_checksum(
                std::span<const uint8_t>(w.out.data() + start, kIpv4HeaderBytes));
            w.out[start + 10] = uint8_t(sum >> 8);
            w.out[start + 11] = uint8_t(sum);
        } else if (auto* ip6 = std::get_if<Ipv6Header>(&p.layers[i])) {
            if (ip6->flow_label >= (1u << 20))
                raise(CodecErrorKind::inconsistent_length, "flow label width");
            if (ip6->payload_len != below)
                raise(CodecErrorKind::inconsistent_length, "ipv6 payload_len");
            w.u32((6u << 28) | (uint32_t(ip6->traffic_class) << 20) | ip6->flow_label);
            w.u16(ip6->payload_len);
            w.u8(ip6->next_header);
            w.u8(ip6->hop_limit);
            w.raw(ip6->src.bytes);
            w.raw(ip6->dst.bytes);
        } else {
            const UdpHeader& u = std::get<UdpHeader>(p.layers[i]);
            if (u.length != kUdpHeaderBytes + below)
                raise(CodecErrorKind::inconsistent_length, "udp length");
            w.u16(u.src_port);
            w.u16(u.dst_port);
            w.u16(u.length);
            w.u16(u.checksum);
        }
    }
    w.raw(p.payload);
    return w.out;
}

namespace {

Ipv4Header decode_v4(Reader& r) {
    r.need(kIpv4HeaderBytes, "ipv4 header");
    std::size_t start = r.pos;
    uint8_t vihl = r.u8();
    if ((vihl >> 4) != 4) raise(CodecErrorKind::bad_version, "ipv4 version nibble");
    if ((vihl & 0x0f) != 5) raise(CodecErrorKind::bad_layering, "ipv4 options unsupported");
    (void)r.u8();  // tos
    Ipv4Header h;
    h.total_len = r.u16();
    h.identification = r.u16();
    (void)r.u16();  // flags/fragment
    h.ttl = r.u8();
    h.protocol = r.u8();
    h.header_checksum = r.u16();
    h.src.value = r.u32();
    h.dst.value = r.u32();
    uint16_t verify = internet_checksum(
        std::span<const uint8_t>(r.in.data() + start, kIpv4HeaderBytes));
    if (verify != 0) raise(CodecErrorKind::bad_checksum, "ipv4 header checksum");
    if (h.total_len != kIpv4HeaderBytes + (r.in.size() - r.pos))
        raise(CodecErrorKind::inconsistent_length, "ipv4 total_len vs input");
    return h;
}

Ipv6Header decode_v6(Reader& r) {
    r.need(kIpv6HeaderBytes, "ipv6 header");
    uint32_t vtf = r.u32();
    if ((vtf >> 28) != 6) raise(CodecErrorKind::bad_version, "ipv6 version nibble");
    Ipv6Header h;
    h.traffic_class = uint8_t((vtf >> 20) & 0xff);
    h.flow_label = vtf & 0xfffff;
    h.payload_len = r.u16();
    h.next_header = r.u8();
    h.hop_limit = r.u8();
    for (int i = 0; i < 16; ++i) h.src.bytes[i] = r.u8();
    for (int i = 0; i < 16; ++i) h.dst.bytes[i] = r.u8();
    if (h.payload_len != r.remaining())
        raise(CodecErrorKind::inconsistent_length, "ipv6 payload_len vs input");
    return h;
}

UdpHeader decode_udp(Reader& r, const Ipv4Header& outer) {
    r.need(kUdpHeaderBytes, "udp header");
    std::size_t start = r.pos;
    UdpHeader u;
    u.src_port = r.u16();
    u.dst_port = r.u16();
    u.length = r.u16();
    u.checksum = r.u16();
    if (u.length < kUdpHeaderBytes || u.length != kUdpHeaderBytes + r.remaining())
        raise(CodecErrorKind::inconsistent_length, "udp length vs input");
    if (u.checksum != 0) {
        uint8_t pseudo[12];
        for (int i = 0; i < 4; ++i) {
            pseudo[i] = outer.src.octet(i);
            pseudo[4 + i] = outer.dst.octet(i);
        }
        pseudo[8] = 0;
        pseudo[9] = proto::udp;
        pseudo[10] = uint8_t(u.length >> 8);
        pseudo[11] = uint8_t(u.length);
        uint32_t acc = checksum_accumulate(0, std::span<const uint8_t>(pseudo, 12));
        acc = checksum_accumulate(acc, std::span<const uint8_t>(r.in.data() + start, u.length));
        if (checksum_finish(acc) != 0) raise(CodecErrorKind::bad_checksum, "udp checksum");
    }
    return u;
}

}  // namespace

Packet decode(std::span<const uint8_t> bytes) {
    Reader r{bytes};
    r.need(1, "version nibble");
    Packet p;

    uint8_t version = uint8_t(bytes[0] >> 4);
    if (version == 6) {
        p.layers.emplace_back(decode_v6(r));
    } else if (version == 4) {
        Ipv4Header v4 = decode_v4(r);
        p.layers.emplace_back(v4);
        switch (v4.protocol) {
            case proto::ipv6_in_ipv4:
                p.layers.emplace_back(decode_v6(r));
                break;
            case proto::udp: {
                UdpHeader u = decode_udp(r, v4);
                p.layers.emplace_back(u);
                // Teredo data carries a full IPv6 packet on its service
                // port; control datagrams on the same port (and all other
                // UDP) stay opaque. Demultiplex on the version nibble.
                if ((u.dst_port == 3544 || u.src_port == 3544) && r.remaining() >= 1 &&
                    (bytes[r.pos] >> 4) == 6)
                    p.layers.emplace_back(decode_v6(r));
                break;
            }
            case proto::echo:
                break;  // echo bytes live in the payload
            default:
                raise(CodecErrorKind::unknown_protocol,
                      "ipv4 protocol " + std::to_string(int(v4.protocol)));
        }
    } else {
        raise(CodecErrorKind::bad_version, "neither IPv4 nor IPv6");
    }

    p.payload.assign(bytes.begin() + long(r.pos), bytes.end());
    return p;
}

}  // namespace tunsim
