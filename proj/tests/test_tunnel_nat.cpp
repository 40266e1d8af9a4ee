#include <doctest.h>

#include "tunsim/codec.hpp"
#include "tunsim/nat.hpp"
#include "tunsim/tunnel.hpp"

using namespace tunsim;

namespace {

Packet inner_v6(std::size_t payload = 1460) {
    return make_ipv6_packet(parse_v6("2001:db8::1").value(), parse_v6("2001:db8::2").value(),
                            proto::udp, std::vector<uint8_t>(payload, 0x5a));
}

TunnelState established(TunnelProtocol p, uint64_t seed = 1) {
    TunnelState st(p);
    Rng rng(seed);
    st.begin_setup();
    st.establish(V6Addr{}, rng);
    return st;
}

const V4Addr kSelf = V4Addr::from_octets(10, 0, 0, 1);
const V4Addr kPeer = V4Addr::from_octets(192, 0, 2, 9);

}  // namespace

TEST_SUITE("tunnel") {
    TEST_CASE("proto-41 encapsulation adds exactly 20 bytes") {
        for (auto p : {TunnelProtocol::p6to4, TunnelProtocol::isatap}) {
            TunnelState st = established(p);
            Packet in = inner_v6(1460);
            Packet out = encap(in, st, kSelf, kPeer);
            CHECK(encoded_size(out) == encoded_size(in) + kProto41Overhead);
            CHECK(out.outer_v4().total_len == 20 + 40 + 1460);
            CHECK(out.outer_v4().protocol == proto::ipv6_in_ipv4);
        }
    }

    TEST_CASE("Teredo encapsulation adds exactly 28 bytes over UDP 3544") {
        TunnelState st = established(TunnelProtocol::teredo);
        Packet in = inner_v6(1460);
        Packet out = encap(in, st, kSelf, kPeer);
        CHECK(encoded_size(out) == encoded_size(in) + kTeredoOverhead);
        CHECK(out.outer_v4().total_len == 20 + 8 + 40 + 1460);
        CHECK(out.udp()->dst_port == kTeredoPort);
    }

    TEST_CASE("decap(encap(p)) is the identity for all three protocols") {
        for (auto proto :
             {TunnelProtocol::p6to4, TunnelProtocol::teredo, TunnelProtocol::isatap}) {
            TunnelState st = established(proto);
            for (std::size_t payload : {0u, 1u, 64u, 1460u}) {
                Packet in = inner_v6(payload);
                Packet out = encap(in, st, kSelf, kPeer);
                Packet back = decap(out, proto);
                CHECK(back == in);
            }
        }
    }

    TEST_CASE("proto-41 arriving where Teredo is expected is a layering mismatch") {
        TunnelState st = established(TunnelProtocol::p6to4);
        Packet out = encap(inner_v6(128), st, kSelf, kPeer);
        CHECK_THROWS_AS(decap(out, TunnelProtocol::teredo), TunnelError);
    }

    TEST_CASE("encap refuses non-IPv6 inner packets and unestablished state") {
        TunnelState st = established(TunnelProtocol::isatap);
        Packet v4 = make_ipv4_packet(kSelf, kPeer, proto::echo, std::vector<uint8_t>(8, 0));
        CHECK_THROWS_AS(encap(v4, st, kSelf, kPeer), TunnelError);

        TunnelState idle(TunnelProtocol::isatap);
        CHECK_THROWS_AS(encap(inner_v6(8), idle, kSelf, kPeer), TunnelError);
        idle.begin_setup();
        CHECK_THROWS_AS(encap(inner_v6(8), idle, kSelf, kPeer), TunnelError);
    }

    TEST_CASE("truncated outer bytes surface as codec errors") {
        TunnelState st = established(TunnelProtocol::p6to4);
        auto bytes = encode(encap(inner_v6(64), st, kSelf, kPeer));
        bytes.resize(bytes.size() - 10);
        CHECK_THROWS_AS(decode(bytes), CodecError);
    }
}

TEST_SUITE("refresh cadence") {
    static int count_refreshes(TunnelProtocol p, int data_packets, uint64_t seed) {
        TunnelState st = established(p, seed);
        Rng rng(seed + 1000);
        int refreshes = 0;
        for (int i = 0; i < data_packets; ++i)
            if (st.on_data_sent(rng)) ++refreshes;
        return refreshes;
    }

    TEST_CASE("ISATAP: 26 data packets produce exactly 2 refreshes") {
        CHECK(count_refreshes(TunnelProtocol::isatap, 26, 1) == 2);
    }

    TEST_CASE("Teredo: 20 data packets produce no refresh") {
        CHECK(count_refreshes(TunnelProtocol::teredo, 20, 1) == 0);
    }

    TEST_CASE("exact interval counts per 1000 packets") {
        CHECK(count_refreshes(TunnelProtocol::isatap, 1000, 9) == 76);   // floor(1000/13)
        CHECK(count_refreshes(TunnelProtocol::teredo, 1000, 9) == 47);   // floor(1000/21)
    }

    TEST_CASE("6to4 randomized interval stays within [52,55] per 1000 packets") {
        for (uint64_t seed = 0; seed < 40; ++seed) {
            int n = count_refreshes(TunnelProtocol::p6to4, 1000, seed);
            CHECK(n >= 52);
            CHECK(n <= 55);
        }
    }

    TEST_CASE("refresh counting requires established state") {
        TunnelState st(TunnelProtocol::isatap);
        Rng rng(1);
        CHECK_THROWS_AS(st.on_data_sent(rng), TunnelError);
    }
}

TEST_SUITE("nat") {
    static Packet udp_from(V4Addr src, uint16_t sport, V4Addr dst, uint16_t dport) {
        Packet p = make_udp_packet(src, dst, sport, dport, std::vector<uint8_t>(20, 0));
        p.meta.kind = PacketKind::data;
        return p;
    }

    TEST_CASE("outbound UDP rewrites the source and records a binding") {
        NatTable nat(V4Addr::from_octets(198, 51, 100, 10));
        Packet p = udp_from(V4Addr::from_octets(10, 0, 0, 2), 5000,
                            V4Addr::from_octets(203, 0, 113, 80), 3544);
        CHECK(nat.apply_outbound(p, 1.0) == NatVerdict::forwarded);
        CHECK(p.outer_v4().src == V4Addr::from_octets(198, 51, 100, 10));
        CHECK(p.udp()->src_port == 49152);
        CHECK(nat.binding_count() == 1);
        CHECK(nat.external_port(V4Addr::from_octets(10, 0, 0, 2), 5000) == 49152);
        // decodes cleanly after the rewrite (checksums refreshed)
        CHECK_NOTHROW(decode(encode(p)));
    }

    TEST_CASE("bare proto-41 is dropped outbound") {
        NatTable nat(V4Addr::from_octets(198, 51, 100, 10));
        Packet inner = inner_v6(40);
        TunnelState st = established(TunnelProtocol::p6to4);
        Packet p = encap(inner, st, V4Addr::from_octets(10, 0, 0, 2),
                         V4Addr::from_octets(203, 0, 113, 80));
        CHECK(nat.apply_outbound(p, 1.0) == NatVerdict::drop_proto41);
        CHECK(nat.binding_count() == 0);
    }

    TEST_CASE("inbound without a binding is dropped") {
        NatTable nat(V4Addr::from_octets(198, 51, 100, 10));
        Packet p = udp_from(V4Addr::from_octets(203, 0, 113, 80), 3544,
                            V4Addr::from_octets(198, 51, 100, 10), 49152);
        CHECK(nat.apply_inbound(p, 1.0) == NatVerdict::drop_no_binding);
    }

    TEST_CASE("inbound to a bound port rewrites back to the internal endpoint") {
        NatTable nat(V4Addr::from_octets(198, 51, 100, 10));
        Packet out = udp_from(V4Addr::from_octets(10, 0, 0, 2), 3544,
                              V4Addr::from_octets(203, 0, 113, 80), 3544);
        REQUIRE(nat.apply_outbound(out, 1.0) == NatVerdict::forwarded);
        uint16_t ext = out.udp()->src_port;

        Packet in = udp_from(V4Addr::from_octets(203, 0, 113, 80), 3544,
                             V4Addr::from_octets(198, 51, 100, 10), ext);
        CHECK(nat.apply_inbound(in, 2.0) == NatVerdict::forwarded);
        CHECK(in.outer_v4().dst == V4Addr::from_octets(10, 0, 0, 2));
        CHECK(in.udp()->dst_port == 3544);
    }

    TEST_CASE("mappings are stable and injective across flows") {
        NatTable nat(V4Addr::from_octets(198, 51, 100, 10));
        std::vector<uint16_t> ports;
        for (uint16_t sport : {5000, 5001, 5002, 5000, 5001}) {
            Packet p = udp_from(V4Addr::from_octets(10, 0, 0, 2), sport,
                                V4Addr::from_octets(203, 0, 113, 80), 53);
            REQUIRE(nat.apply_outbound(p, 1.0) == NatVerdict::forwarded);
            ports.push_back(p.udp()->src_port);
        }
        CHECK(ports[0] == ports[3]);  // same flow, same mapping
        CHECK(ports[1] == ports[4]);
        CHECK(ports[0] != ports[1]);  // distinct flows never share a port
        CHECK(ports[1] != ports[2]);
        CHECK(nat.binding_count() == 3);
    }
}
