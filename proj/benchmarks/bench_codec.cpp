#include <benchmark/benchmark.h>

#include "tunsim/codec.hpp"
#include "tunsim/tunnel.hpp"

using namespace tunsim;

namespace {

Packet stream_packet(std::size_t payload) {
    return make_ipv6_packet(parse_v6("2001:db8::1").value(), parse_v6("2001:db8::2").value(),
                            proto::udp, std::vector<uint8_t>(payload, 0x3c));
}

Packet teredo_packet(std::size_t payload) {
    TunnelState st(TunnelProtocol::teredo);
    Rng rng(1);
    st.begin_setup();
    st.establish(V6Addr{}, rng);
    return encap(stream_packet(payload), st, V4Addr::from_octets(10, 0, 0, 1),
                 V4Addr::from_octets(192, 0, 2, 1));
}

void BM_EncodeIpv6(benchmark::State& state) {
    Packet p = stream_packet(std::size_t(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(encode(p));
    state.SetBytesProcessed(int64_t(state.iterations()) * int64_t(encoded_size(p)));
}
BENCHMARK(BM_EncodeIpv6)->Arg(64)->Arg(1500);

void BM_DecodeTeredo(benchmark::State& state) {
    auto bytes = encode(teredo_packet(std::size_t(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(decode(bytes));
    state.SetBytesProcessed(int64_t(state.iterations()) * int64_t(bytes.size()));
}
BENCHMARK(BM_DecodeTeredo)->Arg(64)->Arg(1500);

void BM_RoundTripProto41(benchmark::State& state) {
    Packet inner = stream_packet(1500);
    TunnelState st(TunnelProtocol::p6to4);
    Rng rng(1);
    st.begin_setup();
    st.establish(V6Addr{}, rng);
    V4Addr a = V4Addr::from_octets(10, 0, 0, 1), b = V4Addr::from_octets(192, 0, 2, 1);
    for (auto _ : state) {
        Packet outer = encap(inner, st, a, b);
        benchmark::DoNotOptimize(decap(outer, TunnelProtocol::p6to4));
    }
}
BENCHMARK(BM_RoundTripProto41);

}  // namespace

BENCHMARK_MAIN();
