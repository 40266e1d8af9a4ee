#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tunsim/packet.hpp"

namespace tunsim {

enum class CodecErrorKind : uint8_t {
    truncated,
    bad_checksum,
    unknown_protocol,
    bad_version,
    inconsistent_length,
    bad_layering,
};

const char* to_string(CodecErrorKind k);

struct CodecError : std::runtime_error {
    CodecError(CodecErrorKind k, const std::string& what)
        : std::runtime_error(what), kind(k) {}
    CodecErrorKind kind;
};

// Serializes to big-endian wire bytes with all checksums and length fields
// written. Throws CodecError on layering or length inconsistencies.
std::vector<uint8_t> encode(const Packet& p);

// Parses wire bytes back into a header stack. Verifies the IPv4 header
// checksum and, when nonzero, the UDP checksum. decode(encode(p)) == p for
// every valid packet.
Packet decode(std::span<const uint8_t> bytes);

// Encoded size without materializing bytes.
std::size_t encoded_size(const Packet& p);

}  // namespace tunsim
