#pragma once

#include <cstdint>
#include <span>

namespace tunsim {

// Internet checksum: one's complement of the one's-complement sum of
// big-endian 16-bit words. Odd-length input is zero padded.
uint16_t internet_checksum(std::span<const uint8_t> data);

// Continues a running one's-complement sum; used for pseudo-header checksums.
uint32_t checksum_accumulate(uint32_t acc, std::span<const uint8_t> data);
uint16_t checksum_finish(uint32_t acc);

}  // namespace tunsim
