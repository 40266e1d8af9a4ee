#include "tunsim/checksum.hpp"

namespace tunsim {

uint32_t checksum_accumulate(uint32_t acc, std::span<const uint8_t> data) {
    std::size_t i = 0;
    for (; i + 1 < data.size(); i += 2)
        acc += (uint32_t(data[i]) << 8) | data[i + 1];
    if (i < data.size())
        acc += uint32_t(data[i]) << 8;  // implicit zero pad
    return acc;
}

uint16_t checksum_finish(uint32_t acc) {
    while (acc >> 16)
        acc = (acc & 0xffff) + (acc >> 16);
    return uint16_t(~acc & 0xffff);
}

uint16_t internet_checksum(std::span<const uint8_t> data) {
    return checksum_finish(checksum_accumulate(0, data));
}

}  // namespace tunsim
