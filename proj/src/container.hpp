#ifndef EKD_CONTAINER_HPP
#define EKD_CONTAINER_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "field.hpp"

namespace ekd {

// The EKD1 container: 4-byte magic "EKD1", little-endian header (width u32,
// height u32, channels u8, quant_bits u8, subsample_d u16, method_tag u8),
// then one raw-DEFLATE block holding the packed mask bitmap followed by the
// per-channel payload bytes. Fixed compression level, so encoding is
// deterministic and round trips are byte-identical.

struct ContainerParams {
    std::uint8_t channels = 1;
    std::uint8_t quant_bits = 8;
    std::uint16_t subsample_d = 1;
    std::uint8_t method_tag = 0;
};

std::vector<std::uint8_t> encode_container(
    const InpaintMask& mask, const std::vector<std::vector<std::uint8_t>>& payload,
    const ContainerParams& params);

struct DecodedContainer {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    ContainerParams params;
    InpaintMask mask;
    std::vector<std::vector<std::uint8_t>> payload;
};

DecodedContainer decode_container(std::span<const std::uint8_t> bytes);

// 8 * container bytes / pixel count.
double bits_per_pixel(std::size_t container_bytes, int width, int height);

// Raw DEFLATE (RFC 1951) helpers.
std::vector<std::uint8_t> deflate_bytes(std::span<const std::uint8_t> data,
                                        int level = 9);
std::vector<std::uint8_t> inflate_bytes(std::span<const std::uint8_t> data,
                                        std::size_t expected_size);

// Mask bitmap packing, row-major, most significant bit first.
std::vector<std::uint8_t> pack_mask(const InpaintMask& mask);
InpaintMask unpack_mask(std::span<const std::uint8_t> bytes, int width, int height);

}  // namespace ekd

#endif
