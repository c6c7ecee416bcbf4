#include "container.hpp"

#include <zlib.h>

#include <cstring>
#include <string>

#include "encoder.hpp"
#include "error.hpp"

namespace ekd {

namespace {

constexpr char kMagic[4] = {'E', 'K', 'D', '1'};
constexpr std::size_t kHeaderSize = 4 + 4 + 4 + 1 + 1 + 2 + 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

std::vector<std::uint8_t> deflate_bytes(std::span<const std::uint8_t> data,
                                        int level) {
    z_stream zs{};
    // negative window bits: raw DEFLATE, no zlib wrapper
    if (deflateInit2(&zs, level, Z_DEFLATED, -15, 8, Z_DEFAULT_STRATEGY) != Z_OK)
        fail(ErrorCode::Io, "deflateInit2 failed");
    std::vector<std::uint8_t> out(deflateBound(&zs, static_cast<uLong>(data.size())));
    zs.next_in = const_cast<Bytef*>(data.data());
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = deflate(&zs, Z_FINISH);
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) fail(ErrorCode::Io, "deflate failed");
    out.resize(out.size() - zs.avail_out);
    return out;
}

std::vector<std::uint8_t> inflate_bytes(std::span<const std::uint8_t> data,
                                        std::size_t expected_size) {
    z_stream zs{};
    if (inflateInit2(&zs, -15) != Z_OK) fail(ErrorCode::Io, "inflateInit2 failed");
    std::vector<std::uint8_t> out(expected_size);
    zs.next_in = const_cast<Bytef*>(data.data());
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&zs, Z_FINISH);
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || zs.avail_out != 0)
        fail(ErrorCode::Io, "inflate failed: corrupt or truncated stream");
    return out;
}

std::vector<std::uint8_t> pack_mask(const InpaintMask& mask) {
    std::vector<std::uint8_t> out((static_cast<std::size_t>(mask.pixels()) + 7) / 8, 0);
    for (std::size_t i = 0; i < mask.bits.size(); ++i)
        if (mask.bits[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    return out;
}

InpaintMask unpack_mask(std::span<const std::uint8_t> bytes, int width, int height) {
    InpaintMask mask(width, height);
    for (std::size_t i = 0; i < mask.bits.size(); ++i)
        mask.bits[i] = (bytes[i / 8] & (0x80u >> (i % 8))) ? 1 : 0;
    return mask;
}

std::vector<std::uint8_t> encode_container(
    const InpaintMask& mask, const std::vector<std::vector<std::uint8_t>>& payload,
    const ContainerParams& params) {
    if (mask.width < 1 || mask.height < 1)
        fail(ErrorCode::Invalid, "encode_container: empty dimensions");
    if (mask.count() == 0)
        fail(ErrorCode::Invalid, "encode_container: empty mask, decoding would be ill-posed");
    if (payload.size() != params.channels)
        fail(ErrorCode::Invalid, "encode_container: payload/channels mismatch");
    const std::size_t expect =
        kept_chain_indices(mask.count(), params.subsample_d).size();
    for (const auto& ch : payload)
        if (ch.size() != expect)
            fail(ErrorCode::Invalid, "encode_container: payload length mismatch");

    std::vector<std::uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u32(out, static_cast<std::uint32_t>(mask.width));
    put_u32(out, static_cast<std::uint32_t>(mask.height));
    out.push_back(params.channels);
    out.push_back(params.quant_bits);
    out.push_back(static_cast<std::uint8_t>(params.subsample_d & 0xff));
    out.push_back(static_cast<std::uint8_t>((params.subsample_d >> 8) & 0xff));
    out.push_back(params.method_tag);

    std::vector<std::uint8_t> block = pack_mask(mask);
    for (const auto& ch : payload) block.insert(block.end(), ch.begin(), ch.end());
    const std::vector<std::uint8_t> packed = deflate_bytes(block);
    out.insert(out.end(), packed.begin(), packed.end());
    return out;
}

DecodedContainer decode_container(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderSize)
        fail(ErrorCode::Io, "container truncated: no complete header");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0)
        fail(ErrorCode::Io, "bad container magic");
    DecodedContainer dc;
    dc.width = get_u32(bytes.data() + 4);
    dc.height = get_u32(bytes.data() + 8);
    dc.params.channels = bytes[12];
    dc.params.quant_bits = bytes[13];
    dc.params.subsample_d =
        static_cast<std::uint16_t>(bytes[14] | (static_cast<std::uint16_t>(bytes[15]) << 8));
    dc.params.method_tag = bytes[16];
    if (dc.width == 0 || dc.height == 0)
        fail(ErrorCode::Io, "container header: zero dimensions");
    if (dc.params.channels != 1 && dc.params.channels != 3)
        fail(ErrorCode::Io, "container header: unsupported channel count");
    if (dc.params.quant_bits < 1 || dc.params.quant_bits > 8)
        fail(ErrorCode::Io, "container header: quant_bits out of range");
    if (dc.params.subsample_d < 1)
        fail(ErrorCode::Io, "container header: subsample_d out of range");

    const std::size_t pixels = static_cast<std::size_t>(dc.width) * dc.height;
    const std::size_t mask_bytes = (pixels + 7) / 8;
    // payload length is implied by the mask; unpack it first
    std::vector<std::uint8_t> block;
    {
        // inflate in two steps: mask bitmap size is known up front, the
        // payload size only after counting mask bits. Simplest is to inflate
        // with a growing bound: mask + at most pixels per channel.
        const std::size_t upper = mask_bytes + pixels * dc.params.channels;
        z_stream zs{};
        if (inflateInit2(&zs, -15) != Z_OK) fail(ErrorCode::Io, "inflateInit2 failed");
        block.assign(upper, 0);
        zs.next_in = const_cast<Bytef*>(bytes.data() + kHeaderSize);
        zs.avail_in = static_cast<uInt>(bytes.size() - kHeaderSize);
        zs.next_out = block.data();
        zs.avail_out = static_cast<uInt>(block.size());
        const int rc = inflate(&zs, Z_FINISH);
        const std::size_t produced = block.size() - zs.avail_out;
        inflateEnd(&zs);
        if (rc != Z_STREAM_END)
            fail(ErrorCode::Io, "inflate failed: corrupt or truncated stream");
        block.resize(produced);
    }
    if (block.size() < mask_bytes)
        fail(ErrorCode::Io, "container truncated: mask bitmap incomplete");
    dc.mask = unpack_mask({block.data(), mask_bytes}, static_cast<int>(dc.width),
                          static_cast<int>(dc.height));
    if (dc.mask.count() == 0)
        fail(ErrorCode::Invalid, "container holds an empty mask");
    const std::size_t per_channel =
        kept_chain_indices(dc.mask.count(), dc.params.subsample_d).size();
    if (block.size() != mask_bytes + per_channel * dc.params.channels)
        fail(ErrorCode::Io, "container truncated: payload incomplete");
    for (int ch = 0; ch < dc.params.channels; ++ch) {
        const std::uint8_t* p = block.data() + mask_bytes +
                                static_cast<std::size_t>(ch) * per_channel;
        dc.payload.emplace_back(p, p + per_channel);
    }
    return dc;
}

double bits_per_pixel(std::size_t container_bytes, int width, int height) {
    if (width < 1 || height < 1)
        fail(ErrorCode::Invalid, "bits_per_pixel: empty dimensions");
    return 8.0 * static_cast<double>(container_bytes) /
           (static_cast<double>(width) * height);
}

}  // namespace ekd
