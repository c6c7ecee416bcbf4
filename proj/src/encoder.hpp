#ifndef EKD_ENCODER_HPP
#define EKD_ENCODER_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "field.hpp"

namespace ekd {

enum class MaskMethod : std::uint8_t {
    Threshold = 0,  // largest Laplacian magnitudes
    Edge = 1,       // Marr-Hildreth zero crossings, gradient-gated
    Dither = 2,     // Floyd-Steinberg on the Laplacian magnitude
};

struct EncoderParams {
    MaskMethod method = MaskMethod::Dither;
    double density = 0.10;        // target stored-pixel fraction p
    double sigma = 1.0;           // Gaussian presmoothing (edge method)
    double grad_threshold = 8.0;  // minimal gradient magnitude (edge method)
    int quant_bits = 8;
    int subsample_d = 1;          // 1 = chain subsampling off
};

struct EncoderStats {
    double realized_density = 0.0;
    std::size_t mask_count = 0;
    std::uint64_t clamped_values = 0;  // out-of-range inputs hit by quantize
};

// |sum over channels of the 5-point Laplacian| per pixel, Neumann mirroring.
PixelField laplacian_magnitude(const PixelField& image);

// Mask with exactly floor(p*N) ones at the largest magnitudes; ties broken
// toward the smaller row-major index.
InpaintMask threshold_mask(const PixelField& magnitude, double p);

// Zero crossings of the Gaussian-smoothed channel-summed Laplacian, kept only
// where the central-difference gradient is at least params.grad_threshold;
// both sides of each crossing are stored.
InpaintMask marr_hildreth_mask(const PixelField& image, const EncoderParams& params);

// Scale the magnitude so its mean is p*255, clamp to [0,255], Floyd-Steinberg
// error diffusion in raster order; mask = pixels dithered to white. Throws
// Error(Degenerate) on an identically zero magnitude.
InpaintMask dither_mask(const PixelField& magnitude, double p);

// Uniform mid-rise quantizer with 2^bits cells over [0,255]; dequantize maps
// a level to its cell midpoint. Out-of-range inputs are clamped and counted.
std::vector<std::uint8_t> quantize(std::span<const double> values, int bits,
                                   std::uint64_t* clamped = nullptr);
std::vector<double> dequantize(std::span<const std::uint8_t> levels, int bits);

// Chain subsampling along the row-major traversal of masked pixels: keep
// every d-th value plus always the first and the last. Skipped values are
// rebuilt by linear interpolation.
std::vector<std::size_t> kept_chain_indices(std::size_t n, int d);
std::vector<double> subsample_chain(std::span<const double> values, int d);
std::vector<double> upsample_chain(std::span<const double> kept, std::size_t n, int d);

// Row-major stored-pixel values of one channel.
std::vector<double> masked_values(std::span<const double> plane,
                                  const InpaintMask& mask);

// Gaussian smoothing with mirrored borders; sigma = 0 is the identity.
PixelField gaussian_smooth(const PixelField& image, double sigma);

struct EncodedImage {
    InpaintMask mask;
    std::vector<std::vector<std::uint8_t>> payload;  // per channel, chain order
    EncoderParams params;
    EncoderStats stats;
};

// Full encoder pipeline: mask selection, per-channel value extraction, chain
// subsampling, quantization.
EncodedImage encode_image(const PixelField& image, const EncoderParams& params);

// Inverse of the per-channel value pipeline: dequantize, upsample, scatter
// onto the mask (zeros elsewhere).
PixelField reconstruct_compressed(const InpaintMask& mask,
                                  const std::vector<std::vector<std::uint8_t>>& payload,
                                  int channels, int quant_bits, int subsample_d);

}  // namespace ekd

#endif
