#include "encoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"
#include "heat_operator.hpp"

namespace ekd {

namespace {

// mirrored index: -1 -> 0, n -> n-1 (ghost duplication, matches the Neumann
// coefficient dropping of the stencil)
inline int mirror(int i, int n) {
    if (i < 0) return -i - 1;
    if (i >= n) return 2 * n - i - 1;
    return i;
}

}  // namespace

PixelField laplacian_magnitude(const PixelField& image) {
    PixelField out(image.width, image.height, 1);
    const int w = image.width, h = image.height;
    InpaintMask empty(w, h, 0);
    std::vector<double> lap(static_cast<std::size_t>(w) * h);
    for (int ch = 0; ch < image.channels; ++ch) {
        apply_heat_operator_plane(image.plane(ch), lap, empty, image.hx, image.hy);
        for (std::size_t i = 0; i < lap.size(); ++i) out.values[i] += lap[i];
    }
    for (double& v : out.values) v = std::fabs(v);
    return out;
}

InpaintMask threshold_mask(const PixelField& magnitude, double p) {
    if (!(p > 0.0) || p > 1.0)
        fail(ErrorCode::Invalid, "threshold_mask: density must lie in (0,1]");
    const std::size_t n = static_cast<std::size_t>(magnitude.pixels());
    const std::size_t keep = static_cast<std::size_t>(p * static_cast<double>(n));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto plane = magnitude.plane(0);
    std::nth_element(order.begin(), order.begin() + keep, order.end(),
                     [&](std::size_t a, std::size_t b) {
                         if (plane[a] != plane[b]) return plane[a] > plane[b];
                         return a < b;
                     });
    InpaintMask mask(magnitude.width, magnitude.height);
    for (std::size_t i = 0; i < keep; ++i) mask.bits[order[i]] = 1;
    return mask;
}

PixelField gaussian_smooth(const PixelField& image, double sigma) {
    if (sigma < 0.0) fail(ErrorCode::Invalid, "gaussian_smooth: sigma must be >= 0");
    if (sigma == 0.0) return image;
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
        kernel[static_cast<std::size_t>(i + radius)] = v;
        sum += v;
    }
    for (double& v : kernel) v /= sum;

    PixelField out = image;
    const int w = image.width, h = image.height;
    std::vector<double> tmp(static_cast<std::size_t>(w) * h);
    for (int ch = 0; ch < image.channels; ++ch) {
        auto src = out.plane(ch);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                double acc = 0.0;
                for (int i = -radius; i <= radius; ++i)
                    acc += kernel[static_cast<std::size_t>(i + radius)] *
                           src[static_cast<std::size_t>(y) * w + mirror(x + i, w)];
                tmp[static_cast<std::size_t>(y) * w + x] = acc;
            }
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                double acc = 0.0;
                for (int i = -radius; i <= radius; ++i)
                    acc += kernel[static_cast<std::size_t>(i + radius)] *
                           tmp[static_cast<std::size_t>(mirror(y + i, h)) * w + x];
                src[static_cast<std::size_t>(y) * w + x] = acc;
            }
    }
    return out;
}

InpaintMask marr_hildreth_mask(const PixelField& image, const EncoderParams& params) {
    const PixelField smoothed = gaussian_smooth(image, params.sigma);
    const int w = image.width, h = image.height;

    // channel-summed smoothed intensity and its Laplacian
    std::vector<double> intensity(static_cast<std::size_t>(w) * h, 0.0);
    for (int ch = 0; ch < image.channels; ++ch) {
        const auto plane = smoothed.plane(ch);
        for (std::size_t i = 0; i < intensity.size(); ++i) intensity[i] += plane[i];
    }
    InpaintMask empty(w, h, 0);
    std::vector<double> lap(intensity.size());
    apply_heat_operator_plane(intensity, lap, empty, image.hx, image.hy);

    std::vector<double> grad(intensity.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double gx = 0.5 * (intensity[static_cast<std::size_t>(y) * w + mirror(x + 1, w)] -
                                     intensity[static_cast<std::size_t>(y) * w + mirror(x - 1, w)]);
            const double gy = 0.5 * (intensity[static_cast<std::size_t>(mirror(y + 1, h)) * w + x] -
                                     intensity[static_cast<std::size_t>(mirror(y - 1, h)) * w + x]);
            grad[static_cast<std::size_t>(y) * w + x] = std::hypot(gx, gy);
        }

    InpaintMask mask(w, h);
    const double thr = params.grad_threshold;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (!(grad[i] >= thr)) continue;
            if (x + 1 < w && lap[i] * lap[i + 1] < 0.0) {
                mask.bits[i] = 1;
                mask.bits[i + 1] = 1;  // grey data on both sides of the edge
            }
            if (y + 1 < h && lap[i] * lap[i + w] < 0.0) {
                mask.bits[i] = 1;
                mask.bits[i + w] = 1;
            }
        }
    return mask;
}

InpaintMask dither_mask(const PixelField& magnitude, double p) {
    if (!(p > 0.0) || p > 1.0)
        fail(ErrorCode::Invalid, "dither_mask: density must lie in (0,1]");
    const auto plane = magnitude.plane(0);
    double mean = 0.0;
    for (double v : plane) mean += v;
    mean /= static_cast<double>(plane.size());
    if (mean <= 0.0)
        fail(ErrorCode::Degenerate,
             "dither_mask: Laplacian magnitude is identically zero");

    // The clamp at 255 removes mass from the heavy tail of the magnitude, so
    // a single scale lands below the target mean. Rescale against the clamped
    // mean until it matches p*255; Floyd-Steinberg then realizes density p.
    const double target = p * 255.0;
    double scale = target / mean;
    const int w = magnitude.width, h = magnitude.height;
    std::vector<double> work(plane.size());
    for (int iter = 0; iter < 64; ++iter) {
        double clamped_mean = 0.0;
        for (std::size_t i = 0; i < plane.size(); ++i) {
            work[i] = std::clamp(plane[i] * scale, 0.0, 255.0);
            clamped_mean += work[i];
        }
        clamped_mean /= static_cast<double>(plane.size());
        if (std::fabs(clamped_mean - target) <= 1e-6 * 255.0) break;
        if (clamped_mean <= 0.0) break;
        scale *= target / clamped_mean;
    }

    InpaintMask mask(w, h);
    // Floyd-Steinberg, plain raster order: 7/16 right, 3/16 left-down,
    // 5/16 down, 1/16 right-down; diffusion past the border is dropped.
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const double v = work[i];
            const double quantized = v >= 127.5 ? 255.0 : 0.0;
            if (quantized > 0.0) mask.bits[i] = 1;
            const double err = v - quantized;
            if (x + 1 < w) work[i + 1] += err * (7.0 / 16.0);
            if (y + 1 < h) {
                if (x > 0) work[i + w - 1] += err * (3.0 / 16.0);
                work[i + w] += err * (5.0 / 16.0);
                if (x + 1 < w) work[i + w + 1] += err * (1.0 / 16.0);
            }
        }
    return mask;
}

std::vector<std::uint8_t> quantize(std::span<const double> values, int bits,
                                   std::uint64_t* clamped) {
    if (bits < 1 || bits > 8)
        fail(ErrorCode::Invalid, "quantize: bits must lie in 1..8");
    const int levels = 1 << bits;
    const double cell = 255.0 / levels;
    std::vector<std::uint8_t> out(values.size());
    std::uint64_t clamps = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double v = values[i];
        if (v < 0.0 || v > 255.0) {
            v = std::clamp(v, 0.0, 255.0);
            ++clamps;
        }
        int q = static_cast<int>(v / cell);
        q = std::clamp(q, 0, levels - 1);
        out[i] = static_cast<std::uint8_t>(q);
    }
    if (clamped) *clamped += clamps;
    return out;
}

std::vector<double> dequantize(std::span<const std::uint8_t> levels, int bits) {
    if (bits < 1 || bits > 8)
        fail(ErrorCode::Invalid, "dequantize: bits must lie in 1..8");
    const double cell = 255.0 / (1 << bits);
    std::vector<double> out(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i)
        out[i] = (static_cast<double>(levels[i]) + 0.5) * cell;
    return out;
}

std::vector<std::size_t> kept_chain_indices(std::size_t n, int d) {
    if (d < 1) fail(ErrorCode::Invalid, "subsample_chain: d must be >= 1");
    std::vector<std::size_t> kept;
    if (n == 0) return kept;
    for (std::size_t i = 0; i < n; i += static_cast<std::size_t>(d)) kept.push_back(i);
    if (kept.back() != n - 1) kept.push_back(n - 1);
    return kept;
}

std::vector<double> subsample_chain(std::span<const double> values, int d) {
    const std::vector<std::size_t> kept = kept_chain_indices(values.size(), d);
    std::vector<double> out;
    out.reserve(kept.size());
    for (std::size_t i : kept) out.push_back(values[i]);
    return out;
}

std::vector<double> upsample_chain(std::span<const double> kept, std::size_t n, int d) {
    const std::vector<std::size_t> idx = kept_chain_indices(n, d);
    if (kept.size() != idx.size())
        fail(ErrorCode::Invalid, "upsample_chain: kept-value count mismatch");
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] = kept[k];
    for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
        const std::size_t a = idx[k], b = idx[k + 1];
        for (std::size_t i = a + 1; i < b; ++i) {
            const double s = static_cast<double>(i - a) / static_cast<double>(b - a);
            out[i] = kept[k] + s * (kept[k + 1] - kept[k]);
        }
    }
    return out;
}

std::vector<double> masked_values(std::span<const double> plane,
                                  const InpaintMask& mask) {
    std::vector<double> out;
    out.reserve(mask.count());
    for (std::size_t i = 0; i < plane.size(); ++i)
        if (mask.bits[i]) out.push_back(plane[i]);
    return out;
}

EncodedImage encode_image(const PixelField& image, const EncoderParams& params) {
    EncodedImage enc;
    enc.params = params;
    switch (params.method) {
        case MaskMethod::Threshold:
            enc.mask = threshold_mask(laplacian_magnitude(image), params.density);
            break;
        case MaskMethod::Edge:
            enc.mask = marr_hildreth_mask(image, params);
            break;
        case MaskMethod::Dither:
            enc.mask = dither_mask(laplacian_magnitude(image), params.density);
            break;
    }
    if (enc.mask.count() == 0)
        fail(ErrorCode::Degenerate, "encoder produced an empty mask");
    enc.stats.mask_count = enc.mask.count();
    enc.stats.realized_density = enc.mask.density();
    for (int ch = 0; ch < image.channels; ++ch) {
        const std::vector<double> vals = masked_values(image.plane(ch), enc.mask);
        const std::vector<double> chain = subsample_chain(vals, params.subsample_d);
        enc.payload.push_back(quantize(chain, params.quant_bits, &enc.stats.clamped_values));
    }
    return enc;
}

PixelField reconstruct_compressed(const InpaintMask& mask,
                                  const std::vector<std::vector<std::uint8_t>>& payload,
                                  int channels, int quant_bits, int subsample_d) {
    PixelField out(mask.width, mask.height, channels);
    const std::size_t n = mask.count();
    for (int ch = 0; ch < channels; ++ch) {
        const std::vector<double> kept =
            dequantize(payload[static_cast<std::size_t>(ch)], quant_bits);
        const std::vector<double> vals = upsample_chain(kept, n, subsample_d);
        auto plane = out.plane(ch);
        std::size_t k = 0;
        for (std::size_t i = 0; i < plane.size(); ++i)
            if (mask.bits[i]) plane[i] = vals[k++];
    }
    return out;
}

}  // namespace ekd
