#ifndef EKD_FIELD_HPP
#define EKD_FIELD_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ekd {

// Planar multi-channel image on a rectangular grid. Values are stored one
// plane per channel, row-major within a plane. Intensities are natural grey
// levels in [0,255] but nothing here clamps; the numerics need headroom.
struct PixelField {
    int width = 0;
    int height = 0;
    int channels = 1;
    double hx = 1.0;  // grid spacing, x direction (columns)
    double hy = 1.0;  // grid spacing, y direction (rows)
    std::vector<double> values;

    PixelField() = default;
    PixelField(int w, int h, int c = 1, double fill = 0.0);

    int pixels() const { return width * height; }

    double& at(int ch, int y, int x) {
        return values[static_cast<std::size_t>(ch) * pixels() +
                      static_cast<std::size_t>(y) * width + x];
    }
    double at(int ch, int y, int x) const {
        return values[static_cast<std::size_t>(ch) * pixels() +
                      static_cast<std::size_t>(y) * width + x];
    }

    std::span<double> plane(int ch) {
        return {values.data() + static_cast<std::size_t>(ch) * pixels(),
                static_cast<std::size_t>(pixels())};
    }
    std::span<const double> plane(int ch) const {
        return {values.data() + static_cast<std::size_t>(ch) * pixels(),
                static_cast<std::size_t>(pixels())};
    }

    bool same_shape(const PixelField& other) const {
        return width == other.width && height == other.height &&
               channels == other.channels;
    }
};

// Binary per-pixel mask; 1 flags a stored pixel (discrete Dirichlet datum),
// 0 a pixel to be reconstructed.
struct InpaintMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    InpaintMask() = default;
    InpaintMask(int w, int h, std::uint8_t fill = 0);

    int pixels() const { return width * height; }

    bool stored(std::size_t idx) const { return bits[idx] != 0; }
    bool stored(int y, int x) const {
        return bits[static_cast<std::size_t>(y) * width + x] != 0;
    }
    void set(int y, int x, bool v) {
        bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
    }

    std::size_t count() const;
    double density() const;
    std::size_t interior_size() const { return bits.size() - count(); }
};

}  // namespace ekd

#endif
