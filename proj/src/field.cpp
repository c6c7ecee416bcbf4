#include "field.hpp"

#include <algorithm>
#include <numeric>

#include "error.hpp"

namespace ekd {

PixelField::PixelField(int w, int h, int c, double fill)
    : width(w), height(h), channels(c), hx(1.0), hy(1.0) {
    if (w < 1 || h < 1 || (c != 1 && c != 3))
        fail(ErrorCode::Invalid, "pixel field dimensions must be positive with 1 or 3 channels");
    values.assign(static_cast<std::size_t>(w) * h * c, fill);
}

InpaintMask::InpaintMask(int w, int h, std::uint8_t fill) : width(w), height(h) {
    if (w < 1 || h < 1)
        fail(ErrorCode::Invalid, "mask dimensions must be positive");
    bits.assign(static_cast<std::size_t>(w) * h, fill ? 1 : 0);
}

std::size_t InpaintMask::count() const {
    return static_cast<std::size_t>(
        std::count_if(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; }));
}

double InpaintMask::density() const {
    if (bits.empty()) return 0.0;
    return static_cast<double>(count()) / static_cast<double>(bits.size());
}

}  // namespace ekd
