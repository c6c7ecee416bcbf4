#include "heat_operator.hpp"

#include <cmath>

#include "error.hpp"

namespace ekd {

namespace {

void check_plane(std::size_t n, const InpaintMask& mask, const char* who) {
    if (n != static_cast<std::size_t>(mask.pixels()))
        fail(ErrorCode::Invalid, std::string(who) + ": plane/mask dimension mismatch");
}

}  // namespace

void apply_heat_operator_plane(std::span<const double> in, std::span<double> out,
                               const InpaintMask& mask, double hx, double hy) {
    check_plane(in.size(), mask, "apply_heat_operator");
    check_plane(out.size(), mask, "apply_heat_operator");
    const int w = mask.width, h = mask.height;
    const double ihx2 = 1.0 / (hx * hx), ihy2 = 1.0 / (hy * hy);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (mask.bits[i]) {
                out[i] = 0.0;  // zero row at stored pixels
                continue;
            }
            const double c = in[i];
            double acc = 0.0;
            if (x > 0) acc += (in[i - 1] - c) * ihx2;
            if (x + 1 < w) acc += (in[i + 1] - c) * ihx2;
            if (y > 0) acc += (in[i - w] - c) * ihy2;
            if (y + 1 < h) acc += (in[i + w] - c) * ihy2;
            out[i] = acc;
        }
    }
}

PixelField apply_heat_operator(const PixelField& field, const InpaintMask& mask) {
    if (field.channels != 1)
        fail(ErrorCode::Invalid, "apply_heat_operator: single-channel fields only");
    PixelField out(field.width, field.height, 1);
    out.hx = field.hx;
    out.hy = field.hy;
    apply_heat_operator_plane(field.plane(0), out.plane(0), mask, field.hx, field.hy);
    return out;
}

std::vector<double> apply_interior_operator(std::span<const double> x,
                                            const InpaintMask& mask, double hx,
                                            double hy) {
    const int w = mask.width, h = mask.height;
    if (x.size() != mask.interior_size())
        fail(ErrorCode::Invalid, "apply_interior_operator: interior length mismatch");
    // Scatter into a full plane (zeros at stored pixels realize the Dirichlet
    // coupling), apply the masked stencil, gather.
    std::vector<double> plane(static_cast<std::size_t>(w) * h, 0.0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < plane.size(); ++i)
        if (!mask.bits[i]) plane[i] = x[k++];
    std::vector<double> out_plane(plane.size());
    apply_heat_operator_plane(plane, out_plane, mask, hx, hy);
    std::vector<double> out(x.size());
    k = 0;
    for (std::size_t i = 0; i < plane.size(); ++i)
        if (!mask.bits[i]) out[k++] = out_plane[i];
    return out;
}

std::vector<double> restrict_to_interior(std::span<const double> plane,
                                         const InpaintMask& mask) {
    check_plane(plane.size(), mask, "restrict_to_interior");
    std::vector<double> out;
    out.reserve(mask.interior_size());
    for (std::size_t i = 0; i < plane.size(); ++i)
        if (!mask.bits[i]) out.push_back(plane[i]);
    return out;
}

void embed_from_interior_plane(std::span<const double> interior,
                               std::span<double> plane, const InpaintMask& mask) {
    check_plane(plane.size(), mask, "embed_from_interior");
    if (interior.size() != mask.interior_size())
        fail(ErrorCode::Invalid, "embed_from_interior: interior length mismatch");
    std::size_t k = 0;
    for (std::size_t i = 0; i < plane.size(); ++i)
        plane[i] = mask.bits[i] ? 0.0 : interior[k++];
}

PixelField embed_from_interior(std::span<const double> interior,
                               const InpaintMask& mask) {
    PixelField out(mask.width, mask.height, 1);
    embed_from_interior_plane(interior, out.plane(0), mask);
    return out;
}

std::vector<double> interior_forcing(std::span<const double> b,
                                     const InpaintMask& mask, double hx, double hy) {
    check_plane(b.size(), mask, "interior_forcing");
    const int w = mask.width, h = mask.height;
    const double ihx2 = 1.0 / (hx * hx), ihy2 = 1.0 / (hy * hy);
    std::vector<double> out;
    out.reserve(mask.interior_size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (mask.bits[i]) continue;
            double acc = 0.0;
            if (x > 0 && mask.bits[i - 1]) acc += b[i - 1] * ihx2;
            if (x + 1 < w && mask.bits[i + 1]) acc += b[i + 1] * ihx2;
            if (y > 0 && mask.bits[i - w]) acc += b[i - w] * ihy2;
            if (y + 1 < h && mask.bits[i + w]) acc += b[i + w] * ihy2;
            out.push_back(acc);
        }
    }
    return out;
}

std::vector<double> interior_forcing(const PixelField& b, const InpaintMask& mask) {
    if (b.channels != 1)
        fail(ErrorCode::Invalid, "interior_forcing: single-channel fields only");
    return interior_forcing(b.plane(0), mask, b.hx, b.hy);
}

double phi1(double z) {
    const double az = std::fabs(z);
    if (az > 1e-5) return std::expm1(z) / z;
    // Degree-4 Taylor polynomial; truncation error ~ z^5/720, far below
    // double rounding at this magnitude.
    return 1.0 + z * (1.0 / 2.0 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)));
}

}  // namespace ekd
