#ifndef EKD_HEAT_OPERATOR_HPP
#define EKD_HEAT_OPERATOR_HPP

#include <span>
#include <vector>

#include "field.hpp"

namespace ekd {

// Matrix-free kernels for the masked heat operator A, its symmetric interior
// restriction A_sym = R A R^T, and the selection/embedding maps R and R^T.
// Row-major pixel numbering throughout; interior vectors enumerate the
// non-stored pixels in row-major order.
//
// A applies the 5-point Laplacian at non-stored pixels (missing neighbours at
// the image border are mirrored, i.e. their coefficient is dropped from the
// centre) and has zero rows at stored pixels. A_sym is the same stencil with
// homogeneous Dirichlet values at stored neighbours.

// out = A * in, single plane.
void apply_heat_operator_plane(std::span<const double> in, std::span<double> out,
                               const InpaintMask& mask, double hx, double hy);

// Convenience wrapper on a single-channel field.
PixelField apply_heat_operator(const PixelField& field, const InpaintMask& mask);

// y = A_sym * x on interior vectors.
std::vector<double> apply_interior_operator(std::span<const double> x,
                                            const InpaintMask& mask, double hx,
                                            double hy);

// R: select non-stored pixels of a plane in row-major order.
std::vector<double> restrict_to_interior(std::span<const double> plane,
                                         const InpaintMask& mask);

// R^T: blow an interior vector up to a full plane, zero at stored pixels.
PixelField embed_from_interior(std::span<const double> interior,
                               const InpaintMask& mask);
void embed_from_interior_plane(std::span<const double> interior,
                               std::span<double> plane, const InpaintMask& mask);

// b_sym = R A b for a plane b that is supported on the stored pixels:
// at each non-stored pixel, the stored-neighbour intensities divided by the
// corresponding squared spacing.
std::vector<double> interior_forcing(std::span<const double> b,
                                     const InpaintMask& mask, double hx, double hy);
std::vector<double> interior_forcing(const PixelField& b, const InpaintMask& mask);

// phi1(z) = (e^z - 1)/z, continuously extended with phi1(0) = 1. Evaluated via
// expm1 away from zero and a short Taylor polynomial below |z| = 1e-5.
double phi1(double z);

}  // namespace ekd

#endif
