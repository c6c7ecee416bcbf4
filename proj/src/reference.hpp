#ifndef EKD_REFERENCE_HPP
#define EKD_REFERENCE_HPP

#include <utility>

#include "field.hpp"
#include "multigrid.hpp"

namespace ekd {

// Baseline time integrators and exact oracles for benchmarking and
// acceptance. Both integrators run through the same multigrid backend as the
// decoder, one interior solve per step, so solve counts are comparable.

// y(t) ~ (gamma (gamma I - A)^{-1})^n b with gamma = n/t, reduced to interior
// updates z <- (gamma I - A_sym)^{-1}(b_sym + gamma z).
PixelField implicit_euler(const PixelField& b, const InpaintMask& mask, double t,
                          int n, const MultigridConfig& mg,
                          int* solve_count = nullptr);

// y(t) ~ ((gamma I + A)(gamma I - A)^{-1})^n b with gamma = 2n/t, reduced to
// z <- z + 2 s, (gamma I - A_sym) s = b_sym + A_sym z.
PixelField crank_nicolson(const PixelField& b, const InpaintMask& mask, double t,
                          int n, const MultigridConfig& mg,
                          int* solve_count = nullptr);

// t -> infinity limit: interior solve A_sym x = -b_sym at gamma = 0.
PixelField steady_state(const PixelField& b, const InpaintMask& mask,
                        const MultigridConfig& mg, int* solve_count = nullptr);

// Exact e^{tA} b = b + R^T(t phi1(t A_sym) b_sym) by dense symmetric
// eigendecomposition of A_sym. Interior size capped at 4096.
PixelField dense_oracle_expm(const PixelField& b, const InpaintMask& mask,
                             double t);

// All-white frame test problem: n x n field with 255 on the one-pixel border
// and 0 inside; the mask stores exactly the border. Throws for n < 3 (no
// interior pixels).
std::pair<PixelField, InpaintMask> frame_problem(int n);

// Structure-aware oracle for the frame problem: the interior operator is the
// plain Dirichlet Laplacian, so its eigenbasis is the tensor sine basis and
// e^{tA} b costs two small transforms. Cross-checked against
// dense_oracle_expm in the tests; used where the dense route would dominate
// the runtime budget.
PixelField frame_oracle_expm(const PixelField& b, double t);

}  // namespace ekd

#endif
