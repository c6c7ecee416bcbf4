#ifndef EKD_KRYLOV_HPP
#define EKD_KRYLOV_HPP

#include <functional>
#include <span>
#include <vector>

#include "field.hpp"
#include "multigrid.hpp"

namespace ekd {

// Minimax data for the extended Krylov subspace of dimension m: the number of
// shifted linear solves, the uniform rational-approximation error E_m at the
// optimal shift, and the optimal shift itself. Embedded constants, rows for
// m = 3..22.
struct GammaRow {
    int solves;
    double minimax_error;
    double gamma_opt;
};

// Throws Error(Invalid) outside m = 3..22.
const GammaRow& gamma_table_row(int m);

// Scaled shift for the time-independent optimum: gamma_opt(m)/t. Accepts
// m = 2..22; m = 2 borrows the m = 3 row (it performs zero solves).
double choose_shift(int m, double t);

// A-priori bound 2*t*E_m(gamma_opt)*||b_sym|| on the Euclidean error of the
// Krylov approximation.
double error_bound(int m, double t, double bsym_norm);

// Orthonormal basis of K_{m-1}((gamma I - A_sym)^{-1}, b_sym) plus the
// projection of A_sym onto it.
struct KrylovState {
    std::vector<std::vector<double>> basis;  // w_1..w_{m-1}, interior vectors
    std::vector<double> projected;  // S~ = W^T A_sym W, (m-1)x(m-1) row-major
    double b_norm = 0.0;
    double bsym_norm = 0.0;
    double t = 0.0;
    double gamma_scaled = 0.0;
    int m = 0;
};

enum class Orthogonalization {
    Full,     // reorthogonalize against every previous basis vector
    TwoTerm,  // the short recurrence: previous two vectors only
};

// Solves (gamma I - A_sym) x = w; plugged with multigrid in production and
// with dense factorizations in tests.
using InteriorSolver =
    std::function<std::vector<double>(std::span<const double> rhs)>;

KrylovState symmetric_arnoldi(const InpaintMask& mask, double hx, double hy,
                              std::span<const double> b_sym, int m, double t,
                              double gamma_scaled, const InteriorSolver& solver,
                              Orthogonalization ortho = Orthogonalization::Full);

// f_m = b + R^T(||b_sym|| W t phi1(t S~) e_1). Stored pixels of the output are
// the untouched values of b, bit for bit.
PixelField assemble_approximation(const KrylovState& state, const PixelField& b,
                                  const InpaintMask& mask);

// Basis of the extended Krylov subspace E_m((gamma I - A)^{-1}, b) on the full
// pixel space, with dense resolvent solves. Small instances only; this is the
// cross-check route for the symmetric algorithm.
struct ArnoldiLikeResult {
    std::vector<std::vector<double>> basis;  // v_1..v_m, full-plane vectors
    std::vector<double> projected;           // S_m = V^T A V, m x m row-major
};

ArnoldiLikeResult arnoldi_like(const PixelField& b, const InpaintMask& mask,
                               int m, double gamma_scaled);

// Symmetric eigendecomposition by cyclic Jacobi rotations; sized for the
// projected matrices (k <= 21). a is k x k row-major.
struct SmallEigen {
    std::vector<double> values;
    std::vector<double> vectors;  // row-major; column j is eigenvector j
};
SmallEigen jacobi_eigen(std::vector<double> a, int k);

// y = t*phi1(t*S) e_1 for symmetric S via jacobi_eigen.
std::vector<double> phi1_action(const std::vector<double>& s, int k, double t);

struct DecodeInfo {
    int solves_per_channel = 0;
    int total_solves = 0;
    double gamma_scaled = 0.0;
};

// Per-channel decoding of the compressed field b: b_sym, symmetric Arnoldi
// with multigrid solves at shift gamma_opt(m)/t, assembly. Output is not
// clamped; image export owns the [0,255] projection.
PixelField decode_field(const PixelField& b, const InpaintMask& mask, double t,
                        int m, const MultigridConfig& mg,
                        DecodeInfo* info = nullptr);

}  // namespace ekd

#endif
