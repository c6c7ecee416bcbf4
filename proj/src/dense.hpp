#ifndef EKD_DENSE_HPP
#define EKD_DENSE_HPP

#include <vector>

#include "field.hpp"

namespace ekd {

// Dense counterparts of the matrix-free kernels. These exist as oracles for
// tests and for the a-priori bound harness; the decode path never
// materializes a matrix. Instances are capped at kDenseCap pixels.
inline constexpr int kDenseCap = 4096;

// Full n x n matrix of the masked heat operator A (n = width*height).
std::vector<double> materialize_heat_operator(const InpaintMask& mask, double hx,
                                              double hy);

// k x k matrix of A_sym = R A R^T (k = number of non-stored pixels).
std::vector<double> materialize_interior_operator(const InpaintMask& mask,
                                                  double hx, double hy);

struct SymEigen {
    int n = 0;
    std::vector<double> values;   // ascending
    std::vector<double> vectors;  // row-major; column j is eigenvector j
};

// Symmetric eigendecomposition (LAPACK dsyevd). `a` is row-major n x n.
SymEigen sym_eigen(std::vector<double> a, int n);

// Solve a * x = rhs for symmetric positive-definite a (LAPACK dposv).
std::vector<double> spd_solve(std::vector<double> a, int n,
                              std::vector<double> rhs);

// Solve a * x = rhs for general square a (LAPACK dgesv).
std::vector<double> lu_solve(std::vector<double> a, int n,
                             std::vector<double> rhs);

// In-place Cholesky factorization + triangular solves, used by the multigrid
// coarsest level (factor once, solve many).
struct CholeskyFactor {
    int n = 0;
    std::vector<double> lower;  // row-major, lower triangle of the factor

    static CholeskyFactor compute(std::vector<double> a, int n);
    std::vector<double> solve(std::vector<double> rhs) const;
};

}  // namespace ekd

#endif
