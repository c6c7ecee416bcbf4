#include "dense.hpp"

#include <lapacke.h>

#include <string>

#include "error.hpp"

namespace ekd {

namespace {

void check_cap(const InpaintMask& mask) {
    if (mask.pixels() > kDenseCap)
        fail(ErrorCode::Invalid, "dense materialization capped at " +
                                     std::to_string(kDenseCap) + " pixels");
}

}  // namespace

std::vector<double> materialize_heat_operator(const InpaintMask& mask, double hx,
                                              double hy) {
    check_cap(mask);
    const int w = mask.width, h = mask.height;
    const std::size_t n = static_cast<std::size_t>(w) * h;
    const double ihx2 = 1.0 / (hx * hx), ihy2 = 1.0 / (hy * hy);
    std::vector<double> a(n * n, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (mask.bits[i]) continue;
            double diag = 0.0;
            if (x > 0) { a[i * n + (i - 1)] = ihx2; diag -= ihx2; }
            if (x + 1 < w) { a[i * n + (i + 1)] = ihx2; diag -= ihx2; }
            if (y > 0) { a[i * n + (i - w)] = ihy2; diag -= ihy2; }
            if (y + 1 < h) { a[i * n + (i + w)] = ihy2; diag -= ihy2; }
            a[i * n + i] = diag;
        }
    }
    return a;
}

std::vector<double> materialize_interior_operator(const InpaintMask& mask,
                                                  double hx, double hy) {
    check_cap(mask);
    const int w = mask.width, h = mask.height;
    const std::size_t n = static_cast<std::size_t>(w) * h;
    // interior index of each non-stored pixel, -1 at stored ones
    std::vector<std::ptrdiff_t> idx(n, -1);
    std::ptrdiff_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (!mask.bits[i]) idx[i] = k++;
    const std::size_t m = static_cast<std::size_t>(k);
    const double ihx2 = 1.0 / (hx * hx), ihy2 = 1.0 / (hy * hy);
    std::vector<double> a(m * m, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (mask.bits[i]) continue;
            const std::size_t r = static_cast<std::size_t>(idx[i]);
            double diag = 0.0;
            auto couple = [&](std::size_t j, double coef) {
                diag -= coef;  // in-domain neighbour always hits the diagonal
                if (idx[j] >= 0) a[r * m + static_cast<std::size_t>(idx[j])] = coef;
            };
            if (x > 0) couple(i - 1, ihx2);
            if (x + 1 < w) couple(i + 1, ihx2);
            if (y > 0) couple(i - w, ihy2);
            if (y + 1 < h) couple(i + w, ihy2);
            a[r * m + r] = diag;
        }
    }
    return a;
}

SymEigen sym_eigen(std::vector<double> a, int n) {
    SymEigen out;
    out.n = n;
    out.values.assign(static_cast<std::size_t>(n), 0.0);
    if (n == 0) return out;
    const int info = LAPACKE_dsyevd(LAPACK_ROW_MAJOR, 'V', 'L', n, a.data(), n,
                                    out.values.data());
    if (info != 0)
        fail(ErrorCode::Solver, "dsyevd failed, info=" + std::to_string(info));
    out.vectors = std::move(a);
    return out;
}

std::vector<double> spd_solve(std::vector<double> a, int n,
                              std::vector<double> rhs) {
    if (n == 0) return rhs;
    const int info =
        LAPACKE_dposv(LAPACK_ROW_MAJOR, 'L', n, 1, a.data(), n, rhs.data(), 1);
    if (info != 0)
        fail(ErrorCode::Solver, "dposv failed, info=" + std::to_string(info));
    return rhs;
}

std::vector<double> lu_solve(std::vector<double> a, int n,
                             std::vector<double> rhs) {
    if (n == 0) return rhs;
    std::vector<lapack_int> piv(static_cast<std::size_t>(n));
    const int info = LAPACKE_dgesv(LAPACK_ROW_MAJOR, n, 1, a.data(), n,
                                   piv.data(), rhs.data(), 1);
    if (info != 0)
        fail(ErrorCode::Solver, "dgesv failed, info=" + std::to_string(info));
    return rhs;
}

CholeskyFactor CholeskyFactor::compute(std::vector<double> a, int n) {
    CholeskyFactor f;
    f.n = n;
    if (n == 0) return f;
    const int info = LAPACKE_dpotrf(LAPACK_ROW_MAJOR, 'L', n, a.data(), n);
    if (info != 0)
        fail(ErrorCode::Solver, "dpotrf failed, info=" + std::to_string(info));
    f.lower = std::move(a);
    return f;
}

std::vector<double> CholeskyFactor::solve(std::vector<double> rhs) const {
    if (n == 0) return rhs;
    const int info = LAPACKE_dpotrs(LAPACK_ROW_MAJOR, 'L', n, 1, lower.data(), n,
                                    rhs.data(), 1);
    if (info != 0)
        fail(ErrorCode::Solver, "dpotrs failed, info=" + std::to_string(info));
    return rhs;
}

}  // namespace ekd
