#include "reference.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dense.hpp"
#include "error.hpp"
#include "heat_operator.hpp"

namespace ekd {

namespace {

void check_pair(const PixelField& b, const InpaintMask& mask, const char* who) {
    if (b.width != mask.width || b.height != mask.height)
        fail(ErrorCode::Invalid, std::string(who) + ": field/mask dimension mismatch");
}

std::vector<double> solve_interior(const MultigridSolver& solver,
                                   const InpaintMask& mask,
                                   std::span<const double> interior_rhs,
                                   double gamma, int* solve_count) {
    std::vector<double> full(static_cast<std::size_t>(mask.pixels()), 0.0);
    embed_from_interior_plane(interior_rhs, full, mask);
    MultigridSolver::Result r = solver.solve(full, gamma);
    if (solve_count) ++*solve_count;
    return restrict_to_interior(r.x, mask);
}

PixelField embed_result(const PixelField& b, const InpaintMask& mask,
                        const std::vector<std::vector<double>>& interior) {
    PixelField out = b;
    for (int ch = 0; ch < b.channels; ++ch) {
        auto plane = out.plane(ch);
        const auto& z = interior[static_cast<std::size_t>(ch)];
        std::size_t k = 0;
        for (std::size_t i = 0; i < plane.size(); ++i)
            if (!mask.bits[i]) plane[i] += z[k++];
    }
    return out;
}

}  // namespace

PixelField implicit_euler(const PixelField& b, const InpaintMask& mask, double t,
                          int n, const MultigridConfig& mg, int* solve_count) {
    check_pair(b, mask, "implicit_euler");
    if (n < 1) fail(ErrorCode::Invalid, "implicit_euler: n must be >= 1");
    if (t <= 0.0) fail(ErrorCode::Invalid, "implicit_euler: t must be > 0");
    if (mask.interior_size() == 0) return b;
    const double gamma = static_cast<double>(n) / t;
    const MultigridSolver solver(mask, b.hx, b.hy, mg);
    std::vector<std::vector<double>> result;
    for (int ch = 0; ch < b.channels; ++ch) {
        const std::vector<double> bsym = interior_forcing(b.plane(ch), mask, b.hx, b.hy);
        std::vector<double> z(bsym.size(), 0.0);
        std::vector<double> rhs(bsym.size());
        for (int step = 0; step < n; ++step) {
            for (std::size_t i = 0; i < rhs.size(); ++i)
                rhs[i] = bsym[i] + gamma * z[i];
            z = solve_interior(solver, mask, rhs, gamma, solve_count);
        }
        result.push_back(std::move(z));
    }
    return embed_result(b, mask, result);
}

PixelField crank_nicolson(const PixelField& b, const InpaintMask& mask, double t,
                          int n, const MultigridConfig& mg, int* solve_count) {
    check_pair(b, mask, "crank_nicolson");
    if (n < 1) fail(ErrorCode::Invalid, "crank_nicolson: n must be >= 1");
    if (t <= 0.0) fail(ErrorCode::Invalid, "crank_nicolson: t must be > 0");
    if (mask.interior_size() == 0) return b;
    const double gamma = 2.0 * static_cast<double>(n) / t;
    const MultigridSolver solver(mask, b.hx, b.hy, mg);
    std::vector<std::vector<double>> result;
    for (int ch = 0; ch < b.channels; ++ch) {
        const std::vector<double> bsym = interior_forcing(b.plane(ch), mask, b.hx, b.hy);
        std::vector<double> z(bsym.size(), 0.0);
        std::vector<double> rhs(bsym.size());
        for (int step = 0; step < n; ++step) {
            const std::vector<double> az = apply_interior_operator(z, mask, b.hx, b.hy);
            for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = bsym[i] + az[i];
            const std::vector<double> s =
                solve_interior(solver, mask, rhs, gamma, solve_count);
            for (std::size_t i = 0; i < z.size(); ++i) z[i] += 2.0 * s[i];
        }
        result.push_back(std::move(z));
    }
    return embed_result(b, mask, result);
}

PixelField steady_state(const PixelField& b, const InpaintMask& mask,
                        const MultigridConfig& mg, int* solve_count) {
    check_pair(b, mask, "steady_state");
    if (mask.count() == 0)
        fail(ErrorCode::Invalid, "steady_state: empty inpainting mask");
    if (mask.interior_size() == 0) return b;
    const MultigridSolver solver(mask, b.hx, b.hy, mg);
    std::vector<std::vector<double>> result;
    for (int ch = 0; ch < b.channels; ++ch) {
        const std::vector<double> bsym = interior_forcing(b.plane(ch), mask, b.hx, b.hy);
        // (0 I - A_sym) x = b_sym, i.e. x = -A_sym^{-1} b_sym
        result.push_back(solve_interior(solver, mask, bsym, 0.0, solve_count));
    }
    return embed_result(b, mask, result);
}

PixelField dense_oracle_expm(const PixelField& b, const InpaintMask& mask,
                             double t) {
    check_pair(b, mask, "dense_oracle_expm");
    if (t < 0.0) fail(ErrorCode::Invalid, "dense_oracle_expm: t must be >= 0");
    if (mask.interior_size() == 0) return b;
    if (mask.interior_size() > static_cast<std::size_t>(kDenseCap))
        fail(ErrorCode::Invalid, "dense_oracle_expm: interior size exceeds 4096");
    const SymEigen eig = sym_eigen(
        materialize_interior_operator(mask, b.hx, b.hy),
        static_cast<int>(mask.interior_size()));
    const std::size_t k = static_cast<std::size_t>(eig.n);
    std::vector<std::vector<double>> result;
    for (int ch = 0; ch < b.channels; ++ch) {
        const std::vector<double> bsym = interior_forcing(b.plane(ch), mask, b.hx, b.hy);
        std::vector<double> coeff(k, 0.0);  // Q^T b_sym
        for (std::size_t j = 0; j < k; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < k; ++i)
                acc += eig.vectors[i * k + j] * bsym[i];
            coeff[j] = acc * t * phi1(t * eig.values[j]);
        }
        std::vector<double> z(k, 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < k; ++j) acc += eig.vectors[i * k + j] * coeff[j];
            z[i] = acc;
        }
        result.push_back(std::move(z));
    }
    return embed_result(b, mask, result);
}

std::pair<PixelField, InpaintMask> frame_problem(int n) {
    if (n < 3)
        fail(ErrorCode::Invalid,
             "frame_problem: side length below 3 leaves no interior pixels");
    PixelField b(n, n, 1);
    InpaintMask mask(n, n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            if (x == 0 || y == 0 || x == n - 1 || y == n - 1) {
                b.at(0, y, x) = 255.0;
                mask.set(y, x, true);
            }
    return {std::move(b), std::move(mask)};
}

PixelField frame_oracle_expm(const PixelField& b, double t) {
    const int w = b.width, h = b.height;
    if (w < 3 || h < 3) fail(ErrorCode::Invalid, "frame_oracle_expm: grid too small");
    const int kx = w - 2, ky = h - 2;
    InpaintMask mask(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (x == 0 || y == 0 || x == w - 1 || y == h - 1) mask.set(y, x, true);

    // 1-D Dirichlet sine basis per axis (unit spacing)
    auto sine_matrix = [](int k) {
        std::vector<double> s(static_cast<std::size_t>(k) * k);
        const double norm = std::sqrt(2.0 / (k + 1));
        for (int p = 0; p < k; ++p)
            for (int i = 0; i < k; ++i)
                s[static_cast<std::size_t>(p) * k + i] =
                    norm * std::sin((p + 1) * (i + 1) * std::numbers::pi / (k + 1));
        return s;
    };
    auto lambda_1d = [](int k) {
        std::vector<double> l(static_cast<std::size_t>(k));
        for (int p = 0; p < k; ++p) {
            const double s = std::sin((p + 1) * std::numbers::pi / (2 * (k + 1)));
            l[static_cast<std::size_t>(p)] = -4.0 * s * s;
        }
        return l;
    };
    const std::vector<double> sx = sine_matrix(kx), sy = sine_matrix(ky);
    const std::vector<double> lx = lambda_1d(kx), ly = lambda_1d(ky);

    std::vector<std::vector<double>> result;
    for (int ch = 0; ch < b.channels; ++ch) {
        const std::vector<double> bsym = interior_forcing(b.plane(ch), mask, b.hx, b.hy);
        // forward transform: W = S_y Z S_x^T with Z the ky x kx interior grid
        std::vector<double> tmp(static_cast<std::size_t>(ky) * kx, 0.0);
        for (int p = 0; p < ky; ++p)
            for (int j = 0; j < kx; ++j) {
                double acc = 0.0;
                for (int i = 0; i < ky; ++i)
                    acc += sy[static_cast<std::size_t>(p) * ky + i] *
                           bsym[static_cast<std::size_t>(i) * kx + j];
                tmp[static_cast<std::size_t>(p) * kx + j] = acc;
            }
        std::vector<double> hat(static_cast<std::size_t>(ky) * kx, 0.0);
        for (int p = 0; p < ky; ++p)
            for (int q = 0; q < kx; ++q) {
                double acc = 0.0;
                for (int j = 0; j < kx; ++j)
                    acc += tmp[static_cast<std::size_t>(p) * kx + j] *
                           sx[static_cast<std::size_t>(q) * kx + j];
                const double lam = ly[static_cast<std::size_t>(p)] + lx[static_cast<std::size_t>(q)];
                hat[static_cast<std::size_t>(p) * kx + q] = acc * t * phi1(t * lam);
            }
        // inverse transform (the sine matrices are symmetric involutions up to
        // transposition: S^{-1} = S^T)
        for (int i = 0; i < ky; ++i)
            for (int q = 0; q < kx; ++q) {
                double acc = 0.0;
                for (int p = 0; p < ky; ++p)
                    acc += sy[static_cast<std::size_t>(p) * ky + i] *
                           hat[static_cast<std::size_t>(p) * kx + q];
                tmp[static_cast<std::size_t>(i) * kx + q] = acc;
            }
        std::vector<double> z(static_cast<std::size_t>(ky) * kx, 0.0);
        for (int i = 0; i < ky; ++i)
            for (int j = 0; j < kx; ++j) {
                double acc = 0.0;
                for (int q = 0; q < kx; ++q)
                    acc += tmp[static_cast<std::size_t>(i) * kx + q] *
                           sx[static_cast<std::size_t>(q) * kx + j];
                z[static_cast<std::size_t>(i) * kx + j] = acc;
            }
        result.push_back(std::move(z));
    }
    return embed_result(b, mask, result);
}

}  // namespace ekd
