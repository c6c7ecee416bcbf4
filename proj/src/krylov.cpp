#include "krylov.hpp"

#include <array>
#include <cmath>
#include <future>
#include <string>

#include "dense.hpp"
#include "error.hpp"
#include "heat_operator.hpp"

namespace ekd {

namespace {

constexpr std::array<GammaRow, 20> kGammaTable = {{
    // {solves, E_m(gamma_opt), gamma_opt}, row index 0 is m = 3
    {1, 2.6e-2, 1.5},
    {2, 6.6e-3, 3.5},
    {3, 2.2e-3, 5.5},
    {4, 6.9e-4, 3.5},
    {5, 2.0e-4, 5.0},
    {6, 8.9e-5, 7.0},
    {7, 2.8e-5, 8.5},
    {8, 1.0e-5, 6.5},
    {9, 3.8e-6, 8.5},
    {10, 1.1e-6, 10.0},
    {11, 5.3e-7, 8.5},
    {12, 1.8e-7, 10.0},
    {13, 5.7e-8, 11.5},
    {14, 2.5e-8, 10.0},
    {15, 8.6e-9, 11.5},
    {16, 3.1e-9, 13.0},
    {17, 1.3e-9, 11.5},
    {18, 4.8e-10, 13.0},
    {19, 1.9e-10, 14.5},
    {20, 8.3e-11, 16.0},
}};

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace

const GammaRow& gamma_table_row(int m) {
    if (m < 3 || m > 22)
        fail(ErrorCode::Invalid, "gamma table holds m = 3..22, got m = " + std::to_string(m));
    return kGammaTable[static_cast<std::size_t>(m - 3)];
}

double choose_shift(int m, double t) {
    if (t <= 0.0) fail(ErrorCode::Invalid, "choose_shift: t must be > 0");
    if (m < 2 || m > 22)
        fail(ErrorCode::Invalid, "subspace dimension m must lie in 2..22");
    return gamma_table_row(m == 2 ? 3 : m).gamma_opt / t;
}

double error_bound(int m, double t, double bsym_norm) {
    return 2.0 * t * gamma_table_row(m).minimax_error * bsym_norm;
}

KrylovState symmetric_arnoldi(const InpaintMask& mask, double hx, double hy,
                              std::span<const double> b_sym, int m, double t,
                              double gamma_scaled, const InteriorSolver& solver,
                              Orthogonalization ortho) {
    if (m < 2 || m > 22)
        fail(ErrorCode::Invalid, "subspace dimension m must lie in 2..22");
    KrylovState st;
    st.m = m;
    st.t = t;
    st.gamma_scaled = gamma_scaled;
    st.bsym_norm = norm2(b_sym);
    if (st.bsym_norm == 0.0)
        fail(ErrorCode::Invalid, "symmetric_arnoldi: b_sym is zero (empty mask?)");

    std::vector<std::vector<double>>& w = st.basis;
    w.emplace_back(b_sym.begin(), b_sym.end());
    for (double& v : w[0]) v /= st.bsym_norm;

    for (int j = 1; j <= m - 2; ++j) {
        std::vector<double> cand = solver(w[static_cast<std::size_t>(j - 1)]);
        if (ortho == Orthogonalization::Full) {
            // Modified Gram-Schmidt against the whole basis, twice; guards
            // against drift from inexact inner solves.
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& wi : w) axpy(-dot(cand, wi), wi, cand);
        } else {
            const std::size_t lo = w.size() >= 2 ? w.size() - 2 : 0;
            for (std::size_t i = lo; i < w.size(); ++i)
                axpy(-dot(cand, w[i]), w[i], cand);
        }
        const double nn = norm2(cand);
        if (nn <= 1e-14 * st.bsym_norm) break;  // invariant subspace reached
        for (double& v : cand) v /= nn;
        w.push_back(std::move(cand));
    }

    // S~ = W^T A_sym W, assembled from explicit operator applications and
    // symmetrized.
    const int k = static_cast<int>(w.size());
    st.projected.assign(static_cast<std::size_t>(k) * k, 0.0);
    std::vector<std::vector<double>> aw(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        aw[static_cast<std::size_t>(i)] =
            apply_interior_operator(w[static_cast<std::size_t>(i)], mask, hx, hy);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double hij =
                0.5 * (dot(w[static_cast<std::size_t>(i)], aw[static_cast<std::size_t>(j)]) +
                       dot(w[static_cast<std::size_t>(j)], aw[static_cast<std::size_t>(i)]));
            st.projected[static_cast<std::size_t>(i) * k + j] = hij;
            st.projected[static_cast<std::size_t>(j) * k + i] = hij;
        }
    }
    return st;
}

SmallEigen jacobi_eigen(std::vector<double> a, int k) {
    SmallEigen out;
    out.values.assign(static_cast<std::size_t>(k), 0.0);
    out.vectors.assign(static_cast<std::size_t>(k) * k, 0.0);
    for (int i = 0; i < k; ++i) out.vectors[static_cast<std::size_t>(i) * k + i] = 1.0;
    if (k == 0) return out;
    auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * k + j]; };
    auto vt = [&](int i, int j) -> double& {
        return out.vectors[static_cast<std::size_t>(i) * k + j];
    };
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < k; ++p)
            for (int q = p + 1; q < k; ++q) off += at(p, q) * at(p, q);
        if (std::sqrt(off) <= 1e-15 * std::max(1.0, std::sqrt(std::abs(dot(a, a)))))
            break;
        for (int p = 0; p < k - 1; ++p) {
            for (int q = p + 1; q < k; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double sgn = theta >= 0.0 ? 1.0 : -1.0;
                const double tt = sgn / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(tt * tt + 1.0);
                const double s = tt * c;
                for (int i = 0; i < k; ++i) {
                    const double aip = at(i, p), aiq = at(i, q);
                    at(i, p) = c * aip - s * aiq;
                    at(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < k; ++i) {
                    const double api = at(p, i), aqi = at(q, i);
                    at(p, i) = c * api - s * aqi;
                    at(q, i) = s * api + c * aqi;
                }
                for (int i = 0; i < k; ++i) {
                    const double vip = vt(i, p), viq = vt(i, q);
                    vt(i, p) = c * vip - s * viq;
                    vt(i, q) = s * vip + c * viq;
                }
            }
        }
    }
    for (int i = 0; i < k; ++i) out.values[static_cast<std::size_t>(i)] = at(i, i);
    return out;
}

std::vector<double> phi1_action(const std::vector<double>& s, int k, double t) {
    const SmallEigen eig = jacobi_eigen(s, k);
    // y = Q diag(t phi1(t lambda)) Q^T e_1
    std::vector<double> y(static_cast<std::size_t>(k), 0.0);
    for (int j = 0; j < k; ++j) {
        const double qj0 = eig.vectors[static_cast<std::size_t>(0) * k + j];
        const double f = t * phi1(t * eig.values[static_cast<std::size_t>(j)]) * qj0;
        for (int i = 0; i < k; ++i)
            y[static_cast<std::size_t>(i)] += f * eig.vectors[static_cast<std::size_t>(i) * k + j];
    }
    return y;
}

PixelField assemble_approximation(const KrylovState& state, const PixelField& b,
                                  const InpaintMask& mask) {
    if (b.channels != 1)
        fail(ErrorCode::Invalid, "assemble_approximation: single-channel fields only");
    const int k = static_cast<int>(state.basis.size());
    const std::vector<double> coeff = phi1_action(state.projected, k, state.t);
    std::vector<double> interior(mask.interior_size(), 0.0);
    for (int j = 0; j < k; ++j)
        axpy(state.bsym_norm * coeff[static_cast<std::size_t>(j)],
             state.basis[static_cast<std::size_t>(j)], interior);
    PixelField out = b;  // stored pixels stay bit-identical to b
    auto plane = out.plane(0);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < plane.size(); ++i)
        if (!mask.bits[i]) plane[i] += interior[idx++];
    return out;
}

ArnoldiLikeResult arnoldi_like(const PixelField& b, const InpaintMask& mask,
                               int m, double gamma_scaled) {
    if (b.channels != 1)
        fail(ErrorCode::Invalid, "arnoldi_like: single-channel fields only");
    if (mask.pixels() > kDenseCap)
        fail(ErrorCode::Invalid, "arnoldi_like: dense route capped at 4096 pixels");
    const std::size_t n = static_cast<std::size_t>(mask.pixels());
    const std::vector<double> a = materialize_heat_operator(mask, b.hx, b.hy);
    std::vector<double> shifted(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            shifted[i * n + j] = (i == j ? gamma_scaled : 0.0) - a[i * n + j];

    ArnoldiLikeResult out;
    std::vector<std::vector<double>>& v = out.basis;
    const auto b0 = b.plane(0);
    std::vector<double> v1(b0.begin(), b0.end());
    const double bn = norm2(v1);
    if (bn == 0.0) fail(ErrorCode::Invalid, "arnoldi_like: b is zero");
    for (double& x : v1) x /= bn;
    v.push_back(std::move(v1));

    for (int step = 1; step < m; ++step) {
        std::vector<double> cand(n, 0.0);
        if (step == 1) {
            for (std::size_t i = 0; i < n; ++i)
                cand[i] = dot({a.data() + i * n, n}, v[0]);
        } else {
            // the resolvent chain starts from v_1, then continues from the
            // most recent vector
            const std::vector<double>& src = (step == 2) ? v[0] : v.back();
            cand = lu_solve(shifted, static_cast<int>(n),
                            std::vector<double>(src.begin(), src.end()));
        }
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& vi : v) axpy(-dot(cand, vi), vi, cand);
        const double nn = norm2(cand);
        if (nn <= 1e-14) break;
        for (double& x : cand) x /= nn;
        v.push_back(std::move(cand));
    }

    const int k = static_cast<int>(v.size());
    out.projected.assign(static_cast<std::size_t>(k) * k, 0.0);
    for (int j = 0; j < k; ++j) {
        std::vector<double> av(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            av[i] = dot({a.data() + i * n, n}, v[static_cast<std::size_t>(j)]);
        for (int i = 0; i < k; ++i)
            out.projected[static_cast<std::size_t>(i) * k + j] =
                dot(v[static_cast<std::size_t>(i)], av);
    }
    return out;
}

PixelField decode_field(const PixelField& b, const InpaintMask& mask, double t,
                        int m, const MultigridConfig& mg, DecodeInfo* info) {
    if (b.width != mask.width || b.height != mask.height)
        fail(ErrorCode::Invalid, "decode: field/mask dimension mismatch");
    if (t <= 0.0) fail(ErrorCode::Invalid, "decode: t must be > 0");
    if (m < 2 || m > 22)
        fail(ErrorCode::Invalid, "decode: subspace dimension m must lie in 2..22");
    if (mask.count() == 0)
        fail(ErrorCode::Invalid, "decode: empty inpainting mask");

    const double gamma = choose_shift(m, t);
    if (info) {
        info->gamma_scaled = gamma;
        info->solves_per_channel = 0;
        info->total_solves = 0;
    }
    if (mask.interior_size() == 0) return b;  // everything stored

    const MultigridSolver solver(mask, b.hx, b.hy, mg);

    auto decode_channel = [&](int ch, int* solves) {
        const auto plane = b.plane(ch);
        std::vector<double> bsym = interior_forcing(plane, mask, b.hx, b.hy);
        if (norm2(bsym) == 0.0) {
            // A b = 0: the exact solution is b itself at every t.
            return std::vector<double>(plane.begin(), plane.end());
        }
        InteriorSolver mg_solve = [&, solves](std::span<const double> rhs) {
            std::vector<double> full(static_cast<std::size_t>(mask.pixels()), 0.0);
            embed_from_interior_plane(rhs, full, mask);
            MultigridSolver::Result r = solver.solve(full, gamma);
            if (solves) ++*solves;
            return restrict_to_interior(r.x, mask);
        };
        PixelField chan(b.width, b.height, 1);
        chan.hx = b.hx;
        chan.hy = b.hy;
        std::copy(plane.begin(), plane.end(), chan.values.begin());
        const KrylovState st =
            symmetric_arnoldi(mask, b.hx, b.hy, bsym, m, t, gamma, mg_solve);
        PixelField rec = assemble_approximation(st, chan, mask);
        return std::move(rec.values);
    };

    PixelField out = b;
    std::vector<int> solves(static_cast<std::size_t>(b.channels), 0);
    std::vector<std::future<std::vector<double>>> jobs;
    for (int ch = 0; ch < b.channels; ++ch)
        jobs.push_back(std::async(std::launch::async, decode_channel, ch,
                                  &solves[static_cast<std::size_t>(ch)]));
    for (int ch = 0; ch < b.channels; ++ch) {
        const std::vector<double> plane = jobs[static_cast<std::size_t>(ch)].get();
        std::copy(plane.begin(), plane.end(),
                  out.values.begin() + static_cast<std::size_t>(ch) * b.pixels());
    }
    if (info) {
        info->solves_per_channel = solves[0];
        for (int s : solves) info->total_solves += s;
    }
    return out;
}

}  // namespace ekd
