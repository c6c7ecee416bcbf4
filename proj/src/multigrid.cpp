#include "multigrid.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "dense.hpp"
#include "error.hpp"
#include "heat_operator.hpp"

namespace ekd {

namespace {

int coarse_size(int n) { return (n + 1) / 2; }

void check_ceiling(int fine, int coarse, const char* axis) {
    if (coarse != coarse_size(fine))
        fail(ErrorCode::Invalid,
             std::string("grid transfer: coarse dims must follow the ceiling rule (") +
                 axis + ")");
}

// 1-D overlap of fine cell f and coarse cell c, measured in units of
// 1/(nf*nc) of the axis so the weights are exact integers.
inline std::int64_t axis_overlap(std::int64_t f, std::int64_t c, std::int64_t nf,
                                 std::int64_t nc) {
    const std::int64_t lo = std::max(f * nc, c * nf);
    const std::int64_t hi = std::min((f + 1) * nc, (c + 1) * nf);
    return hi > lo ? hi - lo : 0;
}

// Area-weighted restriction of a plane; exact integer weights, one division.
void restrict_plane(std::span<const double> fine, int nfx, int nfy,
                    std::span<double> coarse, int ncx, int ncy) {
    const double inv = 1.0 / (static_cast<double>(nfx) * nfy);
    for (int cy = 0; cy < ncy; ++cy) {
        const int fy0 = static_cast<int>((static_cast<std::int64_t>(cy) * nfy) / ncy);
        const int fy1 = static_cast<int>(((static_cast<std::int64_t>(cy) + 1) * nfy + ncy - 1) / ncy);
        for (int cx = 0; cx < ncx; ++cx) {
            const int fx0 = static_cast<int>((static_cast<std::int64_t>(cx) * nfx) / ncx);
            const int fx1 = static_cast<int>(((static_cast<std::int64_t>(cx) + 1) * nfx + ncx - 1) / ncx);
            double acc = 0.0;
            for (int fy = fy0; fy < fy1; ++fy) {
                const std::int64_t wy = axis_overlap(fy, cy, nfy, ncy);
                if (wy == 0) continue;
                for (int fx = fx0; fx < fx1; ++fx) {
                    const std::int64_t wx = axis_overlap(fx, cx, nfx, ncx);
                    if (wx == 0) continue;
                    acc += static_cast<double>(wx * wy) *
                           fine[static_cast<std::size_t>(fy) * nfx + fx];
                }
            }
            coarse[static_cast<std::size_t>(cy) * ncx + cx] = acc * inv;
        }
    }
}

void prolong_plane(std::span<const double> coarse, int ncx, int ncy,
                   std::span<double> fine, int nfx, int nfy) {
    const double inv = 1.0 / (static_cast<double>(ncx) * ncy);
    for (int fy = 0; fy < nfy; ++fy) {
        const int cy0 = static_cast<int>((static_cast<std::int64_t>(fy) * ncy) / nfy);
        const int cy1 = static_cast<int>(((static_cast<std::int64_t>(fy) + 1) * ncy + nfy - 1) / nfy);
        for (int fx = 0; fx < nfx; ++fx) {
            const int cx0 = static_cast<int>((static_cast<std::int64_t>(fx) * ncx) / nfx);
            const int cx1 = static_cast<int>(((static_cast<std::int64_t>(fx) + 1) * ncx + nfx - 1) / nfx);
            double acc = 0.0;
            for (int cy = cy0; cy < cy1; ++cy) {
                const std::int64_t wy = axis_overlap(fy, cy, nfy, ncy);
                if (wy == 0) continue;
                for (int cx = cx0; cx < cx1; ++cx) {
                    const std::int64_t wx = axis_overlap(fx, cx, nfx, ncx);
                    if (wx == 0) continue;
                    acc += static_cast<double>(wx * wy) *
                           coarse[static_cast<std::size_t>(cy) * ncx + cx];
                }
            }
            fine[static_cast<std::size_t>(fy) * nfx + fx] = acc * inv;
        }
    }
}

}  // namespace

PixelField restrict_field(const PixelField& fine, int coarse_nx, int coarse_ny) {
    check_ceiling(fine.width, coarse_nx, "x");
    check_ceiling(fine.height, coarse_ny, "y");
    PixelField coarse(coarse_nx, coarse_ny, 1);
    coarse.hx = fine.hx * fine.width / coarse_nx;
    coarse.hy = fine.hy * fine.height / coarse_ny;
    restrict_plane(fine.plane(0), fine.width, fine.height, coarse.plane(0),
                   coarse_nx, coarse_ny);
    return coarse;
}

PixelField prolong_field(const PixelField& coarse, int fine_nx, int fine_ny) {
    check_ceiling(fine_nx, coarse.width, "x");
    check_ceiling(fine_ny, coarse.height, "y");
    PixelField fine(fine_nx, fine_ny, 1);
    fine.hx = coarse.hx * coarse.width / fine_nx;
    fine.hy = coarse.hy * coarse.height / fine_ny;
    prolong_plane(coarse.plane(0), coarse.width, coarse.height, fine.plane(0),
                  fine_nx, fine_ny);
    return fine;
}

InpaintMask coarsen_mask(const InpaintMask& fine, double eps) {
    const int ncx = coarse_size(fine.width), ncy = coarse_size(fine.height);
    std::vector<double> fbits(fine.bits.begin(), fine.bits.end());
    std::vector<double> cbits(static_cast<std::size_t>(ncx) * ncy);
    restrict_plane(fbits, fine.width, fine.height, cbits, ncx, ncy);
    InpaintMask coarse(ncx, ncy);
    for (std::size_t i = 0; i < cbits.size(); ++i)
        coarse.bits[i] = cbits[i] > eps ? 1 : 0;
    return coarse;
}

PixelField restrict_residual(const PixelField& fine_res,
                             const InpaintMask& coarse_mask) {
    PixelField coarse = restrict_field(fine_res, coarse_mask.width, coarse_mask.height);
    auto plane = coarse.plane(0);
    for (std::size_t i = 0; i < plane.size(); ++i)
        if (coarse_mask.bits[i]) plane[i] = 0.0;
    return coarse;
}

PixelField restrict_rhs(const PixelField& fine_rhs, const InpaintMask& fine_mask,
                        double eps) {
    if (fine_rhs.width != fine_mask.width || fine_rhs.height != fine_mask.height)
        fail(ErrorCode::Invalid, "restrict_rhs: rhs/mask dimension mismatch");
    const int ncx = coarse_size(fine_mask.width), ncy = coarse_size(fine_mask.height);
    PixelField masked(fine_rhs.width, fine_rhs.height, 1);
    for (int i = 0; i < fine_rhs.pixels(); ++i)
        masked.values[i] = fine_mask.bits[i] ? fine_rhs.values[i] : 0.0;
    std::vector<double> num(static_cast<std::size_t>(ncx) * ncy);
    std::vector<double> den(num.size());
    std::vector<double> fbits(fine_mask.bits.begin(), fine_mask.bits.end());
    restrict_plane(masked.plane(0), fine_rhs.width, fine_rhs.height, num, ncx, ncy);
    restrict_plane(fbits, fine_mask.width, fine_mask.height, den, ncx, ncy);
    PixelField coarse(ncx, ncy, 1);
    coarse.hx = fine_rhs.hx * fine_rhs.width / ncx;
    coarse.hy = fine_rhs.hy * fine_rhs.height / ncy;
    for (std::size_t i = 0; i < num.size(); ++i)
        coarse.values[i] = den[i] > eps ? num[i] / den[i] : 0.0;
    return coarse;
}

GridHierarchy::GridHierarchy(const InpaintMask& fine_mask, double hx, double hy,
                             const MultigridConfig& cfg) {
    if (cfg.levels < 1) fail(ErrorCode::Invalid, "multigrid: levels must be >= 1");
    GridLevel finest;
    finest.nx = fine_mask.width;
    finest.ny = fine_mask.height;
    finest.hx = hx;
    finest.hy = hy;
    finest.mask = fine_mask;
    finest.unknowns = fine_mask.interior_size();
    levels_.push_back(std::move(finest));

    auto try_coarsen = [&]() -> bool {
        const GridLevel& prev = levels_.back();
        if (prev.nx == 1 && prev.ny == 1) return false;
        GridLevel next;
        next.nx = coarse_size(prev.nx);
        next.ny = coarse_size(prev.ny);
        next.hx = prev.hx * prev.nx / next.nx;
        next.hy = prev.hy * prev.ny / next.ny;
        next.mask = coarsen_mask(prev.mask, cfg.eps_mask);
        next.unknowns = next.mask.interior_size();
        // A level without stored pixels (lost mask) or without unknowns adds
        // nothing; keep the previous level as the coarsest instead.
        if (next.mask.count() == 0 && prev.mask.count() > 0) return false;
        if (next.unknowns == 0 && prev.unknowns > 0) return false;
        levels_.push_back(std::move(next));
        return true;
    };

    while (depth() < cfg.levels) {
        if (!try_coarsen()) break;
    }
    while (levels_.back().unknowns > static_cast<std::size_t>(cfg.coarsest_max_pixels)) {
        if (!try_coarsen()) break;
    }
}

struct MultigridSolver::Workspace {
    std::optional<CholeskyFactor> coarsest;
    double gamma = 0.0;
};

MultigridSolver::MultigridSolver(const InpaintMask& mask, double hx, double hy,
                                 MultigridConfig cfg)
    : cfg_(cfg), hierarchy_(mask, hx, hy, cfg) {}

void MultigridSolver::relax(int li, std::span<double> x, std::span<const double> rhs,
                            double gamma, int sweeps) const {
    const GridLevel& lv = hierarchy_.level(li);
    const int w = lv.nx, h = lv.ny;
    const double ihx2 = 1.0 / (lv.hx * lv.hx), ihy2 = 1.0 / (lv.hy * lv.hy);
    for (int s = 0; s < sweeps; ++s) {
        for (int color = 0; color < 2; ++color) {
            for (int y = 0; y < h; ++y) {
                for (int x0 = (y + color) & 1; x0 < w; x0 += 2) {
                    const std::size_t i = static_cast<std::size_t>(y) * w + x0;
                    if (lv.mask.bits[i]) continue;
                    double diag = gamma;
                    double acc = rhs[i];
                    if (x0 > 0) { diag += ihx2; acc += ihx2 * x[i - 1]; }
                    if (x0 + 1 < w) { diag += ihx2; acc += ihx2 * x[i + 1]; }
                    if (y > 0) { diag += ihy2; acc += ihy2 * x[i - w]; }
                    if (y + 1 < h) { diag += ihy2; acc += ihy2 * x[i + w]; }
                    x[i] = acc / diag;
                }
            }
        }
    }
}

double MultigridSolver::residual_norm(int li, std::span<const double> x,
                                      std::span<const double> rhs,
                                      double gamma) const {
    const GridLevel& lv = hierarchy_.level(li);
    std::vector<double> ax(x.size());
    apply_heat_operator_plane(x, ax, lv.mask, lv.hx, lv.hy);
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (lv.mask.bits[i]) continue;
        const double r = rhs[i] - (gamma * x[i] - ax[i]);
        acc += r * r;
    }
    return std::sqrt(acc);
}

std::vector<double> MultigridSolver::coarsest_direct_solve(
    const std::vector<double>& rhs, Workspace& ws) const {
    const GridLevel& lv = hierarchy_.level(hierarchy_.depth() - 1);
    std::vector<double> x(rhs.size(), 0.0);
    if (lv.unknowns == 0) return x;
    if (!ws.coarsest) {
        // Assemble gamma*I - A_sym at the coarsest level and factor it once
        // per solve; the factor is reused at every visit of the cycle.
        const std::size_t m = lv.unknowns;
        std::vector<std::ptrdiff_t> idx(rhs.size(), -1);
        std::ptrdiff_t k = 0;
        for (std::size_t i = 0; i < rhs.size(); ++i)
            if (!lv.mask.bits[i]) idx[i] = k++;
        const double ihx2 = 1.0 / (lv.hx * lv.hx), ihy2 = 1.0 / (lv.hy * lv.hy);
        std::vector<double> b(m * m, 0.0);
        for (int y = 0; y < lv.ny; ++y) {
            for (int x0 = 0; x0 < lv.nx; ++x0) {
                const std::size_t i = static_cast<std::size_t>(y) * lv.nx + x0;
                if (lv.mask.bits[i]) continue;
                const std::size_t r = static_cast<std::size_t>(idx[i]);
                double diag = ws.gamma;
                auto couple = [&](std::size_t j, double coef) {
                    diag += coef;
                    if (idx[j] >= 0)
                        b[r * m + static_cast<std::size_t>(idx[j])] = -coef;
                };
                if (x0 > 0) couple(i - 1, ihx2);
                if (x0 + 1 < lv.nx) couple(i + 1, ihx2);
                if (y > 0) couple(i - lv.nx, ihy2);
                if (y + 1 < lv.ny) couple(i + lv.nx, ihy2);
                b[r * m + r] = diag;
            }
        }
        ws.coarsest = CholeskyFactor::compute(std::move(b), static_cast<int>(m));
    }
    std::vector<double> ri;
    ri.reserve(lv.unknowns);
    for (std::size_t i = 0; i < rhs.size(); ++i)
        if (!lv.mask.bits[i]) ri.push_back(rhs[i]);
    const std::vector<double> xi = ws.coarsest->solve(std::move(ri));
    std::size_t k = 0;
    for (std::size_t i = 0; i < rhs.size(); ++i)
        if (!lv.mask.bits[i]) x[i] = xi[k++];
    return x;
}

void MultigridSolver::mu_cycle(int li, std::vector<double>& x,
                               const std::vector<double>& rhs, double gamma,
                               Workspace& ws) const {
    if (li == hierarchy_.depth() - 1) {
        x = coarsest_direct_solve(rhs, ws);
        return;
    }
    const GridLevel& lv = hierarchy_.level(li);
    const GridLevel& cl = hierarchy_.level(li + 1);

    relax(li, x, rhs, gamma, cfg_.nu1);

    // coarse residual, zeroed at coarse stored pixels
    std::vector<double> ax(x.size());
    apply_heat_operator_plane(x, ax, lv.mask, lv.hx, lv.hy);
    std::vector<double> res(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!lv.mask.bits[i]) res[i] = rhs[i] - (gamma * x[i] - ax[i]);
    std::vector<double> cres(static_cast<std::size_t>(cl.nx) * cl.ny);
    restrict_plane(res, lv.nx, lv.ny, cres, cl.nx, cl.ny);
    for (std::size_t i = 0; i < cres.size(); ++i)
        if (cl.mask.bits[i]) cres[i] = 0.0;

    std::vector<double> cx(cres.size(), 0.0);
    for (int rep = 0; rep < cfg_.mu; ++rep) mu_cycle(li + 1, cx, cres, gamma, ws);

    std::vector<double> corr(x.size());
    prolong_plane(cx, cl.nx, cl.ny, corr, lv.nx, lv.ny);
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!lv.mask.bits[i]) x[i] += corr[i];

    relax(li, x, rhs, gamma, cfg_.nu2);
}

std::vector<double> MultigridSolver::nested_iteration(int li,
                                                      const std::vector<double>& rhs,
                                                      double gamma,
                                                      Workspace& ws) const {
    if (li == hierarchy_.depth() - 1) return coarsest_direct_solve(rhs, ws);
    const GridLevel& lv = hierarchy_.level(li);
    const GridLevel& cl = hierarchy_.level(li + 1);

    PixelField rhs_field(lv.nx, lv.ny, 1);
    rhs_field.hx = lv.hx;
    rhs_field.hy = lv.hy;
    std::copy(rhs.begin(), rhs.end(), rhs_field.values.begin());
    const PixelField crhs_field = restrict_rhs(rhs_field, lv.mask, cfg_.eps_mask);
    std::vector<double> crhs(crhs_field.values);

    const std::vector<double> cx = nested_iteration(li + 1, crhs, gamma, ws);

    std::vector<double> x(rhs.size());
    prolong_plane(cx, cl.nx, cl.ny, x, lv.nx, lv.ny);
    for (std::size_t i = 0; i < x.size(); ++i)
        if (lv.mask.bits[i]) x[i] = 0.0;
    for (int rep = 0; rep < cfg_.nu0; ++rep) mu_cycle(li, x, rhs, gamma, ws);
    return x;
}

MultigridSolver::Result MultigridSolver::solve(std::span<const double> rhs,
                                               double gamma) const {
    const GridLevel& lv = hierarchy_.level(0);
    if (rhs.size() != static_cast<std::size_t>(lv.nx) * lv.ny)
        fail(ErrorCode::Invalid, "multigrid solve: rhs dimension mismatch");
    if (gamma < 0.0) fail(ErrorCode::Invalid, "multigrid solve: gamma must be >= 0");

    Result out;
    std::vector<double> b(rhs.begin(), rhs.end());
    for (std::size_t i = 0; i < b.size(); ++i)
        if (lv.mask.bits[i]) b[i] = 0.0;
    double bnorm = 0.0;
    for (double v : b) bnorm += v * v;
    bnorm = std::sqrt(bnorm);
    if (bnorm == 0.0 || lv.unknowns == 0) {
        out.x.assign(b.size(), 0.0);
        return out;
    }

    Workspace ws;
    ws.gamma = gamma;
    std::vector<double> x = nested_iteration(0, b, gamma, ws);

    double rel = residual_norm(0, x, b, gamma) / bnorm;
    if (rel <= cfg_.tolerance) out.cycles_to_tolerance = 0;
    for (int cycle = 0; cycle < cfg_.cycles; ++cycle) {
        if (cfg_.early_exit && rel <= cfg_.tolerance) break;
        mu_cycle(0, x, b, gamma, ws);
        rel = residual_norm(0, x, b, gamma) / bnorm;
        ++out.cycles_used;
        out.residual_history.push_back(rel);
        if (out.cycles_to_tolerance < 0 && rel <= cfg_.tolerance)
            out.cycles_to_tolerance = out.cycles_used;
    }
    out.rel_residual = rel;
    out.x = std::move(x);
    if (rel > cfg_.tolerance)
        fail(ErrorCode::Solver,
             "multigrid: cycle budget exhausted, relative residual " +
                 std::to_string(rel));
    return out;
}

}  // namespace ekd
