#ifndef EKD_MULTIGRID_HPP
#define EKD_MULTIGRID_HPP

#include <span>
#include <vector>

#include "field.hpp"

namespace ekd {

struct MultigridConfig {
    int mu = 2;        // cycle index; 1 = V-cycle, 2 = W-cycle
    int nu0 = 1;       // cycles per level during nested iteration
    int nu1 = 4;       // pre-relaxation sweeps
    int nu2 = 4;       // post-relaxation sweeps
    int levels = 7;    // requested depth; clamped to what the grid admits
    double eps_mask = 1e-3;        // mask-coarsening tolerance
    int cycles = 50;               // mu-cycle budget after nested iteration
    double tolerance = 1e-9;       // relative-residual target
    bool early_exit = true;        // stop cycling once the target is met
    int coarsest_max_pixels = 4096;  // direct-solver cap (unknowns)
};

// Grid transfer operators. Fields are single-channel; the coarse grid has
// ceil(n/2) pixels per direction and cells are matched by area overlap, so
// the restriction is the area-weighted average and the prolongation its
// scaled transpose.
PixelField restrict_field(const PixelField& fine, int coarse_nx, int coarse_ny);
PixelField prolong_field(const PixelField& coarse, int fine_nx, int fine_ny);

// Coarse mask bit = 1 iff the restricted mask value exceeds eps.
InpaintMask coarsen_mask(const InpaintMask& fine, double eps);

// r_H = (1 - c_H) o (I_h^H r_h): restrict, then zero at coarse stored pixels.
PixelField restrict_residual(const PixelField& fine_res,
                             const InpaintMask& coarse_mask);

// b_H = (I_h^H (c_h o b_h)) ./ (I_h^H c_h), divisions by (thresholded) zero
// give zero. Keeps stored-pixel data at full intensity on coarse grids.
PixelField restrict_rhs(const PixelField& fine_rhs, const InpaintMask& fine_mask,
                        double eps);

struct GridLevel {
    int nx = 0, ny = 0;
    double hx = 1.0, hy = 1.0;
    InpaintMask mask;
    std::size_t unknowns = 0;
};

// The ladder of coarsened masks and spacings. Level 0 is the finest grid;
// coarsening stops early if the requested depth would run out of pixels or
// lose the mask entirely, and goes deeper than requested while the coarsest
// level exceeds the direct-solver cap.
class GridHierarchy {
  public:
    GridHierarchy(const InpaintMask& fine_mask, double hx, double hy,
                  const MultigridConfig& cfg);

    int depth() const { return static_cast<int>(levels_.size()); }
    const GridLevel& level(int i) const { return levels_[static_cast<std::size_t>(i)]; }

  private:
    std::vector<GridLevel> levels_;
};

// Full multigrid for (gamma I - A_sym) x = rhs, gamma >= 0. Vectors are full
// planes with zeros pinned at stored pixels (which realizes the homogeneous
// Dirichlet coupling of A_sym without index mapping).
class MultigridSolver {
  public:
    MultigridSolver(const InpaintMask& mask, double hx, double hy,
                    MultigridConfig cfg);

    struct Result {
        std::vector<double> x;
        double rel_residual = 0.0;
        int cycles_used = 0;             // mu-cycles after nested iteration
        int cycles_to_tolerance = -1;    // first cycle meeting the tolerance
        std::vector<double> residual_history;  // relative residual per cycle
    };

    // Throws Error(Solver) if the cycle budget ends above the tolerance.
    Result solve(std::span<const double> rhs, double gamma) const;

    // Red-black Gauss-Seidel sweeps at one level of the hierarchy, exposed for
    // tests. x and rhs are full planes of the level's dimensions.
    void relax(int level, std::span<double> x, std::span<const double> rhs,
               double gamma, int sweeps) const;

    const GridHierarchy& hierarchy() const { return hierarchy_; }
    const MultigridConfig& config() const { return cfg_; }

  private:
    struct Workspace;

    void mu_cycle(int level, std::vector<double>& x, const std::vector<double>& rhs,
                  double gamma, Workspace& ws) const;
    std::vector<double> nested_iteration(int level, const std::vector<double>& rhs,
                                         double gamma, Workspace& ws) const;
    std::vector<double> coarsest_direct_solve(const std::vector<double>& rhs,
                                              Workspace& ws) const;
    double residual_norm(int level, std::span<const double> x,
                         std::span<const double> rhs, double gamma) const;

    MultigridConfig cfg_;
    GridHierarchy hierarchy_;
};

}  // namespace ekd

#endif
