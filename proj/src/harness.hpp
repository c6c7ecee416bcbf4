#ifndef EKD_HARNESS_HPP
#define EKD_HARNESS_HPP

#include <ostream>
#include <string>
#include <vector>

#include "multigrid.hpp"

namespace ekd {

struct BenchResult {
    std::string method;
    double t = 0.0;
    int n_solves = 0;
    double rel_error = 0.0;
    double wall_time_s = 0.0;
};

struct BenchOptions {
    int frame_size = 64;
    std::vector<double> t_values{10.0, 1e2, 1e3, 1e4};
    std::vector<int> solve_counts{1, 2, 4, 8, 16, 32, 64, 100, 256, 1000};
    MultigridConfig mg;
};

// Krylov vs implicit Euler vs Crank-Nicolson on the all-white frame problem.
// Errors are Euclidean, relative, against the structured exact solution.
// CSV columns: method,t,n_solves,rel_error,wall_time_s.
std::vector<BenchResult> run_bench(const BenchOptions& opt, std::ostream& csv);

struct BoundCheckRow {
    int m = 0;
    double t = 0.0;
    int n_solves = 0;
    double measured_error = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct BoundCheckOptions {
    int frame_size = 64;
    std::vector<double> t_values{25.0, 1e3, 1e5};
    int m_min = 3;
    int m_max = 10;
    MultigridConfig mg;
    bool structured_oracle = true;  // tensor sine basis; false = LAPACK route
};

// Measured Krylov error vs the a-priori bound 2 t E_m ||b_sym|| on the frame
// problem. CSV columns: m,t,n_solves,measured_error,bound,pass.
std::vector<BoundCheckRow> run_bound_check(const BoundCheckOptions& opt,
                                           std::ostream& csv);

}  // namespace ekd

#endif
