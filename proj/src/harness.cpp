#include "harness.hpp"

#include <chrono>
#include <cmath>

#include "heat_operator.hpp"
#include "krylov.hpp"
#include "reference.hpp"

namespace ekd {

namespace {

double rel_error(const PixelField& approx, const PixelField& exact) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < exact.values.size(); ++i) {
        const double d = approx.values[i] - exact.values[i];
        num += d * d;
        den += exact.values[i] * exact.values[i];
    }
    return std::sqrt(num) / std::sqrt(den);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

}  // namespace

std::vector<BenchResult> run_bench(const BenchOptions& opt, std::ostream& csv) {
    const auto [b, mask] = frame_problem(opt.frame_size);
    std::vector<BenchResult> rows;
    csv << "method,t,n_solves,rel_error,wall_time_s\n";
    auto emit = [&](const BenchResult& r) {
        csv << r.method << ',' << r.t << ',' << r.n_solves << ',' << r.rel_error
            << ',' << r.wall_time_s << '\n';
        rows.push_back(r);
    };
    for (double t : opt.t_values) {
        const PixelField exact = frame_oracle_expm(b, t);
        for (int n : opt.solve_counts) {
            // Krylov: n solves corresponds to dimension m = n + 2
            if (n + 2 <= 22) {
                const auto t0 = std::chrono::steady_clock::now();
                const PixelField f = decode_field(b, mask, t, n + 2, opt.mg);
                emit({"krylov", t, n, rel_error(f, exact), seconds_since(t0)});
            }
            {
                const auto t0 = std::chrono::steady_clock::now();
                const PixelField f = implicit_euler(b, mask, t, n, opt.mg);
                emit({"implicit_euler", t, n, rel_error(f, exact), seconds_since(t0)});
            }
            {
                const auto t0 = std::chrono::steady_clock::now();
                const PixelField f = crank_nicolson(b, mask, t, n, opt.mg);
                emit({"crank_nicolson", t, n, rel_error(f, exact), seconds_since(t0)});
            }
        }
    }
    return rows;
}

std::vector<BoundCheckRow> run_bound_check(const BoundCheckOptions& opt,
                                           std::ostream& csv) {
    const auto [b, mask] = frame_problem(opt.frame_size);
    std::vector<BoundCheckRow> rows;
    csv << "m,t,n_solves,measured_error,bound,pass\n";
    for (double t : opt.t_values) {
        const PixelField exact = opt.structured_oracle
                                     ? frame_oracle_expm(b, t)
                                     : dense_oracle_expm(b, mask, t);
        for (int m = opt.m_min; m <= opt.m_max; ++m) {
            const PixelField f = decode_field(b, mask, t, m, opt.mg);
            double err = 0.0;
            for (std::size_t i = 0; i < exact.values.size(); ++i) {
                const double d = f.values[i] - exact.values[i];
                err += d * d;
            }
            err = std::sqrt(err);
            std::vector<double> bsym = interior_forcing(b.plane(0), mask, b.hx, b.hy);
            double bs = 0.0;
            for (double v : bsym) bs += v * v;
            BoundCheckRow row;
            row.m = m;
            row.t = t;
            row.n_solves = m - 2;
            row.measured_error = err;
            row.bound = error_bound(m, t, std::sqrt(bs));
            row.pass = err <= row.bound;
            csv << row.m << ',' << row.t << ',' << row.n_solves << ','
                << row.measured_error << ',' << row.bound << ','
                << (row.pass ? "true" : "false") << '\n';
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace ekd
