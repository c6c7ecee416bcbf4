#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dense.hpp"
#include "error.hpp"
#include "heat_operator.hpp"
#include "krylov.hpp"
#include "oracles.hpp"
#include "reference.hpp"

using namespace ekd;
namespace tst = ekd::testing;

namespace {

InpaintMask example_mask() {
    InpaintMask mask(3, 2);
    mask.set(0, 2, true);
    mask.set(1, 1, true);
    return mask;
}

PixelField example_b() {
    PixelField b(3, 2, 1);
    b.at(0, 0, 2) = 1.0;
    b.at(0, 1, 1) = 1.0;
    return b;
}

// exact interior solver (gamma I - A_sym)^{-1} by dense factorization
InteriorSolver dense_solver(const InpaintMask& mask, double gamma) {
    const std::size_t k = mask.interior_size();
    std::vector<double> a = materialize_interior_operator(mask, 1.0, 1.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) a[i * k + j] = -a[i * k + j];
        a[i * k + i] += gamma;
    }
    return [a, k](std::span<const double> rhs) {
        return spd_solve(a, static_cast<int>(k),
                         std::vector<double>(rhs.begin(), rhs.end()));
    };
}

}  // namespace

TEST_CASE("gamma table") {
    SUBCASE("anchor rows") {
        CHECK(gamma_table_row(3).solves == 1);
        CHECK(gamma_table_row(3).minimax_error == doctest::Approx(2.6e-2));
        CHECK(gamma_table_row(3).gamma_opt == doctest::Approx(1.5));
        CHECK(gamma_table_row(10).solves == 8);
        CHECK(gamma_table_row(10).minimax_error == doctest::Approx(1.0e-5));
        CHECK(gamma_table_row(10).gamma_opt == doctest::Approx(6.5));
        CHECK(gamma_table_row(22).minimax_error == doctest::Approx(8.3e-11));
        CHECK(gamma_table_row(22).gamma_opt == doctest::Approx(16.0));
    }

    SUBCASE("solve counts and monotone error") {
        double prev = 1.0;
        for (int m = 3; m <= 22; ++m) {
            const GammaRow& row = gamma_table_row(m);
            CHECK(row.solves == m - 2);
            CHECK(row.minimax_error < prev);
            prev = row.minimax_error;
        }
    }

    SUBCASE("out-of-range dimensions are rejected") {
        CHECK_THROWS_AS(gamma_table_row(2), Error);
        CHECK_THROWS_AS(gamma_table_row(23), Error);
        CHECK_THROWS_AS(choose_shift(1, 1.0), Error);
        CHECK_THROWS_AS(choose_shift(23, 1.0), Error);
    }
}

TEST_CASE("shift selection") {
    CHECK(choose_shift(3, 1e7) == doctest::Approx(1.5e-7));
    CHECK(choose_shift(12, 1.0) == doctest::Approx(10.0));
    CHECK(choose_shift(2, 4.0) == doctest::Approx(1.5 / 4.0));  // borrows m = 3
    for (int m : {3, 7, 15}) {
        const double t = 37.5;
        CHECK(choose_shift(m, 2.0 * t) == doctest::Approx(choose_shift(m, t) / 2.0));
    }
}

TEST_CASE("error bound") {
    CHECK(error_bound(3, 2.0, 10.0) == doctest::Approx(2.0 * 2.0 * 2.6e-2 * 10.0));
    CHECK(error_bound(10, 5.0, 3.0) == doctest::Approx(2.0 * 5.0 * 1.0e-5 * 3.0));
    CHECK(error_bound(7, 123.0, 0.0) == 0.0);
}

TEST_CASE("symmetric Arnoldi") {
    const InpaintMask mask = example_mask();
    const PixelField b = example_b();
    const std::vector<double> bsym = interior_forcing(b, mask);

    SUBCASE("m = 2 is the normalized start vector, no solves") {
        int solves = 0;
        InteriorSolver counting = [&](std::span<const double> rhs) {
            ++solves;
            return std::vector<double>(rhs.begin(), rhs.end());
        };
        const KrylovState st =
            symmetric_arnoldi(mask, 1.0, 1.0, bsym, 2, 1.0, 0.5, counting);
        CHECK(solves == 0);
        REQUIRE(st.basis.size() == 1);
        const double nb = tst::norm2(bsym);
        for (std::size_t i = 0; i < bsym.size(); ++i)
            CHECK(st.basis[0][i] == doctest::Approx(bsym[i] / nb));
        // S~ is the Rayleigh quotient of A_sym at w_1
        const std::vector<double> aw = apply_interior_operator(st.basis[0], mask, 1.0, 1.0);
        CHECK(st.projected[0] == doctest::Approx(tst::dot(st.basis[0], aw)));
        CHECK(st.projected[0] < 0.0);
    }

    SUBCASE("zero b_sym is rejected") {
        const std::vector<double> zero(4, 0.0);
        CHECK_THROWS_AS(
            symmetric_arnoldi(mask, 1.0, 1.0, zero, 3, 1.0, 0.5,
                              dense_solver(mask, 0.5)),
            Error);
    }

    SUBCASE("3x2 example, m = 3, exact solves: basis spans {b_sym, resolvent b_sym}") {
        const double gamma = 0.5;
        const InteriorSolver solver = dense_solver(mask, gamma);
        const KrylovState st =
            symmetric_arnoldi(mask, 1.0, 1.0, bsym, 3, 1.0, gamma, solver);
        REQUIRE(st.basis.size() == 2);

        std::vector<std::vector<double>> raw{bsym, solver(bsym)};
        const auto oracle = tst::gram_schmidt(std::move(raw));
        REQUIRE(oracle.size() == 2);
        CHECK(tst::max_principal_angle_sin(oracle, st.basis) <= 1e-12);
    }

    SUBCASE("random 8x8 instance: projections stay in the spectral interval") {
        std::mt19937 rng(77);
        const InpaintMask m8 = tst::random_mask(8, 8, 0.25, rng);
        PixelField bb(8, 8, 1);
        for (std::size_t i = 0; i < bb.values.size(); ++i)
            bb.values[i] = m8.bits[i] ? 40.0 + static_cast<double>(rng() % 216) : 0.0;
        const std::vector<double> bs = interior_forcing(bb, m8);
        const double gamma = 0.7;
        const KrylovState st =
            symmetric_arnoldi(m8, 1.0, 1.0, bs, 6, 1.0, gamma, dense_solver(m8, gamma));
        const int k = static_cast<int>(st.basis.size());

        // orthonormality
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                const double want = i == j ? 1.0 : 0.0;
                CHECK(std::fabs(tst::dot(st.basis[static_cast<std::size_t>(i)],
                                         st.basis[static_cast<std::size_t>(j)]) -
                                want) <= 1e-10);
            }

        // field-of-values containment
        const std::size_t ki = m8.interior_size();
        const SymEigen dense = sym_eigen(materialize_interior_operator(m8, 1.0, 1.0),
                                         static_cast<int>(ki));
        const SmallEigen small = jacobi_eigen(st.projected, k);
        for (double lam : small.values) {
            CHECK(lam < 0.0);
            CHECK(lam >= dense.values.front() - 1e-10);
            CHECK(lam <= dense.values.back() + 1e-10);
        }
    }

    SUBCASE("two-term recurrence agrees with full reorthogonalization on exact solves") {
        std::mt19937 rng(13);
        const InpaintMask m8 = tst::random_mask(9, 7, 0.3, rng);
        PixelField bb(9, 7, 1);
        for (std::size_t i = 0; i < bb.values.size(); ++i)
            bb.values[i] = m8.bits[i] ? 255.0 * (rng() % 100) / 99.0 : 0.0;
        const std::vector<double> bs = interior_forcing(bb, m8);
        const double gamma = 0.9;
        const auto full = symmetric_arnoldi(m8, 1.0, 1.0, bs, 6, 1.0, gamma,
                                            dense_solver(m8, gamma),
                                            Orthogonalization::Full);
        const auto two = symmetric_arnoldi(m8, 1.0, 1.0, bs, 6, 1.0, gamma,
                                           dense_solver(m8, gamma),
                                           Orthogonalization::TwoTerm);
        REQUIRE(full.basis.size() == two.basis.size());
        CHECK(tst::max_principal_angle_sin(full.basis, two.basis) <= 1e-8);
        for (std::size_t i = 0; i < full.projected.size(); ++i)
            CHECK(std::fabs(full.projected[i] - two.projected[i]) <= 1e-8);
    }
}

TEST_CASE("assembly of the Krylov approximation") {
    const InpaintMask mask = example_mask();
    const PixelField b = example_b();
    const std::vector<double> bsym = interior_forcing(b, mask);

    SUBCASE("t = 0 reproduces b exactly") {
        KrylovState st = symmetric_arnoldi(mask, 1.0, 1.0, bsym, 3, 1.0, 0.5,
                                           dense_solver(mask, 0.5));
        st.t = 0.0;
        const PixelField out = assemble_approximation(st, b, mask);
        for (std::size_t i = 0; i < b.values.size(); ++i)
            CHECK(out.values[i] == b.values[i]);
    }

    SUBCASE("full-dimensional subspace reproduces the dense exponential") {
        std::mt19937 rng(3);
        const InpaintMask m6 = tst::random_mask(4, 4, 0.4, rng);
        PixelField bb(4, 4, 1);
        for (std::size_t i = 0; i < bb.values.size(); ++i)
            bb.values[i] = m6.bits[i] ? 10.0 + static_cast<double>(rng() % 246) : 0.0;
        const std::vector<double> bs = interior_forcing(bb, m6);
        const double t = 2.5, gamma = choose_shift(22, t);
        // m = 22 with a tiny interior: the recurrence breaks down once the
        // space is invariant, and the approximation is exact from then on
        const KrylovState st = symmetric_arnoldi(m6, 1.0, 1.0, bs, 22, t, gamma,
                                                 dense_solver(m6, gamma));
        REQUIRE(st.basis.size() <= m6.interior_size());
        const PixelField got = assemble_approximation(st, bb, m6);
        const PixelField want = dense_oracle_expm(bb, m6, t);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < got.values.size(); ++i) {
            num += (got.values[i] - want.values[i]) * (got.values[i] - want.values[i]);
            den += want.values[i] * want.values[i];
        }
        CHECK(std::sqrt(num / den) <= 1e-10);
    }

    SUBCASE("3x2 example at t = 1e7 lands on the steady state") {
        const double t = 1e7;
        const double gamma = choose_shift(3, t);
        const KrylovState st = symmetric_arnoldi(mask, 1.0, 1.0, bsym, 3, t, gamma,
                                                 dense_solver(mask, gamma));
        const PixelField out = assemble_approximation(st, b, mask);

        // dense steady state: b + R^T(-A_sym^{-1} b_sym)
        const std::size_t k = mask.interior_size();
        std::vector<double> a = materialize_interior_operator(mask, 1.0, 1.0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) a[i * k + j] = -a[i * k + j];
        const std::vector<double> z = spd_solve(std::move(a), static_cast<int>(k), bsym);
        std::size_t c = 0;
        for (std::size_t i = 0; i < out.values.size(); ++i) {
            if (mask.bits[i]) continue;
            CHECK(out.values[i] > 0.0);
            CHECK(out.values[i] <= 1.0 + 1e-6);
            CHECK(std::fabs(out.values[i] - (b.values[i] + z[c])) <= 1e-6);
            ++c;
        }
    }

    SUBCASE("stored pixels are bit-identical to b") {
        const double t = 12.0, gamma = choose_shift(4, t);
        const KrylovState st = symmetric_arnoldi(mask, 1.0, 1.0, bsym, 4, t, gamma,
                                                 dense_solver(mask, gamma));
        const PixelField out = assemble_approximation(st, b, mask);
        CHECK(out.at(0, 0, 2) == b.at(0, 0, 2));
        CHECK(out.at(0, 1, 1) == b.at(0, 1, 1));
    }
}

TEST_CASE("Arnoldi-like algorithm on the full space") {
    std::mt19937 rng(55);
    const InpaintMask mask = tst::random_mask(7, 6, 0.3, rng);
    PixelField b(7, 6, 1);
    for (std::size_t i = 0; i < b.values.size(); ++i)
        b.values[i] = mask.bits[i] ? 30.0 + static_cast<double>(rng() % 226) : 0.0;
    const std::vector<double> bsym = interior_forcing(b, mask);
    const double gamma = 0.8;
    const int m = 6;
    const ArnoldiLikeResult ext = arnoldi_like(b, mask, m, gamma);
    REQUIRE(ext.basis.size() == static_cast<std::size_t>(m));

    SUBCASE("the leading entry of S_m vanishes") {
        CHECK(std::fabs(ext.projected[0]) <= 1e-12);
    }

    SUBCASE("first row is zero and u = (||b_sym||/||b||) e_1") {
        const int k = m;
        for (int j = 1; j < k; ++j)
            CHECK(std::fabs(ext.projected[static_cast<std::size_t>(j)]) <= 1e-10);
        const double ratio =
            tst::norm2(bsym) /
            tst::norm2(std::vector<double>(b.values.begin(), b.values.end()));
        CHECK(std::fabs(ext.projected[static_cast<std::size_t>(k)] - ratio) <= 1e-12);
        for (int i = 2; i < k; ++i)
            CHECK(std::fabs(ext.projected[static_cast<std::size_t>(i) * k]) <= 1e-10);
    }

    SUBCASE("column space equals span{v_1} + R^T columns of W") {
        const KrylovState sym = symmetric_arnoldi(mask, 1.0, 1.0, bsym, m, 1.0, gamma,
                                                  dense_solver(mask, gamma));
        std::vector<std::vector<double>> lifted;
        std::vector<double> v1(b.values.begin(), b.values.end());
        const double nb = tst::norm2(v1);
        for (double& v : v1) v /= nb;
        lifted.push_back(std::move(v1));
        for (const auto& w : sym.basis) {
            const PixelField e = embed_from_interior(w, mask);
            lifted.emplace_back(e.values.begin(), e.values.end());
        }
        CHECK(tst::max_principal_angle_sin(ext.basis, lifted) <= 1e-8);
        CHECK(tst::max_principal_angle_sin(lifted, ext.basis) <= 1e-8);
    }

    SUBCASE("the trailing block of S_m is the symmetric projection") {
        const KrylovState sym = symmetric_arnoldi(mask, 1.0, 1.0, bsym, m, 1.0, gamma,
                                                  dense_solver(mask, gamma));
        const int k = static_cast<int>(sym.basis.size());
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                const double a = ext.projected[static_cast<std::size_t>(i + 1) * m + (j + 1)];
                const double s = sym.projected[static_cast<std::size_t>(i) * k + j];
                CHECK(std::fabs(std::fabs(a) - std::fabs(s)) <= 1e-9);
            }
    }
}

TEST_CASE("jacobi eigensolver matches LAPACK") {
    std::mt19937 rng(101);
    for (int k : {1, 2, 5, 12, 21}) {
        std::vector<double> a(static_cast<std::size_t>(k) * k, 0.0);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j <= i; ++j) {
                const double v = (static_cast<double>(rng() % 2000) - 1000.0) / 250.0;
                a[static_cast<std::size_t>(i) * k + j] = v;
                a[static_cast<std::size_t>(j) * k + i] = v;
            }
        SmallEigen mine = jacobi_eigen(a, k);
        const SymEigen ref = sym_eigen(a, k);
        std::sort(mine.values.begin(), mine.values.end());
        for (int i = 0; i < k; ++i)
            CHECK(mine.values[static_cast<std::size_t>(i)] ==
                  doctest::Approx(ref.values[static_cast<std::size_t>(i)]).epsilon(1e-11));
    }
}

TEST_CASE("assembly agrees with the matrix exponential of the small S_m") {
    // theorem cross-check: ||b|| V_m e^{t S_m} e_1 with V_m = [v_1, R^T W] and
    // S_m = [[0, 0], [u, S~]] must equal the phi1-based assembly
    const InpaintMask mask = example_mask();
    const PixelField b = example_b();
    const std::vector<double> bsym = interior_forcing(b, mask);
    const double t = 3.0, gamma = choose_shift(4, t);
    const KrylovState st = symmetric_arnoldi(mask, 1.0, 1.0, bsym, 4, t, gamma,
                                             dense_solver(mask, gamma));
    const int k = static_cast<int>(st.basis.size());
    const int m = k + 1;

    std::vector<double> sm(static_cast<std::size_t>(m) * m, 0.0);
    const double bnorm = tst::norm2(std::vector<double>(b.values.begin(), b.values.end()));
    sm[static_cast<std::size_t>(1) * m + 0] = st.bsym_norm / bnorm;  // u = ratio * e_1
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            sm[static_cast<std::size_t>(i + 1) * m + (j + 1)] =
                st.projected[static_cast<std::size_t>(i) * k + j];

    const std::vector<double> expcol = tst::matvec(
        tst::dense_expm([&] {
            std::vector<double> scaled = sm;
            for (double& v : scaled) v *= t;
            return scaled;
        }(), m),
        m, [&] {
            std::vector<double> e1(static_cast<std::size_t>(m), 0.0);
            e1[0] = 1.0;
            return e1;
        }());

    std::vector<double> want(b.values.begin(), b.values.end());
    for (double& v : want) v *= expcol[0];
    for (int j = 0; j < k; ++j) {
        const PixelField lift = embed_from_interior(st.basis[static_cast<std::size_t>(j)], mask);
        for (std::size_t i = 0; i < want.size(); ++i)
            want[i] += bnorm * expcol[static_cast<std::size_t>(j + 1)] * lift.values[i];
    }

    const PixelField got = assemble_approximation(st, b, mask);
    for (std::size_t i = 0; i < want.size(); ++i)
        CHECK(got.values[i] == doctest::Approx(want[i]).epsilon(1e-10));
}

TEST_CASE("decode") {
    SUBCASE("all-stored mask returns the input exactly") {
        PixelField b(6, 5, 3);
        std::mt19937 rng(8);
        for (auto& v : b.values) v = static_cast<double>(rng() % 256);
        const InpaintMask full(6, 5, 1);
        MultigridConfig mg;
        const PixelField out = decode_field(b, full, 1e7, 3, mg);
        for (std::size_t i = 0; i < b.values.size(); ++i)
            CHECK(out.values[i] == b.values[i]);
    }

    SUBCASE("empty mask is rejected") {
        PixelField b(6, 5, 1);
        MultigridConfig mg;
        CHECK_THROWS_AS(decode_field(b, InpaintMask(6, 5), 1e7, 3, mg), Error);
    }

    SUBCASE("t and m are validated") {
        auto [b, mask] = frame_problem(8);
        MultigridConfig mg;
        CHECK_THROWS_AS(decode_field(b, mask, 0.0, 3, mg), Error);
        CHECK_THROWS_AS(decode_field(b, mask, -2.0, 3, mg), Error);
        CHECK_THROWS_AS(decode_field(b, mask, 1.0, 1, mg), Error);
        CHECK_THROWS_AS(decode_field(b, mask, 1.0, 25, mg), Error);
    }

    SUBCASE("multigrid invocations equal m - 2 per channel") {
        auto [b, mask] = frame_problem(24);
        MultigridConfig mg;
        for (int m : {3, 5, 8}) {
            DecodeInfo info;
            decode_field(b, mask, 1e4, m, mg, &info);
            CHECK(info.solves_per_channel == m - 2);
            CHECK(info.total_solves == m - 2);
            CHECK(info.gamma_scaled == doctest::Approx(gamma_table_row(m).gamma_opt / 1e4));
        }
    }

    SUBCASE("stored pixels come back bit-identical") {
        auto [b, mask] = frame_problem(24);
        MultigridConfig mg;
        const PixelField out = decode_field(b, mask, 1e5, 5, mg);
        for (std::size_t i = 0; i < b.values.size(); ++i)
            if (mask.bits[i]) CHECK(out.values[i] == b.values[i]);
    }

    SUBCASE("error is monotone in m and below the bound on the frame family") {
        auto [b, mask] = frame_problem(24);
        MultigridConfig mg;
        const double t = 1e3;
        const PixelField exact = dense_oracle_expm(b, mask, t);
        const std::vector<double> bsym = interior_forcing(b, mask);
        const double bs = tst::norm2(bsym);
        double prev = 1e300;
        for (int m = 3; m <= 8; ++m) {
            const PixelField f = decode_field(b, mask, t, m, mg);
            double err = 0.0;
            for (std::size_t i = 0; i < f.values.size(); ++i)
                err += (f.values[i] - exact.values[i]) * (f.values[i] - exact.values[i]);
            err = std::sqrt(err);
            CHECK(err <= error_bound(m, t, bs));
            CHECK(err <= prev * 1.05);  // small slack at the rounding floor
            prev = err;
        }
    }
}
