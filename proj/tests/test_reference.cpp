#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "error.hpp"
#include "heat_operator.hpp"
#include "krylov.hpp"
#include "metrics.hpp"
#include "oracles.hpp"
#include "reference.hpp"

using namespace ekd;
namespace tst = ekd::testing;

namespace {

double rel_err(const PixelField& a, const PixelField& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        num += (a.values[i] - b.values[i]) * (a.values[i] - b.values[i]);
        den += b.values[i] * b.values[i];
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("frame problem construction") {
    SUBCASE("n = 3 has a single interior unknown whose steady state is 255") {
        auto [b, mask] = frame_problem(3);
        CHECK(mask.count() == 8);
        CHECK(mask.interior_size() == 1);
        MultigridConfig mg;
        const PixelField s = steady_state(b, mask, mg);
        CHECK(s.at(0, 1, 1) == doctest::Approx(255.0).epsilon(1e-10));
    }

    SUBCASE("n = 2 has no interior") {
        CHECK_THROWS_AS(frame_problem(2), Error);
        CHECK_THROWS_AS(frame_problem(1), Error);
    }

    SUBCASE("the mask stores exactly the border") {
        auto [b, mask] = frame_problem(10);
        for (int y = 0; y < 10; ++y)
            for (int x = 0; x < 10; ++x) {
                const bool border = x == 0 || y == 0 || x == 9 || y == 9;
                CHECK(mask.stored(y, x) == border);
                CHECK(b.at(0, y, x) == (border ? 255.0 : 0.0));
            }
    }
}

TEST_CASE("dense oracle") {
    SUBCASE("t = 0 reproduces b") {
        auto [b, mask] = frame_problem(8);
        const PixelField out = dense_oracle_expm(b, mask, 0.0);
        for (std::size_t i = 0; i < b.values.size(); ++i)
            CHECK(out.values[i] == doctest::Approx(b.values[i]));
    }

    SUBCASE("t -> infinity approaches the steady state") {
        auto [b, mask] = frame_problem(12);
        MultigridConfig mg;
        const PixelField inf = dense_oracle_expm(b, mask, 1e12);
        const PixelField ss = steady_state(b, mask, mg);
        CHECK(rel_err(inf, ss) <= 1e-8);
    }

    SUBCASE("grid reflection commutes with the oracle") {
        std::mt19937 rng(19);
        const InpaintMask mask = tst::random_mask(7, 5, 0.3, rng);
        PixelField b(7, 5, 1);
        for (std::size_t i = 0; i < b.values.size(); ++i)
            b.values[i] = mask.bits[i] ? static_cast<double>(rng() % 256) : 0.0;
        const double t = 7.5;
        const PixelField out = dense_oracle_expm(b, mask, t);

        InpaintMask rmask(7, 5);
        PixelField rb(7, 5, 1);
        for (int y = 0; y < 5; ++y)
            for (int x = 0; x < 7; ++x) {
                rmask.set(y, 6 - x, mask.stored(y, x));
                rb.at(0, y, 6 - x) = b.at(0, y, x);
            }
        const PixelField rout = dense_oracle_expm(rb, rmask, t);
        for (int y = 0; y < 5; ++y)
            for (int x = 0; x < 7; ++x)
                CHECK(rout.at(0, y, 6 - x) == doctest::Approx(out.at(0, y, x)).epsilon(1e-12));
    }

    SUBCASE("maximum principle holds for oracle outputs") {
        std::mt19937 rng(23);
        for (int trial = 0; trial < 5; ++trial) {
            const InpaintMask mask = tst::random_mask(9, 9, 0.2, rng);
            PixelField b(9, 9, 1);
            double lo = 255.0, hi = 0.0;
            for (std::size_t i = 0; i < b.values.size(); ++i)
                if (mask.bits[i]) {
                    b.values[i] = 20.0 + static_cast<double>(rng() % 216);
                    lo = std::min(lo, b.values[i]);
                    hi = std::max(hi, b.values[i]);
                }
            const PixelField out = dense_oracle_expm(b, mask, 50.0);
            for (std::size_t i = 0; i < out.values.size(); ++i)
                if (!mask.bits[i]) {
                    CHECK(out.values[i] >= -1e-9);
                    CHECK(out.values[i] <= hi + 1e-9);
                }
        }
    }
}

TEST_CASE("structured frame oracle agrees with the dense one") {
    for (int n : {8, 16, 24}) {
        auto [b, mask] = frame_problem(n);
        for (double t : {0.5, 25.0, 1e4}) {
            const PixelField fast = frame_oracle_expm(b, t);
            const PixelField dense = dense_oracle_expm(b, mask, t);
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < dense.values.size(); ++i) {
                num += (fast.values[i] - dense.values[i]) * (fast.values[i] - dense.values[i]);
                den += dense.values[i] * dense.values[i];
            }
            CHECK(std::sqrt(num / den) <= 1e-12);
        }
    }
}

TEST_CASE("implicit Euler") {
    MultigridConfig mg;

    SUBCASE("all-stored mask returns b unchanged") {
        PixelField b(5, 4, 1, 200.0);
        const InpaintMask full(5, 4, 1);
        const PixelField out = implicit_euler(b, full, 10.0, 3, mg);
        for (std::size_t i = 0; i < b.values.size(); ++i)
            CHECK(out.values[i] == b.values[i]);
    }

    SUBCASE("first-order convergence: halving check at t = 100 on 32x32") {
        auto [b, mask] = frame_problem(32);
        const double t = 100.0;
        const PixelField exact = dense_oracle_expm(b, mask, t);
        const double e1 = rel_err(implicit_euler(b, mask, t, 16, mg), exact);
        const double e2 = rel_err(implicit_euler(b, mask, t, 32, mg), exact);
        const double ratio = e2 / e1;
        CHECK(ratio >= 0.4);
        CHECK(ratio <= 0.6);
    }

    SUBCASE("solve count equals n per channel") {
        auto [b, mask] = frame_problem(8);
        int solves = 0;
        implicit_euler(b, mask, 5.0, 7, mg, &solves);
        CHECK(solves == 7);
    }

    SUBCASE("error decreases monotonically in n on the frame family") {
        auto [b, mask] = frame_problem(16);
        const double t = 50.0;
        const PixelField exact = dense_oracle_expm(b, mask, t);
        double prev = 1e300;
        for (int n : {1, 2, 4, 8, 16}) {
            const double e = rel_err(implicit_euler(b, mask, t, n, mg), exact);
            CHECK(e <= prev);
            prev = e;
        }
    }
}

TEST_CASE("Crank-Nicolson") {
    MultigridConfig mg;

    SUBCASE("all-stored mask returns b unchanged") {
        PixelField b(5, 4, 1, 127.0);
        const InpaintMask full(5, 4, 1);
        const PixelField out = crank_nicolson(b, full, 10.0, 3, mg);
        for (std::size_t i = 0; i < b.values.size(); ++i)
            CHECK(out.values[i] == b.values[i]);
    }

    SUBCASE("second-order convergence: halving check at t = 10 on 32x32") {
        auto [b, mask] = frame_problem(32);
        const double t = 10.0;
        const PixelField exact = dense_oracle_expm(b, mask, t);
        const double e1 = rel_err(crank_nicolson(b, mask, t, 8, mg), exact);
        const double e2 = rel_err(crank_nicolson(b, mask, t, 16, mg), exact);
        const double ratio = e2 / e1;
        CHECK(ratio >= 0.2);
        CHECK(ratio <= 0.3);
    }

    SUBCASE("large t degrades Crank-Nicolson below implicit Euler") {
        auto [b, mask] = frame_problem(32);
        const double t = 1e4;
        const int n = 32;
        const PixelField exact = dense_oracle_expm(b, mask, t);
        const double cn = rel_err(crank_nicolson(b, mask, t, n, mg), exact);
        const double eu = rel_err(implicit_euler(b, mask, t, n, mg), exact);
        CHECK(cn > eu);
    }
}

TEST_CASE("steady state") {
    MultigridConfig mg;

    SUBCASE("three-pixel row interpolates the stored ends") {
        PixelField b(3, 1, 1);
        InpaintMask mask(3, 1);
        mask.set(0, 0, true);
        mask.set(0, 2, true);
        b.at(0, 0, 0) = 0.0;
        b.at(0, 0, 2) = 255.0;
        const PixelField s = steady_state(b, mask, mg);
        CHECK(s.at(0, 0, 1) == doctest::Approx(127.5).epsilon(1e-12));
    }

    SUBCASE("empty mask is rejected") {
        PixelField b(4, 4, 1);
        CHECK_THROWS_AS(steady_state(b, InpaintMask(4, 4), mg), Error);
    }

    SUBCASE("matches the dense solve on random instances") {
        std::mt19937 rng(31);
        for (int trial = 0; trial < 3; ++trial) {
            const InpaintMask mask = tst::random_mask(12, 9, 0.25, rng);
            PixelField b(12, 9, 1);
            for (std::size_t i = 0; i < b.values.size(); ++i)
                b.values[i] = mask.bits[i] ? static_cast<double>(rng() % 256) : 0.0;
            const PixelField s = steady_state(b, mask, mg);
            const PixelField inf = dense_oracle_expm(b, mask, 1e13);
            CHECK(rel_err(s, inf) <= 1e-8);
        }
    }
}

TEST_CASE("all routes meet at the steady state for huge times") {
    auto [b, mask] = frame_problem(32);
    MultigridConfig mg;
    const double t = 1e9;
    const PixelField kry = decode_field(b, mask, t, 3, mg);
    const PixelField eul = implicit_euler(b, mask, t, 4, mg);
    const PixelField ss = steady_state(b, mask, mg);
    CHECK(mean_square_error(kry, ss) <= 1e-6);
    CHECK(mean_square_error(eul, ss) <= 1e-6);
    // Crank-Nicolson barely damps at gamma = 2n/t for huge t (the undamped
    // high modes are the known large-t weakness); its limit consistency shows
    // as monotone decay toward the steady state in n rather than as a small
    // fixed-n error.
    double prev = 1e300;
    for (int n : {4, 16, 64}) {
        const double mse = mean_square_error(crank_nicolson(b, mask, t, n, mg), ss);
        CHECK(mse < prev);
        prev = mse;
    }
}
