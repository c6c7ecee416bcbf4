// ekd command-line tool: encode, decode, bench, bound-check, metrics.
// Everything runs through the public C API of libekd.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ekd.h"

namespace {

int fail_with(ekd_status rc) {
    std::fprintf(stderr, "error: %s\n", ekd_error_message());
    return static_cast<int>(rc);
}

void add_mg_flags(CLI::App* cmd, ekd_decode_params& dp) {
    cmd->add_option("--mu", dp.mu, "cycle index (1=V, 2=W)")->capture_default_str();
    cmd->add_option("--nu0", dp.nu0, "nested-iteration cycles per level")
        ->capture_default_str();
    cmd->add_option("--nu1", dp.nu1, "pre-relaxation sweeps")->capture_default_str();
    cmd->add_option("--nu2", dp.nu2, "post-relaxation sweeps")->capture_default_str();
    cmd->add_option("--levels", dp.levels, "multigrid depth")->capture_default_str();
    cmd->add_option("--cycles", dp.cycles, "mu-cycles after nested iteration")
        ->capture_default_str();
    cmd->add_option("--eps-mask", dp.eps_mask, "mask coarsening tolerance")
        ->capture_default_str();
    cmd->add_option("--tol", dp.tolerance, "per-solve relative residual target")
        ->capture_default_str();
    cmd->add_option("--coarsest-max", dp.coarsest_max_pixels,
                    "direct-solver cap (unknowns)")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"inpainting-based image codec with a rational Krylov decoder"};
    app.require_subcommand(1);

    // encode
    std::string enc_in, enc_out;
    ekd_encode_params ep;
    ekd_encode_params_init(&ep);
    std::string method = "dither";
    auto* enc = app.add_subcommand("encode", "compress a PGM/PPM image");
    enc->add_option("input", enc_in, "input image (P5/P6)")->required();
    enc->add_option("output", enc_out, "output container (.ekd)")->required();
    enc->add_option("--method", method, "mask method: edge|dither|threshold")
        ->check(CLI::IsMember({"edge", "dither", "threshold"}))
        ->capture_default_str();
    enc->add_option("--density", ep.density, "target stored-pixel fraction")
        ->capture_default_str();
    enc->add_option("--sigma", ep.sigma, "Gaussian presmoothing (edge)")
        ->capture_default_str();
    enc->add_option("--grad-threshold", ep.grad_threshold, "gradient gate (edge)")
        ->capture_default_str();
    enc->add_option("--quant", ep.quant_bits, "quantizer bits (1..8)")
        ->capture_default_str();
    enc->add_option("--d", ep.subsample_d, "chain subsampling step")
        ->capture_default_str();
    enc->add_flag("--degenerate-corners", ep.degenerate_corners,
                  "store the 4 corner pixels when the signal is degenerate");

    // decode
    std::string dec_in, dec_out;
    ekd_decode_params dp;
    ekd_decode_params_init(&dp);
    auto* dec = app.add_subcommand("decode", "reconstruct an image from a container");
    dec->add_option("input", dec_in, "input container (.ekd)")->required();
    dec->add_option("output", dec_out, "output image (P5/P6)")->required();
    dec->add_option("--t", dp.t, "diffusion time")->capture_default_str();
    dec->add_option("--m", dp.m, "Krylov subspace dimension (2..22)")
        ->capture_default_str();
    add_mg_flags(dec, dp);

    // bench
    ekd_decode_params bench_mg;
    ekd_decode_params_init(&bench_mg);
    unsigned bench_size = 64;
    std::vector<double> bench_t;
    std::string bench_out;
    auto* bench = app.add_subcommand(
        "bench", "error vs solve count: Krylov / implicit Euler / Crank-Nicolson");
    bench->add_option("--size", bench_size, "frame-problem side length")
        ->capture_default_str();
    bench->add_option("--t", bench_t, "diffusion times (default 10 1e2 1e3 1e4)");
    bench->add_option("--out", bench_out, "CSV path (default stdout)");
    add_mg_flags(bench, bench_mg);

    // bound-check
    ekd_decode_params bc_mg;
    ekd_decode_params_init(&bc_mg);
    unsigned bc_size = 64;
    std::vector<double> bc_t;
    std::string bc_out;
    int bc_mmin = 3, bc_mmax = 10;
    auto* bc = app.add_subcommand("bound-check",
                                  "measured Krylov error against the a-priori bound");
    bc->add_option("--size", bc_size, "frame-problem side length")
        ->capture_default_str();
    bc->add_option("--t", bc_t, "diffusion times (default 25 1e3 1e5)");
    bc->add_option("--m-min", bc_mmin, "smallest subspace dimension")
        ->capture_default_str();
    bc->add_option("--m-max", bc_mmax, "largest subspace dimension")
        ->capture_default_str();
    bc->add_option("--out", bc_out, "CSV path (default stdout)");
    add_mg_flags(bc, bc_mg);

    // metrics
    std::string met_a, met_b;
    auto* met = app.add_subcommand("metrics", "MSE and PSNR between two images");
    met->add_option("a", met_a, "first image")->required();
    met->add_option("b", met_b, "second image")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(EKD_ERR_INVALID);
    }

    if (enc->parsed()) {
        if (method == "edge") ep.method = EKD_METHOD_EDGE;
        else if (method == "threshold") ep.method = EKD_METHOD_THRESHOLD;
        else ep.method = EKD_METHOD_DITHER;
        if (!(ep.density > 0.0) || ep.density > 1.0 || ep.quant_bits < 1 ||
            ep.quant_bits > 8 || ep.subsample_d < 1) {
            std::fprintf(stderr, "error: invalid encoder flags\n");
            return EKD_ERR_INVALID;
        }
        ekd_image* img = nullptr;
        ekd_status rc = ekd_image_read(enc_in.c_str(), &img);
        if (rc != EKD_OK) return fail_with(rc);
        ekd_buffer* buf = nullptr;
        ekd_encode_stats stats{};
        rc = ekd_encode(img, &ep, &buf, &stats);
        if (rc == EKD_ERR_DEGENERATE) {
            std::fprintf(stderr,
                         "error: %s\nhint: rerun with --degenerate-corners or "
                         "--method threshold\n",
                         ekd_error_message());
            ekd_image_free(img);
            return rc;
        }
        if (rc != EKD_OK) { ekd_image_free(img); return fail_with(rc); }
        rc = ekd_buffer_write(buf, enc_out.c_str());
        if (rc != EKD_OK) { ekd_buffer_free(buf); ekd_image_free(img); return fail_with(rc); }
        std::printf("method=%s\n", method.c_str());
        std::printf("density=%.6f\n", stats.density);
        std::printf("bpp=%.6f\n", stats.bpp);
        std::printf("mask_pixels=%llu\n",
                    static_cast<unsigned long long>(stats.mask_pixels));
        std::printf("clamped_values=%llu\n",
                    static_cast<unsigned long long>(stats.clamped_values));
        std::printf("container_bytes=%zu\n", ekd_buffer_size(buf));
        ekd_buffer_free(buf);
        ekd_image_free(img);
        return 0;
    }

    if (dec->parsed()) {
        if (!(dp.t > 0.0)) {
            std::fprintf(stderr, "error: --t must be > 0\n");
            return EKD_ERR_INVALID;
        }
        if (dp.m < 2 || dp.m > 22) {
            std::fprintf(stderr, "error: --m must lie in 2..22\n");
            return EKD_ERR_INVALID;
        }
        ekd_buffer* buf = nullptr;
        ekd_status rc = ekd_buffer_read(dec_in.c_str(), &buf);
        if (rc != EKD_OK) return fail_with(rc);
        ekd_image* img = nullptr;
        ekd_decode_stats stats{};
        rc = ekd_decode(buf, &dp, &img, &stats);
        if (rc != EKD_OK) { ekd_buffer_free(buf); return fail_with(rc); }
        rc = ekd_image_write(img, dec_out.c_str());
        if (rc != EKD_OK) { ekd_image_free(img); ekd_buffer_free(buf); return fail_with(rc); }
        std::printf("m=%d\n", dp.m);
        std::printf("t=%g\n", dp.t);
        std::printf("gamma_scaled=%g\n", stats.gamma_scaled);
        std::printf("solves_per_channel=%d\n", stats.solves_per_channel);
        std::printf("total_solves=%d\n", stats.total_solves);
        std::printf("wall_seconds=%.6f\n", stats.wall_seconds);
        ekd_image_free(img);
        ekd_buffer_free(buf);
        return 0;
    }

    if (bench->parsed()) {
        const ekd_status rc =
            ekd_bench(bench_size, bench_t.empty() ? nullptr : bench_t.data(),
                      bench_t.size(), &bench_mg,
                      bench_out.empty() ? nullptr : bench_out.c_str());
        if (rc != EKD_OK) return fail_with(rc);
        return 0;
    }

    if (bc->parsed()) {
        int all_passed = 0;
        const ekd_status rc = ekd_bound_check(
            bc_size, bc_t.empty() ? nullptr : bc_t.data(), bc_t.size(), bc_mmin,
            bc_mmax, &bc_mg, bc_out.empty() ? nullptr : bc_out.c_str(), &all_passed);
        if (rc != EKD_OK) return fail_with(rc);
        std::printf("result=%s\n", all_passed ? "pass" : "fail");
        return all_passed ? 0 : EKD_ERR_SOLVER;
    }

    if (met->parsed()) {
        ekd_image* a = nullptr;
        ekd_image* b = nullptr;
        ekd_status rc = ekd_image_read(met_a.c_str(), &a);
        if (rc != EKD_OK) return fail_with(rc);
        rc = ekd_image_read(met_b.c_str(), &b);
        if (rc != EKD_OK) { ekd_image_free(a); return fail_with(rc); }
        double mse = 0.0, psnr = 0.0;
        rc = ekd_metrics(a, b, &mse, &psnr);
        ekd_image_free(a);
        ekd_image_free(b);
        if (rc != EKD_OK) return fail_with(rc);
        std::printf("mse=%.6f\n", mse);
        std::printf("psnr=%.6f\n", psnr);
        return 0;
    }

    return EKD_ERR_INVALID;
}
