#include "ekd.h"

#include <chrono>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "container.hpp"
#include "encoder.hpp"
#include "error.hpp"
#include "field.hpp"
#include "harness.hpp"
#include "krylov.hpp"
#include "metrics.hpp"
#include "pnm.hpp"

struct ekd_image {
    ekd::PixelField field;
};

struct ekd_buffer {
    std::vector<std::uint8_t> bytes;
};

namespace {

thread_local std::string g_error;

ekd_status set_error(ekd::ErrorCode code, const std::string& what) {
    g_error = what;
    return static_cast<ekd_status>(code);
}

template <typename Fn>
ekd_status guarded(Fn&& fn) {
    try {
        fn();
        g_error.clear();
        return EKD_OK;
    } catch (const ekd::Error& e) {
        return set_error(e.code(), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(ekd::ErrorCode::Io, "out of memory");
    } catch (const std::exception& e) {
        return set_error(ekd::ErrorCode::Invalid, e.what());
    }
}

ekd::MultigridConfig to_mg_config(const ekd_decode_params& p) {
    ekd::MultigridConfig mg;
    mg.mu = p.mu;
    mg.nu0 = p.nu0;
    mg.nu1 = p.nu1;
    mg.nu2 = p.nu2;
    mg.levels = p.levels;
    mg.cycles = p.cycles;
    mg.eps_mask = p.eps_mask;
    mg.tolerance = p.tolerance;
    mg.coarsest_max_pixels = p.coarsest_max_pixels;
    return mg;
}

void require(bool ok, const char* what) {
    if (!ok) ekd::fail(ekd::ErrorCode::Invalid, what);
}

}  // namespace

extern "C" {

const char* ekd_error_message(void) { return g_error.c_str(); }

ekd_status ekd_image_read(const char* path, ekd_image** out) {
    return guarded([&] {
        require(path && out, "null argument");
        auto img = std::make_unique<ekd_image>();
        img->field = ekd::read_image(path);
        *out = img.release();
    });
}

ekd_status ekd_image_write(const ekd_image* img, const char* path) {
    return guarded([&] {
        require(img && path, "null argument");
        ekd::write_image(img->field, path);
    });
}

ekd_status ekd_image_create(uint32_t width, uint32_t height, uint32_t channels,
                            const double* planar, ekd_image** out) {
    return guarded([&] {
        require(out != nullptr, "null argument");
        auto img = std::make_unique<ekd_image>();
        img->field = ekd::PixelField(static_cast<int>(width),
                                     static_cast<int>(height),
                                     static_cast<int>(channels));
        if (planar)
            std::memcpy(img->field.values.data(), planar,
                        img->field.values.size() * sizeof(double));
        *out = img.release();
    });
}

void ekd_image_free(ekd_image* img) { delete img; }

uint32_t ekd_image_width(const ekd_image* img) {
    return img ? static_cast<uint32_t>(img->field.width) : 0;
}
uint32_t ekd_image_height(const ekd_image* img) {
    return img ? static_cast<uint32_t>(img->field.height) : 0;
}
uint32_t ekd_image_channels(const ekd_image* img) {
    return img ? static_cast<uint32_t>(img->field.channels) : 0;
}
const double* ekd_image_plane(const ekd_image* img, uint32_t channel) {
    if (!img || channel >= static_cast<uint32_t>(img->field.channels)) return nullptr;
    return img->field.plane(static_cast<int>(channel)).data();
}

ekd_status ekd_buffer_read(const char* path, ekd_buffer** out) {
    return guarded([&] {
        require(path && out, "null argument");
        std::ifstream in(path, std::ios::binary);
        if (!in) ekd::fail(ekd::ErrorCode::Io, std::string(path) + ": cannot open");
        auto buf = std::make_unique<ekd_buffer>();
        buf->bytes.assign(std::istreambuf_iterator<char>(in),
                          std::istreambuf_iterator<char>());
        *out = buf.release();
    });
}

ekd_status ekd_buffer_write(const ekd_buffer* buf, const char* path) {
    return guarded([&] {
        require(buf && path, "null argument");
        std::ofstream out(path, std::ios::binary);
        if (!out) ekd::fail(ekd::ErrorCode::Io, std::string(path) + ": cannot open");
        out.write(reinterpret_cast<const char*>(buf->bytes.data()),
                  static_cast<std::streamsize>(buf->bytes.size()));
        if (!out) ekd::fail(ekd::ErrorCode::Io, std::string(path) + ": write failed");
    });
}

const uint8_t* ekd_buffer_data(const ekd_buffer* buf) {
    return buf ? buf->bytes.data() : nullptr;
}
size_t ekd_buffer_size(const ekd_buffer* buf) {
    return buf ? buf->bytes.size() : 0;
}
void ekd_buffer_free(ekd_buffer* buf) { delete buf; }

void ekd_encode_params_init(ekd_encode_params* p) {
    if (!p) return;
    p->method = EKD_METHOD_DITHER;
    p->density = 0.10;
    p->sigma = 1.0;
    p->grad_threshold = 8.0;
    p->quant_bits = 8;
    p->subsample_d = 1;
    p->degenerate_corners = 0;
}

ekd_status ekd_encode(const ekd_image* img, const ekd_encode_params* p,
                      ekd_buffer** out, ekd_encode_stats* stats) {
    return guarded([&] {
        require(img && p && out, "null argument");
        ekd::EncoderParams params;
        params.method = static_cast<ekd::MaskMethod>(p->method);
        params.density = p->density;
        params.sigma = p->sigma;
        params.grad_threshold = p->grad_threshold;
        params.quant_bits = p->quant_bits;
        params.subsample_d = p->subsample_d;

        ekd::EncodedImage enc;
        try {
            enc = ekd::encode_image(img->field, params);
        } catch (const ekd::Error& e) {
            if (e.code() != ekd::ErrorCode::Degenerate || !p->degenerate_corners)
                throw;
            // degenerate signal: store the four corner pixels so that the
            // decoding problem stays well-posed
            ekd::InpaintMask corners(img->field.width, img->field.height);
            corners.set(0, 0, true);
            corners.set(0, img->field.width - 1, true);
            corners.set(img->field.height - 1, 0, true);
            corners.set(img->field.height - 1, img->field.width - 1, true);
            enc.mask = corners;
            enc.params = params;
            enc.stats.mask_count = corners.count();
            enc.stats.realized_density = corners.density();
            for (int ch = 0; ch < img->field.channels; ++ch) {
                const auto vals = ekd::masked_values(img->field.plane(ch), corners);
                const auto chain = ekd::subsample_chain(vals, params.subsample_d);
                enc.payload.push_back(
                    ekd::quantize(chain, params.quant_bits, &enc.stats.clamped_values));
            }
        }

        ekd::ContainerParams cp;
        cp.channels = static_cast<std::uint8_t>(img->field.channels);
        cp.quant_bits = static_cast<std::uint8_t>(params.quant_bits);
        cp.subsample_d = static_cast<std::uint16_t>(params.subsample_d);
        cp.method_tag = static_cast<std::uint8_t>(params.method);
        auto buf = std::make_unique<ekd_buffer>();
        buf->bytes = ekd::encode_container(enc.mask, enc.payload, cp);
        if (stats) {
            stats->density = enc.stats.realized_density;
            stats->bpp = ekd::bits_per_pixel(buf->bytes.size(), img->field.width,
                                             img->field.height);
            stats->mask_pixels = enc.stats.mask_count;
            stats->clamped_values = enc.stats.clamped_values;
        }
        *out = buf.release();
    });
}

void ekd_decode_params_init(ekd_decode_params* p) {
    if (!p) return;
    p->t = 1e7;
    p->m = 3;
    ekd::MultigridConfig mg;
    p->mu = mg.mu;
    p->nu0 = mg.nu0;
    p->nu1 = mg.nu1;
    p->nu2 = mg.nu2;
    p->levels = mg.levels;
    p->cycles = mg.cycles;
    p->eps_mask = mg.eps_mask;
    p->tolerance = mg.tolerance;
    p->coarsest_max_pixels = mg.coarsest_max_pixels;
}

ekd_status ekd_decode(const ekd_buffer* container, const ekd_decode_params* p,
                      ekd_image** out, ekd_decode_stats* stats) {
    return guarded([&] {
        require(container && p && out, "null argument");
        const auto t0 = std::chrono::steady_clock::now();
        const ekd::DecodedContainer dc = ekd::decode_container(container->bytes);
        const ekd::PixelField compressed = ekd::reconstruct_compressed(
            dc.mask, dc.payload, dc.params.channels, dc.params.quant_bits,
            dc.params.subsample_d);
        ekd::DecodeInfo info;
        auto img = std::make_unique<ekd_image>();
        img->field = ekd::decode_field(compressed, dc.mask, p->t, p->m,
                                       to_mg_config(*p), &info);
        if (stats) {
            stats->gamma_scaled = info.gamma_scaled;
            stats->solves_per_channel = info.solves_per_channel;
            stats->total_solves = info.total_solves;
            stats->wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
        }
        *out = img.release();
    });
}

ekd_status ekd_metrics(const ekd_image* a, const ekd_image* b, double* mse,
                       double* psnr) {
    return guarded([&] {
        require(a && b, "null argument");
        const double m = ekd::mean_square_error(a->field, b->field);
        if (mse) *mse = m;
        if (psnr) *psnr = ekd::psnr_from_mse(m);
    });
}

double ekd_bits_per_pixel(size_t container_bytes, uint32_t width, uint32_t height) {
    if (width == 0 || height == 0) return 0.0;
    return ekd::bits_per_pixel(container_bytes, static_cast<int>(width),
                               static_cast<int>(height));
}

ekd_status ekd_bench(uint32_t frame_size, const double* t_values, size_t n_t,
                     const ekd_decode_params* mg, const char* csv_path) {
    return guarded([&] {
        ekd::BenchOptions opt;
        opt.frame_size = static_cast<int>(frame_size);
        if (t_values && n_t > 0) opt.t_values.assign(t_values, t_values + n_t);
        if (mg) opt.mg = to_mg_config(*mg);
        if (csv_path) {
            std::ofstream out(csv_path);
            if (!out) ekd::fail(ekd::ErrorCode::Io, std::string(csv_path) + ": cannot open");
            ekd::run_bench(opt, out);
        } else {
            ekd::run_bench(opt, std::cout);
        }
    });
}

ekd_status ekd_bound_check(uint32_t frame_size, const double* t_values,
                           size_t n_t, int m_min, int m_max,
                           const ekd_decode_params* mg, const char* csv_path,
                           int* all_passed) {
    return guarded([&] {
        ekd::BoundCheckOptions opt;
        opt.frame_size = static_cast<int>(frame_size);
        if (t_values && n_t > 0) opt.t_values.assign(t_values, t_values + n_t);
        opt.m_min = m_min;
        opt.m_max = m_max;
        if (mg) opt.mg = to_mg_config(*mg);
        std::vector<ekd::BoundCheckRow> rows;
        if (csv_path) {
            std::ofstream out(csv_path);
            if (!out) ekd::fail(ekd::ErrorCode::Io, std::string(csv_path) + ": cannot open");
            rows = ekd::run_bound_check(opt, out);
        } else {
            rows = ekd::run_bound_check(opt, std::cout);
        }
        bool ok = true;
        for (const auto& r : rows) ok = ok && r.pass;
        if (all_passed) *all_passed = ok ? 1 : 0;
    });
}

}  // extern "C"
