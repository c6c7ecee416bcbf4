/* ekd — inpainting-based image codec with an extended Krylov subspace
 * decoder.
 *
 * The library reconstructs images from a sparse set of stored pixels by
 * evolving the masked heat equation to a prescribed time; the matrix
 * exponential action is approximated in a small rational Krylov subspace
 * whose shifted linear systems are solved by a mask-aware full multigrid
 * method.
 *
 * All functions return EKD_OK (0) on success or a nonzero ekd_status.
 * ekd_error_message() describes the most recent failure on the calling
 * thread. Objects are opaque; every *_create/*_read has a matching *_free.
 */

#ifndef EKD_H
#define EKD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ekd_status {
    EKD_OK = 0,
    EKD_ERR_IO = 1,         /* file errors, malformed or truncated streams */
    EKD_ERR_DEGENERATE = 2, /* encoder cannot derive a usable mask */
    EKD_ERR_SOLVER = 3,     /* solver did not converge */
    EKD_ERR_INVALID = 4,    /* parameter or dimension contract violation */
} ekd_status;

typedef enum ekd_method {
    EKD_METHOD_THRESHOLD = 0,
    EKD_METHOD_EDGE = 1,
    EKD_METHOD_DITHER = 2,
} ekd_method;

typedef struct ekd_image ekd_image;   /* planar double image */
typedef struct ekd_buffer ekd_buffer; /* owned byte buffer (EKD1 container) */

/* Most recent error on this thread; empty string if none. */
const char* ekd_error_message(void);

/* ---- images ------------------------------------------------------------ */

/* Binary PGM (P5) / PPM (P6), 8-bit. */
ekd_status ekd_image_read(const char* path, ekd_image** out);
ekd_status ekd_image_write(const ekd_image* img, const char* path);

/* planar: channels * width * height doubles, row-major per plane; pass NULL
 * for an all-zero image */
ekd_status ekd_image_create(uint32_t width, uint32_t height, uint32_t channels,
                            const double* planar, ekd_image** out);
void ekd_image_free(ekd_image* img);

uint32_t ekd_image_width(const ekd_image* img);
uint32_t ekd_image_height(const ekd_image* img);
uint32_t ekd_image_channels(const ekd_image* img);
const double* ekd_image_plane(const ekd_image* img, uint32_t channel);

/* ---- byte buffers ------------------------------------------------------ */

ekd_status ekd_buffer_read(const char* path, ekd_buffer** out);
ekd_status ekd_buffer_write(const ekd_buffer* buf, const char* path);
const uint8_t* ekd_buffer_data(const ekd_buffer* buf);
size_t ekd_buffer_size(const ekd_buffer* buf);
void ekd_buffer_free(ekd_buffer* buf);

/* ---- encoding ---------------------------------------------------------- */

typedef struct ekd_encode_params {
    int method;            /* ekd_method */
    double density;        /* target stored-pixel fraction, (0,1] */
    double sigma;          /* Gaussian presmoothing (edge method) */
    double grad_threshold; /* gradient gate (edge method) */
    int quant_bits;        /* 1..8 */
    int subsample_d;       /* >= 1, 1 = off */
    int degenerate_corners; /* nonzero: fall back to the 4 corner pixels when
                               the signal is degenerate */
} ekd_encode_params;

typedef struct ekd_encode_stats {
    double density;
    double bpp;
    uint64_t mask_pixels;
    uint64_t clamped_values;
} ekd_encode_stats;

void ekd_encode_params_init(ekd_encode_params* p);

ekd_status ekd_encode(const ekd_image* img, const ekd_encode_params* p,
                      ekd_buffer** out, ekd_encode_stats* stats);

/* ---- decoding ---------------------------------------------------------- */

typedef struct ekd_decode_params {
    double t;     /* diffusion time, > 0 */
    int m;        /* Krylov subspace dimension, 2..22 */
    int mu;       /* cycle index: 1 = V, 2 = W */
    int nu0;      /* nested-iteration cycles per level */
    int nu1;      /* pre-relaxation sweeps */
    int nu2;      /* post-relaxation sweeps */
    int levels;   /* multigrid depth */
    int cycles;   /* mu-cycles after nested iteration */
    double eps_mask;  /* mask-coarsening tolerance */
    double tolerance; /* relative-residual target of each solve */
    int coarsest_max_pixels;
} ekd_decode_params;

typedef struct ekd_decode_stats {
    double gamma_scaled;
    int solves_per_channel;
    int total_solves;
    double wall_seconds;
} ekd_decode_stats;

void ekd_decode_params_init(ekd_decode_params* p);

ekd_status ekd_decode(const ekd_buffer* container, const ekd_decode_params* p,
                      ekd_image** out, ekd_decode_stats* stats);

/* ---- metrics ----------------------------------------------------------- */

/* psnr is +inf for identical images */
ekd_status ekd_metrics(const ekd_image* a, const ekd_image* b, double* mse,
                       double* psnr);

double ekd_bits_per_pixel(size_t container_bytes, uint32_t width, uint32_t height);

/* ---- evaluation harnesses ---------------------------------------------- */

/* Krylov vs implicit Euler vs Crank-Nicolson on the all-white frame problem.
 * CSV goes to csv_path, or stdout when csv_path is NULL. t_values may be NULL
 * for the default sweep {10, 1e2, 1e3, 1e4}. */
ekd_status ekd_bench(uint32_t frame_size, const double* t_values, size_t n_t,
                     const ekd_decode_params* mg, const char* csv_path);

/* Measured Krylov error vs the a-priori bound on the frame problem for
 * m = m_min..m_max. all_passed receives 1 when no row violates its bound.
 * t_values may be NULL for the default {25, 1e3, 1e5}. */
ekd_status ekd_bound_check(uint32_t frame_size, const double* t_values,
                           size_t n_t, int m_min, int m_max,
                           const ekd_decode_params* mg, const char* csv_path,
                           int* all_passed);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* EKD_H */
